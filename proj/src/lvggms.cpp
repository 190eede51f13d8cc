#include "grppa/lvggms.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <stdexcept>

namespace grppa::lvggms {

Instance make_instance(Eigen::MatrixXd C, double nu, double mu) {
  if (C.rows() != C.cols() || C.rows() == 0) throw std::invalid_argument("covariance must be square and non-empty");
  if (!(nu > 0.0) || !(mu > 0.0)) throw std::invalid_argument("nu and mu must be positive");
  Instance inst;
  inst.C = symmetrize(C);
  inst.nu = nu;
  inst.mu = mu;
  return inst;
}

Iterate scaled_identity_start(Eigen::Index n, double x, double s, double l, double lambda) {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  return {x * eye, s * eye, l * eye, lambda * eye};
}

Iterate default_start(Eigen::Index n) { return scaled_identity_start(n, 1.0, 4.0, 3.0, 0.0); }

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_symmetric(const Eigen::MatrixXd& m, const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(m));
  if (eig.info() != Eigen::Success) throw std::runtime_error(std::string(who) + ": eigendecomposition failed");
  return eig;
}

void check_square(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* who) {
  if (a.rows() != a.cols() || a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix shapes disagree");
  }
}

}  // namespace

Eigen::MatrixXd x_prox(const Eigen::MatrixXd& center, const Eigen::MatrixXd& multiplier, double sigma_bar,
                       double tau, const Eigen::MatrixXd& C) {
  check_square(center, multiplier, "x_prox");
  check_square(center, C, "x_prox");
  if (!(sigma_bar > 0.0)) throw std::invalid_argument("x_prox: sigma_bar must be positive");
  const auto eig = eigen_symmetric(C - sigma_bar * center - tau * multiplier, "x_prox");
  const Eigen::VectorXd& rho = eig.eigenvalues();
  // −ρ + √(ρ² + 4σ̄) cancels badly for large positive ρ; use 2/(ρ + √(ρ² + 4σ̄)) there.
  Eigen::VectorXd g(rho.size());
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    const double root = std::sqrt(rho[i] * rho[i] + 4.0 * sigma_bar);
    g[i] = rho[i] > 0.0 ? 2.0 / (rho[i] + root) : (-rho[i] + root) / (2.0 * sigma_bar);
  }
  const Eigen::MatrixXd& u = eig.eigenvectors();
  return symmetrize(u * g.asDiagonal() * u.transpose());
}

double shrink(double a, double kappa) {
  if (a > kappa) return a - kappa;
  if (a < -kappa) return a + kappa;
  return 0.0;
}

Eigen::MatrixXd s_prox(const Eigen::MatrixXd& center, const Eigen::MatrixXd& multiplier, double sigma_bar,
                       double tau, double nu) {
  if (center.rows() != multiplier.rows() || center.cols() != multiplier.cols()) {
    throw std::invalid_argument("s_prox: matrix shapes disagree");
  }
  if (!(sigma_bar > 0.0)) throw std::invalid_argument("s_prox: sigma_bar must be positive");
  const double kappa = nu / sigma_bar;
  return (center - (tau / sigma_bar) * multiplier).unaryExpr([kappa](double a) { return shrink(a, kappa); });
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("project_psd: matrix must be square");
  const auto eig = eigen_symmetric(m, "project_psd");
  const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXd& v = eig.eigenvectors();
  return symmetrize(v * clamped.asDiagonal() * v.transpose());
}

Eigen::MatrixXd l_prox(const Eigen::MatrixXd& center, const Eigen::MatrixXd& multiplier, double sigma_bar,
                       double tau, double mu) {
  check_square(center, multiplier, "l_prox");
  if (!(sigma_bar > 0.0)) throw std::invalid_argument("l_prox: sigma_bar must be positive");
  const Eigen::Index n = center.rows();
  const Eigen::MatrixXd shifted =
      center + (tau * multiplier - mu * Eigen::MatrixXd::Identity(n, n)) / sigma_bar;
  return project_psd(shifted);
}

double log_det_spd(const Eigen::MatrixXd& x) {
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrize(x));
  if (llt.info() != Eigen::Success) throw std::domain_error("log det: matrix is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double objective(const Instance& instance, const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                 const Eigen::MatrixXd& L) {
  return (X.cwiseProduct(instance.C)).sum() - log_det_spd(X) + instance.nu * S.cwiseAbs().sum() +
         instance.mu * L.trace();
}

Instance generate(Eigen::Index n, double density, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate: n must be at least 2");
  if (!(density > 0.0 && density < 1.0)) throw std::invalid_argument("generate: density must lie in (0, 1)");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd upper = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (unit(rng) < density) upper(i, j) = 1.0;
    }
  }
  Eigen::MatrixXd precision = upper + upper.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(precision, Eigen::EigenvaluesOnly);
  const double lowest = eig.eigenvalues().minCoeff();
  if (lowest < 0.0) precision += 1.1 * std::abs(lowest) * Eigen::MatrixXd::Identity(n, n);

  const Eigen::MatrixXd covariance = symmetrize(precision.inverse());
  const Eigen::MatrixXd factor = Eigen::LLT<Eigen::MatrixXd>(covariance).matrixL();

  const Eigen::Index samples = 10 * n;
  Eigen::MatrixXd z(n, samples);
  for (Eigen::Index j = 0; j < samples; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = normal(rng);
  }
  Eigen::MatrixXd draws = factor * z;
  const Eigen::VectorXd mean = draws.rowwise().mean();
  draws.colwise() -= mean;
  const Eigen::MatrixXd sample_cov = draws * draws.transpose() / static_cast<double>(samples - 1);

  Instance inst = make_instance(sample_cov, 0.005, 0.05);
  inst.seed = seed;
  inst.density = density;
  return inst;
}

Eigen::VectorXd to_vector(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd to_matrix(const Eigen::VectorXd& v, Eigen::Index n) {
  if (v.size() != n * n) throw std::invalid_argument("to_matrix: size is not n*n");
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

std::vector<Eigen::VectorXd> to_blocks(const Iterate& it) {
  return {to_vector(it.X), to_vector(it.S), to_vector(it.L)};
}

namespace {

class MatrixBlock : public Block {
 public:
  MatrixBlock(Eigen::Index n, double sign) : n_(n), map_(LinearMap::scaled_identity(n * n, sign)) {}
  const LinearMap& map() const override { return map_; }

 protected:
  Eigen::MatrixXd mat(const Eigen::VectorXd& v) const { return to_matrix(v, n_); }
  Eigen::Index n_;

 private:
  LinearMap map_;
};

class LogDetBlock final : public MatrixBlock {
 public:
  explicit LogDetBlock(Instance inst) : MatrixBlock(inst.n(), 1.0), inst_(std::move(inst)) {}

  Eigen::VectorXd solve_prox(const Eigen::VectorXd& center, const Eigen::VectorXd& multiplier, double sigma_bar,
                             double tau) const override {
    return to_vector(x_prox(mat(center), mat(multiplier), sigma_bar, tau, inst_.C));
  }
  double objective(const Eigen::VectorXd& x) const override {
    const Eigen::MatrixXd X = mat(x);
    return X.cwiseProduct(inst_.C).sum() - log_det_spd(X);
  }

 private:
  Instance inst_;
};

// A₂ = −I turns the generic center Sᵏ + (τ/σ̄)·(−λ̄) into the S-subproblem's Sᵏ − (τ/σ̄)λ̄.
class L1Block final : public MatrixBlock {
 public:
  L1Block(Eigen::Index n, double nu) : MatrixBlock(n, -1.0), nu_(nu) {}

  Eigen::VectorXd solve_prox(const Eigen::VectorXd& center, const Eigen::VectorXd& multiplier, double sigma_bar,
                             double tau) const override {
    return to_vector(s_prox(mat(center), mat(multiplier), sigma_bar, tau, nu_));
  }
  double objective(const Eigen::VectorXd& x) const override { return nu_ * x.cwiseAbs().sum(); }

 private:
  double nu_;
};

class TraceBlock final : public MatrixBlock {
 public:
  TraceBlock(Eigen::Index n, double mu) : MatrixBlock(n, 1.0), mu_(mu) {}

  Eigen::VectorXd solve_prox(const Eigen::VectorXd& center, const Eigen::VectorXd& multiplier, double sigma_bar,
                             double tau) const override {
    return to_vector(l_prox(mat(center), mat(multiplier), sigma_bar, tau, mu_));
  }
  double objective(const Eigen::VectorXd& x) const override { return mu_ * mat(x).trace(); }

 private:
  double mu_;
};

}  // namespace

BlockProblem make_problem(const Instance& instance) {
  const Eigen::Index n = instance.n();
  BlockProblem problem;
  problem.blocks.push_back(std::make_shared<LogDetBlock>(instance));
  problem.blocks.push_back(std::make_shared<L1Block>(n, instance.nu));
  problem.blocks.push_back(std::make_shared<TraceBlock>(n, instance.mu));
  problem.b = Eigen::VectorXd::Zero(n * n);
  return problem;
}

}  // namespace grppa::lvggms
