#pragma once

// Test-only problems with independent closed-form or linear-algebra oracles.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <memory>
#include <random>
#include <vector>

#include "grppa/engine.hpp"
#include "grppa/params.hpp"

namespace grppa::testing {

/// f(x) = ½xᵀQx + cᵀx on ℝⁿ with a dense coefficient map.
class QuadraticBlock final : public Block {
 public:
  QuadraticBlock(Eigen::MatrixXd q, Eigen::VectorXd c, Eigen::MatrixXd a)
      : q_(std::move(q)), c_(std::move(c)), a_dense_(std::move(a)), map_(LinearMap::dense(a_dense_)) {}

  const LinearMap& map() const override { return map_; }

  Eigen::VectorXd solve_prox(const Eigen::VectorXd& center, const Eigen::VectorXd& multiplier, double sigma_bar,
                             double tau) const override {
    const Eigen::MatrixXd ata = a_dense_.transpose() * a_dense_;
    const Eigen::MatrixXd lhs = q_ + sigma_bar * ata;
    const Eigen::VectorXd rhs = sigma_bar * ata * center + tau * a_dense_.transpose() * multiplier - c_;
    return lhs.ldlt().solve(rhs);
  }

  double objective(const Eigen::VectorXd& x) const override { return 0.5 * x.dot(q_ * x) + c_.dot(x); }

  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::VectorXd& c() const { return c_; }
  const Eigen::MatrixXd& a() const { return a_dense_; }

 private:
  Eigen::MatrixXd q_;
  Eigen::VectorXd c_;
  Eigen::MatrixXd a_dense_;
  LinearMap map_;
};

struct QuadraticProblem {
  BlockProblem problem;
  std::vector<std::shared_ptr<const QuadraticBlock>> blocks;
};

inline QuadraticProblem make_quadratic(std::vector<std::shared_ptr<const QuadraticBlock>> blocks, Eigen::VectorXd b) {
  QuadraticProblem qp;
  qp.blocks = blocks;
  for (const auto& blk : blocks) qp.problem.blocks.push_back(blk);
  qp.problem.b = std::move(b);
  return qp;
}

/// Primal-dual solution of the KKT system Qx + c − τAᵀλ = 0, Ax = b by a dense LU solve.
struct KktSolution {
  std::vector<Eigen::VectorXd> x;
  Eigen::VectorXd lambda;
};

inline KktSolution solve_kkt(const QuadraticProblem& qp, double tau) {
  Eigen::Index n = 0;
  const Eigen::Index m = qp.problem.b.size();
  for (const auto& blk : qp.blocks) n += blk->a().cols();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  Eigen::Index off = 0;
  for (const auto& blk : qp.blocks) {
    const Eigen::Index ni = blk->a().cols();
    k.block(off, off, ni, ni) = blk->q();
    k.block(off, n, ni, m) = -tau * blk->a().transpose();
    k.block(n, off, m, ni) = blk->a();
    rhs.segment(off, ni) = -blk->c();
    off += ni;
  }
  rhs.tail(m) = qp.problem.b;
  const Eigen::VectorXd sol = k.fullPivLu().solve(rhs);
  KktSolution out;
  off = 0;
  for (const auto& blk : qp.blocks) {
    out.x.push_back(sol.segment(off, blk->a().cols()));
    off += blk->a().cols();
  }
  out.lambda = sol.tail(m);
  return out;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) { return random_matrix(rng, n, 1); }

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  const Eigen::MatrixXd m = random_matrix(rng, n, n);
  return 0.5 * (m + m.transpose());
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random p-block parameters strictly inside the admissible region.
inline SolverParams random_params(std::mt19937_64& rng, std::size_t p) {
  SolverParams params;
  params.s = uniform(rng, 0.5, 20.0);
  params.tau = uniform(rng, 0.1, 2.0);
  params.epsilon = uniform(rng, -2.0, 2.0);
  params.gamma = uniform(rng, 0.1, 1.9);
  params.sigma.resize(p);
  params.sigma[0] = params.first_sigma_bound() * uniform(rng, 1.01, 3.0);
  for (std::size_t i = 1; i < p; ++i) params.sigma[i] = params.other_sigma_bound() * uniform(rng, 1.01, 3.0);
  return params;
}

/// Random strictly convex quadratic blocks with full-column-rank maps into ℝᵐ.
inline QuadraticProblem random_quadratic(std::mt19937_64& rng, std::size_t p, Eigen::Index m) {
  std::vector<std::shared_ptr<const QuadraticBlock>> blocks;
  std::uniform_int_distribution<Eigen::Index> dim(1, m);
  for (std::size_t i = 0; i < p; ++i) {
    const Eigen::Index ni = dim(rng);
    const Eigen::MatrixXd r = random_matrix(rng, ni, ni);
    Eigen::MatrixXd q = r * r.transpose() + 0.5 * Eigen::MatrixXd::Identity(ni, ni);
    blocks.push_back(std::make_shared<QuadraticBlock>(std::move(q), random_vector(rng, ni), random_matrix(rng, m, ni)));
  }
  return make_quadratic(std::move(blocks), random_vector(rng, m));
}

inline std::vector<Eigen::VectorXd> random_blocks(std::mt19937_64& rng, const BlockProblem& problem) {
  std::vector<Eigen::VectorXd> x;
  for (const auto& blk : problem.blocks) x.push_back(random_vector(rng, blk->map().cols()));
  return x;
}

}  // namespace grppa::testing
