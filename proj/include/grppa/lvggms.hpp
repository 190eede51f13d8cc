#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "grppa/engine.hpp"

namespace grppa::lvggms {

/// min ⟨X,C⟩ − log det X + ν‖S‖₁ + μ·tr L  s.t.  X − S + L = 0, L ⪰ 0.
struct Instance {
  Eigen::MatrixXd C;
  double nu = 0.005;
  double mu = 0.05;
  std::optional<std::uint64_t> seed;  // set when produced by generate()
  std::optional<double> density;

  Eigen::Index n() const { return C.rows(); }
};

/// Symmetrizes C and checks ν > 0, μ > 0, C square. Throws std::invalid_argument.
Instance make_instance(Eigen::MatrixXd C, double nu, double mu);

struct Iterate {
  Eigen::MatrixXd X;
  Eigen::MatrixXd S;
  Eigen::MatrixXd L;
  Eigen::MatrixXd lambda;
};

/// (X, S, L, λ) = (a·I, b·I, c·I, d·I).
Iterate scaled_identity_start(Eigen::Index n, double x, double s, double l, double lambda);
/// (I, 4I, 3I, 0)
Iterate default_start(Eigen::Index n);

/// (M + Mᵀ)/2
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

/**
 * X-subproblem: argmin ⟨X,C⟩ − log det X + (σ̄/2)‖X − Xᵏ − (τ/σ̄)λ̄‖²_F.
 *
 * With C − σ̄Xᵏ − τλ̄ = U·Diag(ρ)·Uᵀ the minimizer is U·Diag(g)·Uᵀ where gᵢ is
 * the positive root of σ̄g² + ρᵢg − 1 = 0. Throws std::runtime_error if the
 * eigensolver fails.
 */
Eigen::MatrixXd x_prox(const Eigen::MatrixXd& center, const Eigen::MatrixXd& multiplier, double sigma_bar,
                       double tau, const Eigen::MatrixXd& C);

/// sign(a)·max(|a| − κ, 0)
double shrink(double a, double kappa);

/// S-subproblem: entrywise Shrink(Sᵏ − (τ/σ̄)λ̄^{k+1/2}, ν/σ̄).
Eigen::MatrixXd s_prox(const Eigen::MatrixXd& center, const Eigen::MatrixXd& multiplier, double sigma_bar,
                       double tau, double nu);

/// Frobenius-nearest PSD matrix to sym(m): clamp negative eigenvalues to zero.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m);

/// L-subproblem: PSD projection of Lᵏ + (τλ̄^{k+1/2} − μI)/σ̄.
Eigen::MatrixXd l_prox(const Eigen::MatrixXd& center, const Eigen::MatrixXd& multiplier, double sigma_bar,
                       double tau, double mu);

/// log det of a symmetric positive definite matrix via Cholesky; throws
/// std::domain_error if the factorization fails.
double log_det_spd(const Eigen::MatrixXd& x);

/// F(X,S,L). Throws std::domain_error when X is not positive definite.
double objective(const Instance& instance, const Eigen::MatrixXd& X, const Eigen::MatrixXd& S,
                 const Eigen::MatrixXd& L);

/**
 * Synthetic instance: sparse symmetric precision matrix (unit off-diagonal
 * entries at the given density, shifted to be PD), then C is the sample
 * covariance of 10·n Gaussian draws from its inverse. Deterministic in seed.
 * Throws std::invalid_argument for n < 2 or density ∉ (0, 1).
 */
Instance generate(Eigen::Index n, double density, std::uint64_t seed);

/// Three-block problem with A₁ = I (X), A₂ = −I (S), A₃ = I (L), b = 0 on vectorized n×n matrices.
BlockProblem make_problem(const Instance& instance);

/// Vectorized (X, S, L) and λ in the layout make_problem expects.
std::vector<Eigen::VectorXd> to_blocks(const Iterate& it);
Eigen::VectorXd to_vector(const Eigen::MatrixXd& m);
Eigen::MatrixXd to_matrix(const Eigen::VectorXd& v, Eigen::Index n);

}  // namespace grppa::lvggms
