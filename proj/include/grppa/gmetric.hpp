#pragma once

#include <Eigen/Core>

#include <vector>

#include "grppa/linear_map.hpp"
#include "grppa/params.hpp"

namespace grppa {

/// Concatenates block variables and a multiplier into one stacked vector (x₁, …, x_p, λ).
Eigen::VectorXd stack(const std::vector<Eigen::VectorXd>& blocks, const Eigen::VectorXd& multiplier);

struct PdReport {
  enum class Status { PositiveDefinite, NotPositiveDefinite, Indeterminate };

  Status status = Status::Indeterminate;
  double min_eigenvalue = 0.0;

  bool positive_definite() const { return status == Status::PositiveDefinite; }
};

/**
 * The parameterized proximal matrix G for a p-block problem.
 *
 * Layout (blocks of sizes n₁, …, n_p, m):
 *
 *   [ w₁A₁ᵀA₁                      −εA₁ᵀ ]
 *   [          σ̄₂A₂ᵀA₂              −τA₂ᵀ ]
 *   [                   ⋱           ⋮    ]
 *   [                      σ̄_pA_pᵀA_p −τA_pᵀ ]
 *   [ −εA₁    −τA₂   …    −τA_p       s·I  ]
 *
 * with w₁ = σ₁ + (ε² − 1)/s. Used for convergence diagnostics only; the
 * iteration itself never touches G.
 */
class GMetric {
 public:
  /// Throws std::invalid_argument if the block count differs from p, the
  /// maps disagree on m, or some map lacks full column rank.
  GMetric(SolverParams params, std::vector<LinearMap> maps);

  const SolverParams& params() const { return params_; }
  const std::vector<LinearMap>& maps() const { return maps_; }

  Eigen::Index constraint_dim() const { return m_; }
  Eigen::Index order() const { return order_; }
  Eigen::Index block_offset(std::size_t block) const { return offsets_.at(block); }
  Eigen::Index multiplier_offset() const { return offsets_.back(); }

  Eigen::MatrixXd assemble() const;

  /// ⟨w1, G·w2⟩, evaluated blockwise.
  double inner(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2) const;
  double squared_norm(const Eigen::VectorXd& w) const { return inner(w, w); }
  double norm(const Eigen::VectorXd& w) const;

  /// Smallest eigenvalue of (G + Gᵀ)/2 from a dense eigensolve.
  PdReport verify_pd() const;

 private:
  double diagonal_weight(std::size_t block) const;
  double coupling(std::size_t block) const;

  SolverParams params_;
  std::vector<LinearMap> maps_;
  std::vector<Eigen::Index> offsets_;  // p block offsets followed by the multiplier offset
  Eigen::Index m_ = 0;
  Eigen::Index order_ = 0;
};

// The congruence chain behind positive definiteness, with every Aᵢ replaced
// by the m×m identity. All three are square of order (p+1)·m.

/// G₀: G with Aᵢ = I.
Eigen::MatrixXd core_matrix(const SolverParams& params, Eigen::Index m);

/// Unit upper-triangular T with ε/s·I (first row) and τ/s·I (other rows) in the last block column.
Eigen::MatrixXd congruence_transform(const SolverParams& params, Eigen::Index m);

/// G̃₀ = T·G₀·Tᵀ written out in closed form: σᵢ − 1/s on the diagonal,
/// −ετ/s coupling with block 1, −τ²/s among blocks 2..p, and s·I last.
Eigen::MatrixXd reduced_core_matrix(const SolverParams& params, Eigen::Index m);

}  // namespace grppa
