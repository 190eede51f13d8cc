#pragma once

#include <Eigen/Core>

#include <optional>

namespace grppa {

/**
 * Block coefficient map Aᵢ : ℝⁿⁱ → ℝᵐ.
 *
 * Either a dense matrix or a scaled identity c·I of a given order. The scaled
 * form keeps matrix-valued blocks (vectorized n×n variables) from ever
 * materializing an n²×n² matrix.
 */
class LinearMap {
 public:
  static LinearMap dense(Eigen::MatrixXd matrix);
  static LinearMap scaled_identity(Eigen::Index order, double scale);

  Eigen::Index rows() const;
  Eigen::Index cols() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_adjoint(const Eigen::VectorXd& y) const;

  /// Aᵀ·A·x
  Eigen::VectorXd apply_gram(const Eigen::VectorXd& x) const;

  Eigen::MatrixXd to_dense() const;

  bool is_scaled_identity() const { return !dense_.has_value(); }
  double scale() const { return scale_; }

  /// Numerical full-column-rank check (column-pivoted QR with default threshold).
  bool has_full_column_rank() const;

 private:
  LinearMap() = default;

  std::optional<Eigen::MatrixXd> dense_;
  Eigen::Index order_ = 0;
  double scale_ = 1.0;
};

}  // namespace grppa
