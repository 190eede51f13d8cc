#include "grppa/linear_map.hpp"

#include <Eigen/QR>

#include <stdexcept>

namespace grppa {

LinearMap LinearMap::dense(Eigen::MatrixXd matrix) {
  LinearMap map;
  map.dense_ = std::move(matrix);
  return map;
}

LinearMap LinearMap::scaled_identity(Eigen::Index order, double scale) {
  if (order < 0) throw std::invalid_argument("LinearMap: negative order");
  LinearMap map;
  map.order_ = order;
  map.scale_ = scale;
  return map;
}

Eigen::Index LinearMap::rows() const { return dense_ ? dense_->rows() : order_; }

Eigen::Index LinearMap::cols() const { return dense_ ? dense_->cols() : order_; }

Eigen::VectorXd LinearMap::apply(const Eigen::VectorXd& x) const {
  if (x.size() != cols()) throw std::invalid_argument("LinearMap::apply: dimension mismatch");
  if (dense_) return *dense_ * x;
  return scale_ * x;
}

Eigen::VectorXd LinearMap::apply_adjoint(const Eigen::VectorXd& y) const {
  if (y.size() != rows()) throw std::invalid_argument("LinearMap::apply_adjoint: dimension mismatch");
  if (dense_) return dense_->transpose() * y;
  return scale_ * y;
}

Eigen::VectorXd LinearMap::apply_gram(const Eigen::VectorXd& x) const {
  if (dense_) return dense_->transpose() * (*dense_ * x);
  return (scale_ * scale_) * x;
}

Eigen::MatrixXd LinearMap::to_dense() const {
  if (dense_) return *dense_;
  return scale_ * Eigen::MatrixXd::Identity(order_, order_);
}

bool LinearMap::has_full_column_rank() const {
  if (cols() == 0) return false;
  if (!dense_) return scale_ != 0.0;
  if (dense_->cols() > dense_->rows()) return false;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(*dense_);
  return qr.rank() == dense_->cols();
}

}  // namespace grppa
