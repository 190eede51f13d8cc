#include "grppa/gmetric.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace grppa {

Eigen::VectorXd stack(const std::vector<Eigen::VectorXd>& blocks, const Eigen::VectorXd& multiplier) {
  Eigen::Index total = multiplier.size();
  for (const auto& b : blocks) total += b.size();
  Eigen::VectorXd out(total);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.segment(at, b.size()) = b;
    at += b.size();
  }
  out.tail(multiplier.size()) = multiplier;
  return out;
}

GMetric::GMetric(SolverParams params, std::vector<LinearMap> maps)
    : params_(std::move(params)), maps_(std::move(maps)) {
  if (maps_.size() != params_.p() || maps_.size() < 2) {
    throw std::invalid_argument("GMetric: expected " + std::to_string(params_.p()) +
                                " block maps, got " + std::to_string(maps_.size()));
  }
  m_ = maps_.front().rows();
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    if (maps_[i].rows() != m_) {
      throw std::invalid_argument("GMetric: block " + std::to_string(i + 1) +
                                  " maps into a space of different dimension");
    }
    if (!maps_[i].has_full_column_rank()) {
      throw std::invalid_argument("GMetric: block " + std::to_string(i + 1) +
                                  " map does not have full column rank");
    }
    offsets_.push_back(at);
    at += maps_[i].cols();
  }
  offsets_.push_back(at);
  order_ = at + m_;
}

double GMetric::diagonal_weight(std::size_t block) const {
  return block == 0 ? params_.first_block_weight() : params_.sigma_bar(block);
}

double GMetric::coupling(std::size_t block) const {
  return block == 0 ? params_.epsilon : params_.tau;
}

Eigen::MatrixXd GMetric::assemble() const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(order_, order_);
  const Eigen::Index lam = multiplier_offset();
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const Eigen::MatrixXd a = maps_[i].to_dense();
    const Eigen::Index off = offsets_[i];
    const Eigen::Index ni = a.cols();
    g.block(off, off, ni, ni) = diagonal_weight(i) * (a.transpose() * a);
    g.block(off, lam, ni, m_) = -coupling(i) * a.transpose();
    g.block(lam, off, m_, ni) = -coupling(i) * a;
  }
  g.block(lam, lam, m_, m_) = params_.s * Eigen::MatrixXd::Identity(m_, m_);
  return g;
}

double GMetric::inner(const Eigen::VectorXd& w1, const Eigen::VectorXd& w2) const {
  if (w1.size() != order_ || w2.size() != order_) {
    throw std::invalid_argument("GMetric::inner: expected vectors of order " + std::to_string(order_));
  }
  const Eigen::Index lam = multiplier_offset();
  const auto l1 = w1.segment(lam, m_);
  const auto l2 = w2.segment(lam, m_);
  double acc = params_.s * l1.dot(l2);
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const Eigen::Index off = offsets_[i];
    const Eigen::Index ni = maps_[i].cols();
    const Eigen::VectorXd a1 = maps_[i].apply(w1.segment(off, ni));
    const Eigen::VectorXd a2 = maps_[i].apply(w2.segment(off, ni));
    acc += diagonal_weight(i) * a1.dot(a2) - coupling(i) * (a1.dot(l2) + l1.dot(a2));
  }
  return acc;
}

double GMetric::norm(const Eigen::VectorXd& w) const {
  return std::sqrt(std::max(0.0, squared_norm(w)));
}

PdReport GMetric::verify_pd() const {
  const Eigen::MatrixXd g = assemble();
  const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  PdReport report;
  if (eig.info() != Eigen::Success) return report;
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.status = report.min_eigenvalue > 0.0 ? PdReport::Status::PositiveDefinite
                                               : PdReport::Status::NotPositiveDefinite;
  return report;
}

Eigen::MatrixXd core_matrix(const SolverParams& params, Eigen::Index m) {
  std::vector<LinearMap> identities;
  for (std::size_t i = 0; i < params.p(); ++i) identities.push_back(LinearMap::scaled_identity(m, 1.0));
  return GMetric(params, std::move(identities)).assemble();
}

Eigen::MatrixXd congruence_transform(const SolverParams& params, Eigen::Index m) {
  const Eigen::Index p = static_cast<Eigen::Index>(params.p());
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity((p + 1) * m, (p + 1) * m);
  const auto eye = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double c = (i == 0 ? params.epsilon : params.tau) / params.s;
    t.block(i * m, p * m, m, m) = c * eye;
  }
  return t;
}

Eigen::MatrixXd reduced_core_matrix(const SolverParams& params, Eigen::Index m) {
  const Eigen::Index p = static_cast<Eigen::Index>(params.p());
  const double s = params.s;
  const double tau = params.tau;
  const double eps = params.epsilon;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero((p + 1) * m, (p + 1) * m);
  const auto eye = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double c;
      if (i == j) {
        c = params.sigma[static_cast<std::size_t>(i)] - 1.0 / s;
      } else if (i == 0 || j == 0) {
        c = -eps * tau / s;
      } else {
        c = -tau * tau / s;
      }
      r.block(i * m, j * m, m, m) = c * eye;
    }
  }
  r.block(p * m, p * m, m, m) = s * eye;
  return r;
}

}  // namespace grppa
