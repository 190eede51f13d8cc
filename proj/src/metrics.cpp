#include "grppa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "grppa/gmetric.hpp"

namespace grppa {

void check_rule(const StoppingRule& rule) {
  if (!(rule.eps1 > 0.0) || !(rule.eps2 > 0.0) || !(rule.eps3 > 0.0)) {
    throw std::invalid_argument("StoppingRule: tolerances must be positive");
  }
  if (rule.max_iters <= 0) throw std::invalid_argument("StoppingRule: max_iters must be positive");
}

double ier(const std::vector<Eigen::VectorXd>& previous, const std::vector<Eigen::VectorXd>& current) {
  if (previous.size() != current.size()) throw std::invalid_argument("ier: block count mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (previous[i].size() != current[i].size()) throw std::invalid_argument("ier: block shape mismatch");
    const double change = (current[i] - previous[i]).norm();
    worst = std::max(worst, change / std::max(current[i].norm(), kNormFloor));
  }
  return worst;
}

double oer(double objective, double reference) {
  const double gap = std::abs(objective - reference);
  return oer_is_absolute(reference) ? gap : gap / std::abs(reference);
}

double cer(const Eigen::MatrixXd& x, const Eigen::MatrixXd& s, const Eigen::MatrixXd& l) {
  const double denom = std::max({1.0, x.norm(), s.norm(), l.norm()});
  return (x - s + l).norm() / denom;
}

double cer(const Eigen::VectorXd& residual, const std::vector<Eigen::VectorXd>& blocks) {
  double denom = 1.0;
  for (const auto& b : blocks) denom = std::max(denom, b.norm());
  return residual.norm() / denom;
}

StopDecision should_stop(const IterationRecord& record, const StoppingRule& rule) {
  const bool oer_met = record.oer.has_value() && *record.oer <= rule.eps2;
  if (record.ier <= rule.eps1 && oer_met && record.cer <= rule.eps3) return {true, true};
  if (record.k >= rule.max_iters) return {true, false};
  return {};
}

double ConvergenceTrace::total_seconds() const {
  double total = 0.0;
  for (const auto& r : records) total += r.elapsed_s;
  return total;
}

namespace {

void put_number(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  os << buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace, bool include_timing) {
  os << "k,ier,oer,cer,objective,elapsed_s\n";
  for (const auto& r : trace.records) {
    os << r.k << ',';
    put_number(os, r.ier);
    os << ',';
    if (r.oer) {
      put_number(os, *r.oer);
    } else {
      os << "nan";
    }
    os << ',';
    put_number(os, r.cer);
    os << ',';
    put_number(os, r.objective);
    os << ',';
    put_number(os, include_timing ? r.elapsed_s : 0.0);
    os << '\n';
  }
}

void ErgodicAverager::push(const std::vector<Eigen::VectorXd>& blocks) {
  if (count_ == 0) {
    sums_ = blocks;
  } else {
    if (blocks.size() != sums_.size()) throw std::invalid_argument("ErgodicAverager: block count mismatch");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i].size() != sums_[i].size()) {
        throw std::invalid_argument("ErgodicAverager: block shape mismatch");
      }
      sums_[i] += blocks[i];
    }
  }
  ++count_;
}

std::vector<Eigen::VectorXd> ErgodicAverager::value() const {
  if (count_ == 0) throw std::logic_error("ErgodicAverager: no iterates pushed");
  std::vector<Eigen::VectorXd> mean = sums_;
  for (auto& m : mean) m /= static_cast<double>(count_);
  return mean;
}

ContractionCheck check_contraction(const GMetric& metric, const Eigen::VectorXd& current,
                                   const Eigen::VectorXd& next, const Eigen::VectorXd& solution,
                                   double gamma) {
  ContractionCheck c;
  c.next_distance = metric.squared_norm(next - solution);
  c.distance = metric.squared_norm(current - solution);
  c.bound = c.distance - (2.0 - gamma) / gamma * metric.squared_norm(current - next);
  return c;
}

}  // namespace grppa
