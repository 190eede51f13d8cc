#include "grppa/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace grppa {
namespace {

std::string format_bound(const char* symbol, const char* relation, double bound) {
  std::ostringstream os;
  os.precision(12);
  os << symbol << ' ' << relation << ' ' << bound;
  return os.str();
}

}  // namespace

double SolverParams::first_sigma_bound() const {
  const double pm1 = static_cast<double>(p()) - 1.0;
  return (1.0 + pm1 * tau * std::abs(epsilon)) / s;
}

double SolverParams::other_sigma_bound() const {
  const double pm2 = static_cast<double>(p()) - 2.0;
  return (1.0 + pm2 * tau * tau + tau * std::abs(epsilon)) / s;
}

double SolverParams::sigma_bar(std::size_t block) const {
  if (block >= p()) {
    throw std::out_of_range("sigma_bar: block index " + std::to_string(block) +
                            " out of range for p = " + std::to_string(p()));
  }
  return sigma[block] + (tau * tau - 1.0) / s;
}

double SolverParams::first_block_weight() const {
  return sigma.at(0) + (epsilon * epsilon - 1.0) / s;
}

std::string ValidationResult::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].message;
  }
  return os.str();
}

ValidationResult validate(const SolverParams& params) {
  ValidationResult result;
  auto fail = [&](std::string constraint, double bound, double value, std::string message) {
    result.violations.push_back({std::move(constraint), bound, value, std::move(message)});
  };

  if (params.p() < 2) {
    fail("p >= 2", 2.0, static_cast<double>(params.p()), "p < 2 (need at least two blocks)");
    return result;
  }
  // NaN fails every comparison below, so the checks are written as !(x > bound).
  if (!(params.s > 0.0)) fail("s > 0", 0.0, params.s, "s > 0 violated (s ≤ 0)");
  if (!(params.tau > 0.0)) fail("tau > 0", 0.0, params.tau, "τ > 0 violated (τ ≤ 0)");
  if (!std::isfinite(params.epsilon)) fail("epsilon finite", 0.0, params.epsilon, "ε is not finite");
  if (!(params.gamma > 0.0)) fail("gamma > 0", 0.0, params.gamma, "γ ≤ 0");
  if (!(params.gamma < 2.0)) fail("gamma < 2", 2.0, params.gamma, "γ ≥ 2");

  // The σ bounds are meaningless without s > 0.
  if (!(params.s > 0.0)) return result;

  const double first = params.first_sigma_bound();
  if (!(params.sigma[0] > first)) {
    fail("sigma1 > bound", first, params.sigma[0], format_bound("σ₁", "≤", first));
  }
  const double other = params.other_sigma_bound();
  for (std::size_t i = 1; i < params.p(); ++i) {
    if (!(params.sigma[i] > other)) {
      const std::string name = "σ" + std::to_string(i + 1);
      fail("sigma" + std::to_string(i + 1) + " > bound", other, params.sigma[i],
           format_bound(name.c_str(), "≤", other));
    }
  }
  if (result.ok()) {
    for (std::size_t i = 0; i < params.p(); ++i) {
      const double sb = params.sigma_bar(i);
      if (!(sb > 0.0)) {
        fail("sigma_bar" + std::to_string(i + 1) + " > 0", 0.0, sb,
             "σ̄" + std::to_string(i + 1) + " ≤ 0");
      }
    }
  }
  return result;
}

SolverParams default_lvggms_params() {
  SolverParams params;
  params.sigma = {0.178, 0.178, 0.178};
  params.s = 10.0;
  params.tau = kGoldenRatio;
  params.epsilon = kGoldenRatio;
  params.gamma = 1.8;
  return params;
}

}  // namespace grppa
