#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace grppa {

/// (√5 − 1)/2, the default for both τ and ε.
inline constexpr double kGoldenRatio = 0.6180339887498949;

/**
 * Parameters of the relaxed parameterized proximal point iteration.
 *
 * The admissible region requires s > 0, τ > 0, 0 < γ < 2 and
 *
 *   σ₁ > (1 + (p−1)·τ·|ε|) / s
 *   σᵢ > (1 + (p−2)·τ² + τ·|ε|) / s,   i = 2..p
 *
 * Block indices are zero-based: sigma[0] is the first block.
 */
struct SolverParams {
  std::vector<double> sigma;
  double s = 10.0;
  double tau = kGoldenRatio;
  double epsilon = kGoldenRatio;
  double gamma = 1.8;

  std::size_t p() const { return sigma.size(); }

  /// Lower bound on σ₁ (strict).
  double first_sigma_bound() const;
  /// Lower bound on σᵢ for i ≥ 2 (strict).
  double other_sigma_bound() const;

  /// σ̄ᵢ = σᵢ + (τ² − 1)/s. Throws std::out_of_range for a bad index.
  double sigma_bar(std::size_t block) const;

  /// Weight of the first diagonal block of G: σ₁ + (ε² − 1)/s.
  double first_block_weight() const;
};

struct Violation {
  std::string constraint;  // e.g. "sigma1 > bound"
  double bound = 0.0;
  double value = 0.0;
  std::string message;  // human readable, e.g. "σ₁ ≤ 0.17639320225"
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
  std::string describe() const;
};

/// Checks every inequality of the admissible region plus γ ∈ (0, 2).
/// Values exactly on a bound are rejected.
ValidationResult validate(const SolverParams& params);

/// Tuned three-block setting: σ = (0.178, 0.178, 0.178), s = 10, τ = ε = golden ratio, γ = 1.8.
SolverParams default_lvggms_params();

}  // namespace grppa
