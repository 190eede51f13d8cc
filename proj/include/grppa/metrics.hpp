#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <vector>

#include "grppa/params.hpp"

namespace grppa {

class GMetric;

/// Smallest denominator used by the relative iterate change.
inline constexpr double kNormFloor = 1e-300;

/// Tolerances (ε₁, ε₂, ε₃) on IER, OER and CER; stop when all three hold at once.
struct StoppingRule {
  double eps1 = 1e-8;
  double eps2 = 1e-8;
  double eps3 = 1e-8;
  long max_iters = 1000;
  std::optional<double> reference_objective;  // F*
};

/// Throws std::invalid_argument unless all tolerances and max_iters are positive.
void check_rule(const StoppingRule& rule);

/**
 * Relative iterate change: max over blocks of ‖xᵢᵏ − xᵢᵏ⁻¹‖ / max(‖xᵢᵏ‖, floor).
 *
 * Norms are Euclidean on the (vectorized) blocks, i.e. Frobenius for matrices.
 */
double ier(const std::vector<Eigen::VectorXd>& previous, const std::vector<Eigen::VectorXd>& current);

/// |F − F*| / |F*|; falls back to the absolute gap |F − F*| when F* = 0.
double oer(double objective, double reference);
inline bool oer_is_absolute(double reference) { return reference == 0.0; }

/// ‖X − S + L‖_F / max{1, ‖X‖_F, ‖S‖_F, ‖L‖_F}.
double cer(const Eigen::MatrixXd& x, const Eigen::MatrixXd& s, const Eigen::MatrixXd& l);

/// Generic form: ‖Σ Aᵢxᵢ − b‖ / max{1, ‖x₁‖, …, ‖x_p‖} given the residual Σ Aᵢxᵢ − b.
double cer(const Eigen::VectorXd& residual, const std::vector<Eigen::VectorXd>& blocks);

struct IterationRecord {
  long k = 0;  // 1-based count of completed steps
  double ier = 0.0;
  std::optional<double> oer;  // empty until a reference objective exists
  double cer = 0.0;
  double objective = 0.0;  // NaN if the objective is undefined at this iterate
  double elapsed_s = 0.0;  // wall time of this step alone
};

struct StopDecision {
  bool stop = false;
  bool converged = false;
};

/// Fires when IER ≤ ε₁, OER ≤ ε₂ and CER ≤ ε₃ hold together (converged), or
/// when k ≥ max_iters (not converged). A missing OER never satisfies ε₂.
StopDecision should_stop(const IterationRecord& record, const StoppingRule& rule);

struct ConvergenceTrace {
  enum class Status { Converged, MaxIterations };

  std::vector<IterationRecord> records;
  Status status = Status::MaxIterations;
  SolverParams params;

  bool converged() const { return status == Status::Converged; }
  long iterations() const { return static_cast<long>(records.size()); }
  double total_seconds() const;
};

/// CSV with header k,ier,oer,cer,objective,elapsed_s. Numbers use 10
/// significant digits in scientific form; a missing OER is written as "nan".
/// With include_timing=false the elapsed_s column is written as 0 so that
/// reruns diff cleanly.
void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace, bool include_timing = true);

/// Running arithmetic mean of the tilde iterates.
class ErgodicAverager {
 public:
  void push(const std::vector<Eigen::VectorXd>& blocks);
  std::size_t count() const { return count_; }
  /// Throws std::logic_error when nothing has been pushed.
  std::vector<Eigen::VectorXd> value() const;

 private:
  std::vector<Eigen::VectorXd> sums_;
  std::size_t count_ = 0;
};

/// Both sides of ‖wᵏ⁺¹ − w*‖²_G ≤ ‖wᵏ − w*‖²_G − ((2−γ)/γ)‖wᵏ − wᵏ⁺¹‖²_G.
struct ContractionCheck {
  double next_distance = 0.0;  // ‖wᵏ⁺¹ − w*‖²_G
  double distance = 0.0;       // ‖wᵏ − w*‖²_G
  double bound = 0.0;          // right-hand side

  /// lhs − rhs; non-positive when the inequality holds.
  double excess() const { return next_distance - bound; }
};

ContractionCheck check_contraction(const GMetric& metric, const Eigen::VectorXd& current,
                                   const Eigen::VectorXd& next, const Eigen::VectorXd& solution,
                                   double gamma);

}  // namespace grppa
