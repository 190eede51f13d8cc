#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grppa/engine.hpp"
#include "grppa/lvggms.hpp"
#include "grppa/params.hpp"

namespace grppa::experiment {

/// Exit codes shared by every subcommand.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNotConverged = 2;

/// Bad arguments or config; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceSource {
  std::optional<std::filesystem::path> path;  // takes precedence over the generator
  Eigen::Index n = 100;
  double density = 0.01;
  std::uint64_t seed = 7;
};

struct ExperimentConfig {
  InstanceSource instance;
  SolverParams params = default_lvggms_params();
  StoppingRule stopping;
  /// Initial iterate (a·I, b·I, c·I, d·I).
  struct Start {
    double x = 1.0, s = 4.0, l = 3.0, lambda = 0.0;
  } start;
  /// F* comes from this many iterations of the tuned default parameters.
  long reference_iters = 1000;
  std::optional<double> nu;
  std::optional<double> mu;
  std::optional<double> beta;  // accepted for compatibility, never used
  unsigned threads = 1;
  std::optional<std::filesystem::path> trace_out;
  std::optional<std::filesystem::path> table_out;
};

/**
 * JSON config, every key optional:
 *
 *   {
 *     "instance": {"path": "inst.txt"} | {"n": 100, "density": 0.01, "seed": 7},
 *     "params": {"sigma": [..], "s": 10, "tau": .., "epsilon": .., "gamma": 1.8, "beta": 0.05},
 *     "stopping": {"tol1": 1e-8, "tol2": 1e-8, "tol3": 1e-8, "max_iters": 1000},
 *     "start": {"X": 1, "S": 4, "L": 3, "lambda": 0},
 *     "reference_iters": 1000,
 *     "model": {"nu": 0.005, "mu": 0.05},
 *     "threads": 1,
 *     "output": {"trace": "trace.csv", "table": "sweep.csv"}
 *   }
 */
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// NAME=VALUE with NAME one of sigma1..sigmaP, sigma (all blocks), s, tau,
/// epsilon, gamma, beta, nu, mu.
void apply_param(ExperimentConfig& config, std::string_view assignment);

/// "sigma<i>" or "s".
void set_axis_value(SolverParams& params, std::string_view axis, double value);
bool is_sweep_axis(std::string_view axis, std::size_t p);

lvggms::Instance resolve_instance(const ExperimentConfig& config);

/// Runs the reference solve (tuned defaults, fixed iteration count) and
/// returns F*. Reuses and refreshes the cache beside the instance file when
/// the config names one.
double reference_objective(const ExperimentConfig& config, const lvggms::Instance& instance);

SolveResult run_lvggms(const ExperimentConfig& config, const lvggms::Instance& instance,
                       std::optional<double> reference, const TraceCallback& on_iteration = {});

/// One-line summary: IT, CPU, IER, OER, CER.
std::string summary_header();
std::string summary_line(const ConvergenceTrace& trace);

struct SweepRow {
  double value = 0.0;
  bool skipped = false;
  std::string reason;
  long iterations = 0;
  double seconds = 0.0;
  double ier = 0.0;
  std::optional<double> oer;
  double cer = 0.0;
  bool converged = false;
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const lvggms::Instance& instance,
                                double reference, std::string_view axis, const std::vector<double>& values);

/// value,IT,CPU,IER,OER,CER; skipped values carry "skipped" in the IT column.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool include_timing = true);

std::vector<double> parse_values(std::string_view list);

struct GenerateArgs {
  Eigen::Index n = 100;
  double density = 0.01;
  std::uint64_t seed = 7;
  std::filesystem::path out;
};

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);
int cmd_solve(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& config, std::string_view axis, const std::vector<double>& values,
              std::ostream& out, std::ostream& err);

}  // namespace grppa::experiment
