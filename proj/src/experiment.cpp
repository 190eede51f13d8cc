#include "grppa/experiment.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "grppa/instance_io.hpp"

namespace grppa::experiment {
namespace {

using nlohmann::json;

double parse_double(std::string_view text, std::string_view what) {
  std::string s(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + s + "' for " + std::string(what));
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config: bad value for '") + key + "'");
  }
}

std::string sci(double v, int digits = 2) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");

  ExperimentConfig c;
  if (j.contains("instance")) {
    const json& inst = j.at("instance");
    if (inst.contains("path")) c.instance.path = get_or<std::string>(inst, "path", "");
    c.instance.n = get_or<long>(inst, "n", c.instance.n);
    c.instance.density = get_or<double>(inst, "density", c.instance.density);
    c.instance.seed = get_or<std::uint64_t>(inst, "seed", c.instance.seed);
  }
  if (j.contains("params")) {
    const json& p = j.at("params");
    c.params.sigma = get_or<std::vector<double>>(p, "sigma", c.params.sigma);
    c.params.s = get_or<double>(p, "s", c.params.s);
    c.params.tau = get_or<double>(p, "tau", c.params.tau);
    c.params.epsilon = get_or<double>(p, "epsilon", c.params.epsilon);
    c.params.gamma = get_or<double>(p, "gamma", c.params.gamma);
    if (p.contains("beta")) c.beta = get_or<double>(p, "beta", 0.0);
  }
  if (j.contains("stopping")) {
    const json& st = j.at("stopping");
    c.stopping.eps1 = get_or<double>(st, "tol1", c.stopping.eps1);
    c.stopping.eps2 = get_or<double>(st, "tol2", c.stopping.eps2);
    c.stopping.eps3 = get_or<double>(st, "tol3", c.stopping.eps3);
    c.stopping.max_iters = get_or<long>(st, "max_iters", c.stopping.max_iters);
  }
  if (j.contains("start")) {
    const json& st = j.at("start");
    c.start.x = get_or<double>(st, "X", c.start.x);
    c.start.s = get_or<double>(st, "S", c.start.s);
    c.start.l = get_or<double>(st, "L", c.start.l);
    c.start.lambda = get_or<double>(st, "lambda", c.start.lambda);
  }
  c.reference_iters = get_or<long>(j, "reference_iters", c.reference_iters);
  if (j.contains("model")) {
    const json& m = j.at("model");
    if (m.contains("nu")) c.nu = get_or<double>(m, "nu", 0.0);
    if (m.contains("mu")) c.mu = get_or<double>(m, "mu", 0.0);
  }
  c.threads = get_or<unsigned>(j, "threads", c.threads);
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("trace")) c.trace_out = get_or<std::string>(o, "trace", "");
    if (o.contains("table")) c.table_out = get_or<std::string>(o, "table", "");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

bool is_sweep_axis(std::string_view axis, std::size_t p) {
  if (axis == "s") return true;
  if (!axis.starts_with("sigma") || axis.size() == 5) return false;
  std::size_t index = 0;
  const auto digits = axis.substr(5);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  return ec == std::errc() && ptr == digits.data() + digits.size() && index >= 1 && index <= p;
}

void set_axis_value(SolverParams& params, std::string_view axis, double value) {
  if (!is_sweep_axis(axis, params.p())) throw UsageError("unknown sweep axis '" + std::string(axis) + "'");
  if (axis == "s") {
    params.s = value;
    return;
  }
  const auto index = static_cast<std::size_t>(std::stoul(std::string(axis.substr(5))));
  params.sigma[index - 1] = value;
}

void apply_param(ExperimentConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw UsageError("--param expects NAME=VALUE, got '" + std::string(assignment) + "'");
  }
  const std::string_view name = assignment.substr(0, eq);
  const double value = parse_double(assignment.substr(eq + 1), name);
  SolverParams& p = config.params;
  if (name == "sigma") {
    std::fill(p.sigma.begin(), p.sigma.end(), value);
  } else if (is_sweep_axis(name, p.p())) {
    set_axis_value(p, name, value);
  } else if (name == "tau") {
    p.tau = value;
  } else if (name == "epsilon") {
    p.epsilon = value;
  } else if (name == "gamma") {
    p.gamma = value;
  } else if (name == "beta") {
    config.beta = value;
  } else if (name == "nu") {
    config.nu = value;
  } else if (name == "mu") {
    config.mu = value;
  } else {
    throw UsageError("unknown parameter '" + std::string(name) + "'");
  }
}

lvggms::Instance resolve_instance(const ExperimentConfig& config) {
  lvggms::Instance inst;
  if (config.instance.path) {
    try {
      inst = lvggms::load_instance(*config.instance.path);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
  } else {
    try {
      inst = lvggms::generate(config.instance.n, config.instance.density, config.instance.seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (config.nu) inst.nu = *config.nu;
  if (config.mu) inst.mu = *config.mu;
  if (!(inst.nu > 0.0) || !(inst.mu > 0.0)) throw UsageError("nu and mu must be positive");
  return inst;
}

namespace {

SolveResult run_with(const SolverParams& params, const ExperimentConfig& config, const lvggms::Instance& instance,
                     const StoppingRule& rule, const TraceCallback& on_iteration, unsigned threads) {
  const auto start =
      lvggms::scaled_identity_start(instance.n(), config.start.x, config.start.s, config.start.l, config.start.lambda);
  const BlockProblem problem = lvggms::make_problem(instance);
  EngineOptions options;
  options.threads = threads;
  return solve(problem, params, lvggms::to_blocks(start), lvggms::to_vector(start.lambda), rule, on_iteration,
               options);
}

}  // namespace

double reference_objective(const ExperimentConfig& config, const lvggms::Instance& instance) {
  if (config.reference_iters <= 0) throw UsageError("reference_iters must be positive");
  const bool cacheable = config.instance.path && !config.nu && !config.mu;
  if (cacheable) {
    if (const auto cached = lvggms::load_reference(*config.instance.path, config.reference_iters)) {
      return cached->objective;
    }
  }
  StoppingRule rule;
  rule.max_iters = config.reference_iters;  // no F* yet, so the run always uses every iteration
  const SolveResult ref = run_with(default_lvggms_params(), config, instance, rule, {}, config.threads);
  const double fstar = ref.trace.records.back().objective;
  if (cacheable) lvggms::save_reference(*config.instance.path, {config.reference_iters, fstar});
  return fstar;
}

SolveResult run_lvggms(const ExperimentConfig& config, const lvggms::Instance& instance,
                       std::optional<double> reference, const TraceCallback& on_iteration) {
  StoppingRule rule = config.stopping;
  rule.reference_objective = reference;
  return run_with(config.params, config, instance, rule, on_iteration, config.threads);
}

std::string summary_header() { return "IT\tCPU\tIER\tOER\tCER"; }

std::string summary_line(const ConvergenceTrace& trace) {
  std::ostringstream os;
  if (trace.records.empty()) return "0\t0.00\t-\t-\t-";
  const IterationRecord& last = trace.records.back();
  char cpu[32];
  std::snprintf(cpu, sizeof cpu, "%.2f", trace.total_seconds());
  os << trace.iterations() << '\t' << cpu << '\t' << sci(last.ier) << '\t' << (last.oer ? sci(*last.oer) : "n/a")
     << '\t' << sci(last.cer);
  return os.str();
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const lvggms::Instance& instance,
                                double reference, std::string_view axis, const std::vector<double>& values) {
  if (values.empty()) throw UsageError("sweep needs at least one value");
  if (!is_sweep_axis(axis, config.params.p())) {
    throw UsageError("unknown sweep axis '" + std::string(axis) + "' (use sigma1..sigma" +
                     std::to_string(config.params.p()) + " or s)");
  }
  std::vector<SweepRow> rows(values.size());
  StoppingRule rule = config.stopping;
  rule.reference_objective = reference;

  auto run_row = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.value = values[i];
    SolverParams params = config.params;
    set_axis_value(params, axis, values[i]);
    if (const auto v = validate(params); !v) {
      row.skipped = true;
      row.reason = v.describe();
      return;
    }
    // Rows already run concurrently; each solve stays serial.
    const SolveResult result = run_with(params, config, instance, rule, {}, 1);
    const IterationRecord& last = result.trace.records.back();
    row.iterations = result.trace.iterations();
    row.seconds = result.trace.total_seconds();
    row.ier = last.ier;
    row.oer = last.oer;
    row.cer = last.cer;
    row.converged = result.converged();
  };

  const std::size_t workers = std::min<std::size_t>(std::max(1u, config.threads), values.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < values.size(); ++i) run_row(i);
  } else {
    std::vector<std::exception_ptr> errors(values.size());
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < values.size(); i += workers) {
            try {
              run_row(i);
            } catch (...) {
              errors[i] = std::current_exception();
            }
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool include_timing) {
  os << "value,IT,CPU,IER,OER,CER\n";
  for (const SweepRow& r : rows) {
    os << sci(r.value, 9) << ',';
    if (r.skipped) {
      os << "skipped,,,,\n";
      continue;
    }
    os << r.iterations << ',' << sci(include_timing ? r.seconds : 0.0, 9) << ',' << sci(r.ier, 9) << ','
       << (r.oer ? sci(*r.oer, 9) : std::string("nan")) << ',' << sci(r.cer, 9) << '\n';
  }
}

std::vector<double> parse_values(std::string_view list) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto token = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (token.empty()) throw UsageError("empty entry in --values list");
    values.push_back(parse_double(token, "--values"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.empty()) throw UsageError("--values list is empty");
  return values;
}

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  lvggms::Instance inst;
  try {
    inst = lvggms::generate(args.n, args.density, args.seed);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    lvggms::save_instance(args.out, inst);
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inst.C, Eigen::EigenvaluesOnly);
  out << "wrote " << args.out.string() << ": n=" << inst.n() << " nu=" << inst.nu << " mu=" << inst.mu
      << " seed=" << args.seed << " min_eig(C)=" << sci(eig.eigenvalues().minCoeff(), 6) << '\n';
  return kExitConverged;
}

namespace {

void warn_beta(const ExperimentConfig& config, std::ostream& err) {
  if (config.beta) err << "warning: beta=" << *config.beta << " has no role in this solver; ignored\n";
}

bool check_params(const SolverParams& params, std::ostream& err) {
  const ValidationResult v = validate(params);
  if (v) return true;
  err << "error: parameters outside the admissible region:\n";
  for (const auto& violation : v.violations) err << "  " << violation.message << '\n';
  return false;
}

}  // namespace

int cmd_solve(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  warn_beta(config, err);
  if (!check_params(config.params, err)) return kExitUsage;
  try {
    check_rule(config.stopping);
    const lvggms::Instance inst = resolve_instance(config);
    if (static_cast<std::size_t>(3) != config.params.p()) throw UsageError("the LVGGMS problem has 3 blocks");
    const double fstar = reference_objective(config, inst);
    const SolveResult result = run_lvggms(config, inst, fstar);
    if (config.trace_out) {
      std::ofstream os(*config.trace_out);
      if (!os) throw UsageError("cannot write " + config.trace_out->string());
      write_trace_csv(os, result.trace);
    }
    out << summary_header() << '\n' << summary_line(result.trace) << '\n';
    out << (result.converged() ? "status: converged" : "status: max iterations reached") << " (F*="
        << sci(fstar, 12) << ")\n";
    return result.converged() ? kExitConverged : kExitNotConverged;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_sweep(const ExperimentConfig& config, std::string_view axis, const std::vector<double>& values,
              std::ostream& out, std::ostream& err) {
  warn_beta(config, err);
  try {
    check_rule(config.stopping);
    if (static_cast<std::size_t>(3) != config.params.p()) throw UsageError("the LVGGMS problem has 3 blocks");
    if (values.empty()) throw UsageError("sweep needs at least one value");
    const lvggms::Instance inst = resolve_instance(config);
    const double fstar = reference_objective(config, inst);
    const std::vector<SweepRow> rows = run_sweep(config, inst, fstar, axis, values);
    if (config.table_out) {
      std::ofstream os(*config.table_out);
      if (!os) throw UsageError("cannot write " + config.table_out->string());
      write_sweep_csv(os, rows);
    }
    out << axis << '\t' << summary_header() << '\n';
    bool all_converged = true;
    for (const SweepRow& r : rows) {
      if (r.skipped) {
        out << r.value << "\tskipped: " << r.reason << '\n';
        continue;
      }
      char cpu[32];
      std::snprintf(cpu, sizeof cpu, "%.2f", r.seconds);
      out << r.value << '\t' << r.iterations << '\t' << cpu << '\t' << sci(r.ier) << '\t'
          << (r.oer ? sci(*r.oer) : "n/a") << '\t' << sci(r.cer) << (r.converged ? "" : "\t(not converged)")
          << '\n';
      all_converged = all_converged && r.converged;
    }
    return all_converged ? kExitConverged : kExitNotConverged;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace grppa::experiment
