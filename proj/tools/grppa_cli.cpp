// grppa: generate LVGGMS instances, run single solves and parameter sweeps.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "grppa/experiment.hpp"

namespace ex = grppa::experiment;

namespace {

struct CommonFlags {
  std::optional<std::string> config;
  std::optional<std::string> instance;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<long> n;
  std::optional<double> density;
  std::optional<double> tol1, tol2, tol3;
  std::optional<long> max_iters;
  std::optional<long> reference_iters;
  std::optional<unsigned> threads;
  std::vector<std::string> params;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config");
  cmd->add_option("--instance", f.instance, "Instance file (overrides the generator)");
  cmd->add_option("--out", f.out, "Output CSV path");
  cmd->add_option("--seed", f.seed, "Generator seed");
  cmd->add_option("--n", f.n, "Generator dimension");
  cmd->add_option("--density", f.density, "Generator off-diagonal density");
  cmd->add_option("--tol1", f.tol1, "IER tolerance");
  cmd->add_option("--tol2", f.tol2, "OER tolerance");
  cmd->add_option("--tol3", f.tol3, "CER tolerance");
  cmd->add_option("--max-iters", f.max_iters, "Iteration cap");
  cmd->add_option("--reference-iters", f.reference_iters, "Iterations of the F* reference run");
  cmd->add_option("--threads", f.threads, "Worker threads");
  cmd->add_option("--param", f.params, "NAME=VALUE override (repeatable)");
}

ex::ExperimentConfig build_config(const CommonFlags& f, bool sweep) {
  ex::ExperimentConfig c = f.config ? ex::load_config(*f.config) : ex::ExperimentConfig{};
  if (f.instance) c.instance.path = *f.instance;
  if (f.seed) c.instance.seed = *f.seed;
  if (f.n) c.instance.n = *f.n;
  if (f.density) c.instance.density = *f.density;
  if (f.tol1) c.stopping.eps1 = *f.tol1;
  if (f.tol2) c.stopping.eps2 = *f.tol2;
  if (f.tol3) c.stopping.eps3 = *f.tol3;
  if (f.max_iters) c.stopping.max_iters = *f.max_iters;
  if (f.reference_iters) c.reference_iters = *f.reference_iters;
  if (f.threads) c.threads = *f.threads;
  for (const auto& p : f.params) ex::apply_param(c, p);
  if (f.out) {
    if (sweep) {
      c.table_out = *f.out;
    } else {
      c.trace_out = *f.out;
    }
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxed parameterized proximal point solver for LVGGMS"};
  app.require_subcommand(1);

  ex::GenerateArgs gen;
  long gen_n = 100;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic instance file");
  generate->add_option("--n", gen_n, "Dimension (>= 2)")->capture_default_str();
  generate->add_option("--density", gen.density, "Off-diagonal density of the precision matrix")
      ->capture_default_str();
  generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate->add_option("--out", gen_out, "Instance file")->required();

  CommonFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "Run one solve and write its trace");
  add_common(solve, solve_flags);

  CommonFlags sweep_flags;
  std::string axis;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Solve once per parameter value");
  add_common(sweep, sweep_flags);
  sweep->add_option("--axis", axis, "sigma1..sigma3 or s")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ex::kExitUsage;
  }

  try {
    if (generate->parsed()) {
      gen.n = gen_n;
      gen.out = gen_out;
      return ex::cmd_generate(gen, std::cout, std::cerr);
    }
    if (solve->parsed()) return ex::cmd_solve(build_config(solve_flags, false), std::cout, std::cerr);
    return ex::cmd_sweep(build_config(sweep_flags, true), axis, ex::parse_values(values), std::cout, std::cerr);
  } catch (const ex::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ex::kExitUsage;
  }
}
