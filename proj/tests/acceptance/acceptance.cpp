// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grppa/engine.hpp"
#include "grppa/experiment.hpp"
#include "grppa/gmetric.hpp"
#include "grppa/lvggms.hpp"
#include "support/toy_problems.hpp"

using namespace grppa;
using namespace grppa::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<LinearMap> random_full_rank_maps(std::mt19937_64& rng, std::size_t p, Eigen::Index m) {
  std::uniform_int_distribution<Eigen::Index> dim(1, m);
  std::vector<LinearMap> maps;
  for (std::size_t i = 0; i < p; ++i) {
    LinearMap a = LinearMap::dense(random_matrix(rng, m, dim(rng)));
    while (!a.has_full_column_rank()) a = LinearMap::dense(random_matrix(rng, m, dim(rng)));
    maps.push_back(std::move(a));
  }
  return maps;
}

Outcome pd_random() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<Eigen::Index> mdim(1, 12);
  const std::size_t ps[] = {2, 3, 5};
  const auto t0 = Clock::now();
  int failures = 0;
  double worst = INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = ps[trial % 3];
    const GMetric g(random_params(rng, p), random_full_rank_maps(rng, p, mdim(rng)));
    const PdReport rep = g.verify_pd();
    if (!rep.positive_definite()) ++failures;
    worst = std::min(worst, rep.min_eigenvalue);
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 10.0,
          std::to_string(failures) + "/100 not PD, min eig " + fmt("%.3e", worst) + ", " + fmt("%.2fs", secs)};
}

Outcome congruence() {
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SolverParams params = random_params(rng, 2 + static_cast<std::size_t>(trial % 4));
    const Eigen::Index m = 1 + trial % 4;
    const Eigen::MatrixXd t = congruence_transform(params, m);
    const Eigen::MatrixXd diff = t * core_matrix(params, m) * t.transpose() - reduced_core_matrix(params, m);
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, "max entry error " + fmt("%.3e", worst)};
}

Eigen::VectorXd w_of(const IterState& st, const SolverParams& params) { return stack(st.x, recover_lambda(st, params)); }

Outcome contraction() {
  const lvggms::Instance inst = lvggms::generate(20, 0.05, 104);
  const BlockProblem problem = lvggms::make_problem(inst);
  const lvggms::Iterate start = lvggms::default_start(20);
  const auto t0 = Clock::now();
  double worst_excess = -INFINITY;
  bool ok = true;
  for (double gamma : {0.5, 1.0, 1.8}) {
    SolverParams params = default_lvggms_params();
    params.gamma = gamma;
    const GMetric g(params, problem.maps());
    IterState ref = init(problem, params, lvggms::to_blocks(start), lvggms::to_vector(start.lambda));
    for (int k = 0; k < 5000; ++k) ref = step(ref, problem, params).next;
    const Eigen::VectorXd w_star = w_of(ref, params);

    IterState st = init(problem, params, lvggms::to_blocks(start), lvggms::to_vector(start.lambda));
    const double slack = 1e-9 * (1.0 + g.squared_norm(w_of(st, params) - w_star));
    for (int k = 0; k < 300; ++k) {
      const IterState next = step(st, problem, params).next;
      const ContractionCheck c = check_contraction(g, w_of(st, params), w_of(next, params), w_star, gamma);
      worst_excess = std::max(worst_excess, c.excess() / slack);
      if (c.excess() > slack || c.next_distance > c.distance + slack) ok = false;
      st = next;
    }
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 30.0, "worst excess/slack " + fmt("%.3e", worst_excess) + ", " + fmt("%.2fs", secs)};
}

Outcome prox_oracles() {
  std::mt19937_64 rng(105);
  double grid_err = 0.0, x_res = 0.0, psd_err = 0.0;
  for (double a = -2.0; a <= 2.0; a += 0.37) {
    for (double kappa : {0.05, 0.5, 1.2}) {
      double best = 0.0, best_val = INFINITY;
      for (double s = -3.0; s <= 3.0; s += 1e-5) {
        const double v = kappa * std::abs(s) + 0.5 * (s - a) * (s - a);
        if (v < best_val) best_val = v, best = s;
      }
      grid_err = std::max(grid_err, std::abs(lvggms::shrink(a, kappa) - best));
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 10;
    const Eigen::MatrixXd r = random_matrix(rng, n, n);
    const Eigen::MatrixXd C = r * r.transpose() / static_cast<double>(n) + 0.1 * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd c = random_symmetric(rng, n), lam = random_symmetric(rng, n);
    const double sb = uniform(rng, 0.1, 10.0), tau = uniform(rng, 0.2, 2.0);
    const Eigen::MatrixXd X = lvggms::x_prox(c, lam, sb, tau, C);
    x_res = std::max(x_res, (C - X.inverse() + sb * (X - c) - tau * lam).norm() / std::max(1.0, C.norm()));

    // Independent projection oracle: clip the spectrum computed by a full eigensolver on M.
    const Eigen::MatrixXd M = 2.0 * random_symmetric(rng, n);
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    const Eigen::MatrixXd V = es.eigenvectors().real();
    const Eigen::VectorXd d = es.eigenvalues().real().cwiseMax(0.0);
    Eigen::MatrixXd Q = V;
    for (Eigen::Index j = 0; j < n; ++j) Q.col(j).normalize();
    const Eigen::MatrixXd oracle = Q * d.asDiagonal() * Q.transpose();
    psd_err = std::max(psd_err, (lvggms::project_psd(M) - oracle).norm() / std::max(1.0, M.norm()));
  }
  const bool ok = grid_err <= 1e-4 && x_res <= 1e-8 && psd_err <= 1e-10;
  return {ok, "grid " + fmt("%.2e", grid_err) + ", x residual " + fmt("%.2e", x_res) + ", psd " + fmt("%.2e", psd_err)};
}

Outcome relaxation_identity() {
  const lvggms::Instance inst = lvggms::generate(15, 0.1, 106);
  const BlockProblem problem = lvggms::make_problem(inst);
  const SolverParams params = default_lvggms_params();
  const lvggms::Iterate start = lvggms::default_start(15);
  IterState st = init(problem, params, lvggms::to_blocks(start), lvggms::to_vector(start.lambda));
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const StepReport rep = step(st, problem, params);
    for (std::size_t i = 0; i < problem.p(); ++i) {
      const double scale = std::max({1.0, st.x[i].cwiseAbs().maxCoeff(), rep.tilde_x[i].cwiseAbs().maxCoeff()});
      const Eigen::VectorXd diff = (rep.next.x[i] - st.x[i]) - params.gamma * (rep.tilde_x[i] - st.x[i]);
      worst = std::max(worst, diff.cwiseAbs().maxCoeff() / scale);
    }
    const Eigen::VectorXd ldiff = (rep.next.lambda_bar - st.lambda_bar) - params.gamma * (rep.tilde_lambda - st.lambda_bar);
    const double lscale = std::max({1.0, st.lambda_bar.cwiseAbs().maxCoeff(), rep.tilde_lambda.cwiseAbs().maxCoeff()});
    worst = std::max(worst, ldiff.cwiseAbs().maxCoeff() / lscale);
    st = rep.next;
  }
  return {worst <= 1e-14, "max scaled error " + fmt("%.3e", worst)};
}

Outcome lambda_consistency() {
  std::mt19937_64 rng(107);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t p = 2 + static_cast<std::size_t>(k % 4);
    const QuadraticProblem qp = random_quadratic(rng, p, 6);
    const SolverParams params = random_params(rng, p);
    const IterState st = init(qp.problem, params, random_blocks(rng, qp.problem), random_vector(rng, 6));
    const StepReport rep = step(st, qp.problem, params);
    const double s = params.s, tau = params.tau, eps = params.epsilon;
    const auto& blocks = qp.problem.blocks;
    Eigen::VectorXd bracket =
        (tau - eps) * blocks[0]->apply_A(rep.tilde_x[0]) + eps * blocks[0]->apply_A(st.x[0]) - tau * qp.problem.b;
    for (std::size_t i = 1; i < p; ++i) bracket += tau * blocks[i]->apply_A(st.x[i]);
    const Eigen::VectorXd expected =
        recover_lambda(st, params) - bracket / s - ((tau + eps) / s) * qp.problem.residual(rep.tilde_x);
    worst = std::max(worst, (rep.tilde_lambda - expected).norm() / std::max(1.0, expected.norm()));
  }
  return {worst <= 1e-12, "max relative error " + fmt("%.3e", worst)};
}

Outcome sweeps() {
  using namespace grppa::experiment;
  const auto t0 = Clock::now();
  ExperimentConfig c;
  c.instance.n = 100;
  c.instance.density = 0.01;
  c.instance.seed = 7;
  c.stopping.max_iters = 5000;
  c.params.sigma = {0.178, 0.2, 0.2};
  c.params.s = 10.0;
  const lvggms::Instance inst = resolve_instance(c);
  const double fstar = reference_objective(c, inst);

  ExperimentConfig tuned = c;
  tuned.params = default_lvggms_params();
  const SolveResult tuned_run = run_lvggms(tuned, inst, fstar);

  const auto sig = run_sweep(c, inst, fstar, "sigma1", {0.178, 1.0, 5.0, 10.0});
  const auto ss = run_sweep(c, inst, fstar, "s", {10.0, 20.0, 40.0});
  auto increasing = [](const std::vector<experiment::SweepRow>& rows, std::string& out) {
    bool ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out += (i ? "," : "") + (rows[i].skipped ? std::string("skip") : std::to_string(rows[i].iterations));
      ok = ok && !rows[i].skipped && rows[i].converged;
      if (i > 0) ok = ok && rows[i].iterations > rows[i - 1].iterations;
    }
    return ok;
  };
  std::string sig_its, s_its;
  const bool sig_ok = increasing(sig, sig_its);
  const bool s_ok = increasing(ss, s_its);
  const bool tuned_ok = tuned_run.converged() && tuned_run.trace.iterations() < 600;
  const double secs = seconds_since(t0);
  return {sig_ok && s_ok && tuned_ok && secs < 300.0,
          "σ₁ IT " + sig_its + "; s IT " + s_its + "; tuned IT " + std::to_string(tuned_run.trace.iterations()) +
              ", " + fmt("%.1fs", secs)};
}

Outcome ergodic_rate() {
  const lvggms::Instance inst = lvggms::generate(30, 0.05, 108);
  const BlockProblem problem = lvggms::make_problem(inst);
  const SolverParams params = default_lvggms_params();
  const lvggms::Iterate start = lvggms::default_start(30);
  IterState ref = init(problem, params, lvggms::to_blocks(start), lvggms::to_vector(start.lambda));
  for (int k = 0; k < 3000; ++k) ref = step(ref, problem, params).next;
  const double phi_star = problem.objective(ref.x);

  IterState st = init(problem, params, lvggms::to_blocks(start), lvggms::to_vector(start.lambda));
  ErgodicAverager avg;
  std::vector<double> xs, ys;
  std::string gaps;
  for (int t = 0; t <= 200; ++t) {
    const StepReport rep = step(st, problem, params);
    avg.push(rep.tilde_x);
    st = rep.next;
    if (t == 10 || t == 50 || t == 100 || t == 200) {
      const double gap = std::abs(problem.objective(avg.value()) - phi_star);
      xs.push_back(std::log(static_cast<double>(t)));
      ys.push_back(std::log(gap));
      gaps += fmt(" %.3e", gap);
    }
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4, my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 4; ++i) num += (xs[i] - mx) * (ys[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
  const double slope = num / den;
  return {std::isfinite(slope) && slope <= -0.8, "slope " + fmt("%.3f", slope) + ", gaps" + gaps};
}

Outcome quadratic_kkt() {
  auto b1 = std::make_shared<QuadraticBlock>(Eigen::MatrixXd::Constant(1, 1, 2.0), Eigen::VectorXd::Constant(1, -1.0),
                                             Eigen::MatrixXd::Ones(1, 1));
  auto b2 = std::make_shared<QuadraticBlock>(Eigen::MatrixXd::Constant(1, 1, 0.5), Eigen::VectorXd::Constant(1, 0.3),
                                             Eigen::MatrixXd::Constant(1, 1, -2.0));
  const QuadraticProblem qp = make_quadratic({b1, b2}, Eigen::VectorXd::Constant(1, 3.0));

  std::vector<SolverParams> settings(3);
  settings[0].sigma = {3.0, 3.0}, settings[0].s = 3.0, settings[0].tau = 1.0, settings[0].epsilon = 1.0,
  settings[0].gamma = 1.0;
  settings[1].sigma = {0.5, 0.5}, settings[1].s = 10.0, settings[1].tau = kGoldenRatio,
  settings[1].epsilon = kGoldenRatio, settings[1].gamma = 1.8;
  settings[2].sigma = {1.0, 1.2}, settings[2].s = 4.0, settings[2].tau = 1.3, settings[2].epsilon = -0.4,
  settings[2].gamma = 0.7;

  double worst = 0.0;
  long worst_its = 0;
  bool ok = true;
  for (const SolverParams& params : settings) {
    if (!validate(params).ok()) return {false, "test parameters invalid"};
    const KktSolution kkt = solve_kkt(qp, params.tau);
    IterState st = init(qp.problem, params, {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1)},
                        Eigen::VectorXd::Zero(1));
    long k = 0;
    double err = INFINITY;
    for (; k < 2000 && err > 1e-10; ++k) {
      st = step(st, qp.problem, params).next;
      const double lam = recover_lambda(st, params)[0];
      err = std::max({std::abs(st.x[0][0] - kkt.x[0][0]), std::abs(st.x[1][0] - kkt.x[1][0]),
                      std::abs(lam - kkt.lambda[0])});
    }
    ok = ok && err <= 1e-10;
    worst = std::max(worst, err);
    worst_its = std::max(worst_its, k);
  }
  return {ok, "max error " + fmt("%.3e", worst) + " within " + std::to_string(worst_its) + " iterations"};
}

Outcome determinism() {
  using namespace grppa::experiment;
  ExperimentConfig c;
  c.instance.n = 40;
  c.instance.density = 0.05;
  c.instance.seed = 109;
  c.reference_iters = 600;
  const lvggms::Instance inst = resolve_instance(c);
  const double fstar = reference_objective(c, inst);
  std::ostringstream a, b;
  write_trace_csv(a, run_lvggms(c, inst, fstar).trace, false);
  write_trace_csv(b, run_lvggms(c, inst, fstar).trace, false);
  return {a.str() == b.str() && !a.str().empty(), std::to_string(a.str().size()) + " bytes compared"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 G positive definite on 100 random admissible tuples", pd_random},
      {"AC2 congruence reduction of G", congruence},
      {"AC3 G-norm contraction on LVGGMS n=20", contraction},
      {"AC4 subproblem oracles", prox_oracles},
      {"AC5 relaxation identity", relaxation_identity},
      {"AC6 multiplier consistency", lambda_consistency},
      {"AC7 parameter sweeps on LVGGMS n=100", sweeps},
      {"AC8 ergodic O(1/t) objective gap", ergodic_rate},
      {"AC9 two-block quadratic KKT recovery", quadratic_kkt},
      {"AC10 run-to-run determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s  (%s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
