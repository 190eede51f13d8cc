#include "grppa/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace grppa {

Eigen::VectorXd BlockProblem::residual(const std::vector<Eigen::VectorXd>& x) const {
  if (x.size() != blocks.size()) throw std::invalid_argument("residual: block count mismatch");
  Eigen::VectorXd r = -b;
  for (std::size_t i = 0; i < blocks.size(); ++i) r += blocks[i]->apply_A(x[i]);
  return r;
}

double BlockProblem::objective(const std::vector<Eigen::VectorXd>& x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) total += blocks[i]->objective(x[i]);
  return total;
}

std::vector<LinearMap> BlockProblem::maps() const {
  std::vector<LinearMap> out;
  out.reserve(blocks.size());
  for (const auto& blk : blocks) out.push_back(blk->map());
  return out;
}

namespace {

void check_shapes(const BlockProblem& problem, const SolverParams& params, const std::vector<Eigen::VectorXd>& x,
                  const Eigen::VectorXd& lambda) {
  if (problem.p() < 2) throw std::invalid_argument("BlockProblem: need at least two blocks");
  if (params.p() != problem.p()) {
    throw std::invalid_argument("params carry " + std::to_string(params.p()) + " sigmas for a " +
                                std::to_string(problem.p()) + "-block problem");
  }
  if (x.size() != problem.p()) throw std::invalid_argument("initial iterate has the wrong block count");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& map = problem.blocks[i]->map();
    if (map.rows() != problem.constraint_dim() || map.cols() != x[i].size()) {
      throw std::invalid_argument("block " + std::to_string(i + 1) + " dimensions are inconsistent");
    }
  }
  if (lambda.size() != problem.constraint_dim()) throw std::invalid_argument("multiplier has the wrong dimension");
}

Eigen::VectorXd solve_block(const BlockProblem& problem, std::size_t i, const Eigen::VectorXd& center,
                            const Eigen::VectorXd& multiplier, double sigma_bar, double tau) {
  try {
    return problem.blocks[i]->solve_prox(center, multiplier, sigma_bar, tau);
  } catch (const SubproblemError&) {
    throw;
  } catch (const std::exception& e) {
    throw SubproblemError(i, e.what());
  }
}

}  // namespace

IterState init(const BlockProblem& problem, const SolverParams& params, std::vector<Eigen::VectorXd> x0,
               const Eigen::VectorXd& lambda0) {
  check_shapes(problem, params, x0, lambda0);
  IterState state;
  state.x = std::move(x0);
  state.r = problem.residual(state.x);
  state.lambda_bar = lambda0 - ((params.tau + params.epsilon) / params.s) * state.r;
  return state;
}

StepReport step(const IterState& state, const BlockProblem& problem, const SolverParams& params,
                const EngineOptions& options) {
  const std::size_t p = problem.p();
  const double s = params.s;
  const double tau = params.tau;
  const double eps = params.epsilon;
  const double gamma = params.gamma;

  StepReport out;
  out.tilde_x.resize(p);
  out.deltas.resize(p);

  out.tilde_x[0] = solve_block(problem, 0, state.x[0], state.lambda_bar, params.sigma_bar(0), tau);
  const Eigen::VectorXd r = problem.residual(state.x);
  out.deltas[0] = out.tilde_x[0] - state.x[0];
  const Eigen::VectorXd a1_delta = problem.blocks[0]->apply_A(out.deltas[0]);

  out.lambda_half = state.lambda_bar - ((tau - eps) / s) * (2.0 * a1_delta + r);

  // Blocks 2..p are independent given λ̄^{k+1/2}; each writes only its own slot.
  auto solve_range = [&](std::size_t first, std::size_t stride, std::vector<std::exception_ptr>& errors) {
    for (std::size_t i = first; i < p; i += stride) {
      try {
        out.tilde_x[i] = solve_block(problem, i, state.x[i], out.lambda_half, params.sigma_bar(i), tau);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::exception_ptr> errors(p);
  const std::size_t workers = std::min<std::size_t>(std::max(1u, options.threads), p - 1);
  if (workers <= 1) {
    solve_range(1, 1, errors);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { solve_range(1 + w, workers, errors); });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Eigen::VectorXd sum_a_delta = a1_delta;
  for (std::size_t i = 1; i < p; ++i) {
    out.deltas[i] = out.tilde_x[i] - state.x[i];
    sum_a_delta += problem.blocks[i]->apply_A(out.deltas[i]);
  }

  out.tilde_lambda = state.lambda_bar - ((tau + eps) / s) * sum_a_delta -
                     (1.0 / s) * ((tau - eps) * a1_delta + tau * r);

  IterState& next = out.next;
  next.x.resize(p);
  for (std::size_t i = 0; i < p; ++i) next.x[i] = state.x[i] + gamma * out.deltas[i];
  next.lambda_bar = state.lambda_bar + gamma * (out.tilde_lambda - state.lambda_bar);
  next.r = problem.residual(next.x);
  next.k = state.k + 1;
  return out;
}

Eigen::VectorXd recover_lambda(const IterState& state, const SolverParams& params) {
  return state.lambda_bar + ((params.tau + params.epsilon) / params.s) * state.r;
}

SolveResult solve(const BlockProblem& problem, const SolverParams& params, std::vector<Eigen::VectorXd> x0,
                  const Eigen::VectorXd& lambda0, const StoppingRule& rule, const TraceCallback& on_iteration,
                  const EngineOptions& options) {
  if (const auto v = validate(params); !v) throw std::invalid_argument("invalid parameters: " + v.describe());
  check_rule(rule);

  SolveResult result;
  result.trace.params = params;
  IterState state = init(problem, params, std::move(x0), lambda0);

  while (true) {
    const auto start = std::chrono::steady_clock::now();
    StepReport report = step(state, problem, params, options);
    const auto stop = std::chrono::steady_clock::now();

    IterationRecord rec;
    rec.k = report.next.k;
    rec.elapsed_s = std::chrono::duration<double>(stop - start).count();
    rec.ier = ier(state.x, report.next.x);
    rec.cer = cer(report.next.r, report.next.x);
    try {
      rec.objective = problem.objective(report.next.x);
    } catch (const std::domain_error&) {
      rec.objective = std::numeric_limits<double>::quiet_NaN();
    }
    if (rule.reference_objective && std::isfinite(rec.objective)) {
      rec.oer = oer(rec.objective, *rule.reference_objective);
    }

    state = std::move(report.next);
    result.trace.records.push_back(rec);
    if (on_iteration) on_iteration(rec);

    const StopDecision decision = should_stop(rec, rule);
    if (decision.stop) {
      result.trace.status =
          decision.converged ? ConvergenceTrace::Status::Converged : ConvergenceTrace::Status::MaxIterations;
      break;
    }
  }
  result.state = std::move(state);
  return result;
}

}  // namespace grppa
