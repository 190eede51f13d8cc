#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "grppa/linear_map.hpp"
#include "grppa/metrics.hpp"
#include "grppa/params.hpp"

namespace grppa {

/**
 * One block of a separable problem: fᵢ, 𝒳ᵢ and the coefficient map Aᵢ.
 *
 * Implementations must be safe to call concurrently through the const
 * interface; the engine may solve blocks 2..p in parallel.
 */
class Block {
 public:
  virtual ~Block() = default;

  virtual const LinearMap& map() const = 0;

  /// argmin over 𝒳ᵢ of fᵢ(x) + (σ̄/2)·‖Aᵢ(x − center) − (τ/σ̄)·multiplier‖².
  virtual Eigen::VectorXd solve_prox(const Eigen::VectorXd& center, const Eigen::VectorXd& multiplier,
                                     double sigma_bar, double tau) const = 0;

  virtual double objective(const Eigen::VectorXd& x) const = 0;

  Eigen::VectorXd apply_A(const Eigen::VectorXd& x) const { return map().apply(x); }
};

/// min Σ fᵢ(xᵢ) s.t. Σ Aᵢxᵢ = b, xᵢ ∈ 𝒳ᵢ.
struct BlockProblem {
  std::vector<std::shared_ptr<const Block>> blocks;
  Eigen::VectorXd b;

  std::size_t p() const { return blocks.size(); }
  Eigen::Index constraint_dim() const { return b.size(); }

  /// Σ Aᵢxᵢ − b, accumulated in block order.
  Eigen::VectorXd residual(const std::vector<Eigen::VectorXd>& x) const;
  /// φ(x) = Σ fᵢ(xᵢ).
  double objective(const std::vector<Eigen::VectorXd>& x) const;
  std::vector<LinearMap> maps() const;
};

/// Thrown when a block's subproblem solver fails; carries the zero-based block index.
class SubproblemError : public std::runtime_error {
 public:
  SubproblemError(std::size_t block, const std::string& what)
      : std::runtime_error("block " + std::to_string(block + 1) + " subproblem failed: " + what),
        block_(block) {}
  std::size_t block() const { return block_; }

 private:
  std::size_t block_;
};

struct IterState {
  std::vector<Eigen::VectorXd> x;
  Eigen::VectorXd lambda_bar;  // λ̄ = λ − ((τ+ε)/s)·r
  Eigen::VectorXd r;           // Σ Aᵢxᵢ − b
  long k = 0;
};

struct StepReport {
  std::vector<Eigen::VectorXd> tilde_x;
  Eigen::VectorXd tilde_lambda;  // λ̃ᵏ, in the shifted (λ̄) coordinates
  Eigen::VectorXd lambda_half;   // λ̄^{k+1/2}
  std::vector<Eigen::VectorXd> deltas;
  IterState next;
};

struct EngineOptions {
  /// Worker threads for blocks 2..p; 1 solves them serially.
  unsigned threads = 1;
};

/// r⁰ = Σ Aᵢxᵢ⁰ − b, λ̄⁰ = λ⁰ − ((τ+ε)/s)·r⁰. Throws std::invalid_argument on shape errors.
IterState init(const BlockProblem& problem, const SolverParams& params, std::vector<Eigen::VectorXd> x0,
               const Eigen::VectorXd& lambda0);

/// One full iteration: block-1 prox, half-step multiplier, blocks 2..p, λ̃, relaxation.
StepReport step(const IterState& state, const BlockProblem& problem, const SolverParams& params,
                const EngineOptions& options = {});

/// λ = λ̄ + ((τ+ε)/s)·r.
Eigen::VectorXd recover_lambda(const IterState& state, const SolverParams& params);

/// Called once per iteration; must not touch solver state.
using TraceCallback = std::function<void(const IterationRecord&)>;

struct SolveResult {
  IterState state;
  ConvergenceTrace trace;

  bool converged() const { return trace.converged(); }
};

/// Iterates until the stopping rule fires. Reaching max_iters is reported in
/// the trace status, not thrown. Throws std::invalid_argument if params fail
/// validation.
SolveResult solve(const BlockProblem& problem, const SolverParams& params, std::vector<Eigen::VectorXd> x0,
                  const Eigen::VectorXd& lambda0, const StoppingRule& rule, const TraceCallback& on_iteration = {},
                  const EngineOptions& options = {});

}  // namespace grppa
