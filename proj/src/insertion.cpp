#include "sorlayout/insertion.hpp"

#include <algorithm>

#include "sorlayout/error.hpp"

namespace sorlayout {

namespace {

bool all_satisfied(const ConstraintSystem& system, std::span<const ConstraintId> ids,
                   const Solution& x, double tol) {
  return std::all_of(ids.begin(), ids.end(), [&](ConstraintId id) {
    return is_satisfied(system.constraint(id), x, tol);
  });
}

}  // namespace

AttemptOutcome try_enable(const ConstraintSystem& system, std::span<const ConstraintId> enabled,
                          const Solution& start, const SolverConfig& config, Rng& rng) {
  SorSweeper sweeper(system, enabled);
  SolveResult result = sweeper.solve(start, config, rng);
  AttemptOutcome outcome;
  outcome.accepted = result.converged;
  outcome.converged = result.reached_stability;
  outcome.sweeps = result.iterations;
  outcome.solution = std::move(result.solution);
  return outcome;
}

ResolvedSolve solve_with_insertion(const ConstraintSystem& system, const Solution& start,
                                   const SolverConfig& config,
                                   const InsertionOptions& options) {
  config.validate();
  if (start.size() != system.variable_count()) {
    throw Error(ErrorCode::kLengthMismatch, "start does not match the system's variables");
  }
  const auto started = std::chrono::steady_clock::now();
  const std::vector<ConstraintId> order = system.priority_order();
  Rng rng(config.seed);

  ResolvedSolve out;
  out.solution = start;

  if (options.accept_feasible_start && all_satisfied(system, order, start, config.tolerance)) {
    AttemptOutcome all = try_enable(system, order, start, config, rng);
    out.total_sweeps += all.sweeps;
    out.attempts += 1;
    out.converged_attempts += all.converged ? 1 : 0;
    if (all.accepted) {
      out.solution = std::move(all.solution);
      out.enabled = order;
      out.wall_time = std::chrono::steady_clock::now() - started;
      return out;
    }
  }

  std::vector<ConstraintId> trial;
  trial.reserve(order.size());
  for (ConstraintId candidate : order) {
    trial = out.enabled;
    trial.push_back(candidate);

    Rng rng_before = options.on_attempt ? rng : Rng{};
    AttemptOutcome attempt = try_enable(system, trial, out.solution, config, rng);
    out.total_sweeps += attempt.sweeps;
    out.attempts += 1;
    out.converged_attempts += attempt.converged ? 1 : 0;

    if (options.on_attempt) {
      options.on_attempt(InsertionAttempt{candidate, out.enabled, out.solution, rng_before,
                                          attempt.accepted, attempt.sweeps});
    }

    if (attempt.accepted) {
      out.enabled.push_back(candidate);
      out.solution = std::move(attempt.solution);
    } else {
      // out.solution was never touched, so the pre-attempt state stands.
      out.disabled.push_back(candidate);
    }
  }

  out.wall_time = std::chrono::steady_clock::now() - started;
  return out;
}

}  // namespace sorlayout
