#pragma once

#include <chrono>
#include <functional>
#include <vector>

#include "sorlayout/constraint_system.hpp"
#include "sorlayout/sor_engine.hpp"

namespace sorlayout {

struct ResolvedSolve {
  Solution solution;
  /// The enabled set E, highest priority first.
  std::vector<ConstraintId> enabled;
  /// Constraints whose tentative insertion found no solution, highest
  /// priority first.
  std::vector<ConstraintId> disabled;
  /// Sweeps summed over every tentative solve.
  long long total_sweeps = 0;
  /// Tentative solves whose sweeps met the stability criterion at least once.
  int converged_attempts = 0;
  int attempts = 0;
  std::chrono::nanoseconds wall_time{0};
};

/// Snapshot handed to InsertionOptions::on_attempt before the resolver
/// moves on. `rng_before` and `start` allow an exact replay via try_enable.
struct InsertionAttempt {
  ConstraintId candidate;
  const std::vector<ConstraintId>& enabled_before;
  const Solution& start;
  const Rng& rng_before;
  bool accepted = false;
  int sweeps = 0;
};

struct InsertionOptions {
  /// When the start already satisfies every constraint, first try to keep
  /// all of them enabled with a single confirming solve. Falls back to
  /// regular insertion if that solve fails.
  bool accept_feasible_start = false;
  std::function<void(const InsertionAttempt&)> on_attempt;
};

struct AttemptOutcome {
  bool accepted = false;
  /// The engine reported stability at least once.
  bool converged = false;
  int sweeps = 0;
  /// Final iterate of the attempt; only meaningful when accepted.
  Solution solution;
};

/// Tries to find a solution satisfying every constraint in `enabled` within
/// config.max_iterations sweeps, starting at `start`. A stable iterate that
/// still violates an enabled constraint keeps sweeping on the remaining
/// budget.
AttemptOutcome try_enable(const ConstraintSystem& system, std::span<const ConstraintId> enabled,
                          const Solution& start, const SolverConfig& config, Rng& rng);

/// Enables constraints one by one in priority order, keeping each one only
/// if a solution is found with it. Rejected constraints leave the working
/// solution exactly as it was before the attempt.
ResolvedSolve solve_with_insertion(const ConstraintSystem& system, const Solution& start,
                                   const SolverConfig& config,
                                   const InsertionOptions& options = {});

}  // namespace sorlayout
