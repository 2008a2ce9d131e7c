#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "sorlayout/constraint_system.hpp"

namespace sorlayout {

/// Floor on the denominator of the per-variable relative change.
inline constexpr double kErrEps = 1e-6;

/// Pivot choice and every other random draw go through this generator so a
/// seed replays a run exactly.
using Rng = std::mt19937_64;

struct SolverConfig {
  double omega = 0.7;
  double tolerance = 0.01;
  int max_iterations = 1000;
  std::uint64_t seed = 0;

  /// Throws Error(kInvalidConfig) unless 0 < omega < 2, tolerance > 0 and
  /// max_iterations >= 1.
  void validate() const;
};

/// Maps each enabled constraint to the variable it is solved for.
class PivotAssignment {
 public:
  PivotAssignment() = default;
  explicit PivotAssignment(std::size_t constraint_count)
      : by_constraint_(constraint_count, kNone) {}

  void assign(ConstraintId c, VariableId v);
  bool contains(ConstraintId c) const {
    return c.value < by_constraint_.size() && by_constraint_[c.value] != kNone;
  }
  /// Throws Error(kUnknownConstraint) if `c` has no pivot.
  VariableId at(ConstraintId c) const;
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> by_constraint_;
  std::size_t count_ = 0;
};

struct SolveResult {
  Solution solution;
  /// Stable and every enabled constraint satisfied.
  bool converged = false;
  /// Some sweep's relative change fell below the tolerance, whether or not
  /// the iterate satisfied the constraints at that point.
  bool reached_stability = false;
  int iterations = 0;
  double final_error = std::numeric_limits<double>::infinity();
};

/// Picks, for every enabled constraint, one of its non-zero variables
/// uniformly at random.
PivotAssignment assign_pivots_random(const ConstraintSystem& system,
                                     std::span<const ConstraintId> enabled, Rng& rng);

/// Constraint i -> variable i, for square systems with a non-zero diagonal.
PivotAssignment assign_pivots_diagonal(const ConstraintSystem& system);

/// New value for `pivot` that relaxes `c` towards equality:
///   omega / a_p * (b - sum_{j != p} a_j x_j) + (1 - omega) * x_p
double relax_step(const Constraint& c, VariableId pivot, const Solution& x, double omega);

/// max_i |next_i - prev_i| / max(|next_i|, kErrEps); 0 for empty solutions.
double relative_error(const Solution& prev, const Solution& next);

/// Ids of `enabled` sorted highest priority first.
std::vector<ConstraintId> priority_sorted(const ConstraintSystem& system,
                                          std::span<const ConstraintId> enabled);

/// One Gauss-Seidel/SOR sweep over the enabled constraints in priority
/// order, updating `solution` in place. Pivots are drawn fresh from `rng`
/// unless `fixed_pivots` is given. Satisfied inequalities are skipped.
/// Returns the relative change of the sweep.
double iterate_once(const ConstraintSystem& system, std::span<const ConstraintId> enabled,
                    Solution& solution, const SolverConfig& config, Rng& rng,
                    const PivotAssignment* fixed_pivots = nullptr);

struct SolveOptions {
  const PivotAssignment* fixed_pivots = nullptr;
  /// Called after every sweep with the 1-based sweep index and its error.
  std::function<void(int, double)> on_sweep;
};

/// Sweep state for one enabled set, reusable across solves so that repeated
/// attempts on the same set avoid re-sorting and reallocation.
class SorSweeper {
 public:
  SorSweeper(const ConstraintSystem& system, std::span<const ConstraintId> enabled);

  /// One sweep; see iterate_once.
  double sweep(Solution& solution, double omega, Rng& rng,
               const PivotAssignment* fixed_pivots = nullptr);

  /// See the free function solve.
  SolveResult solve(const Solution& start, const SolverConfig& config, Rng& rng,
                    const SolveOptions& options = {});

 private:
  const ConstraintSystem* system_;
  std::vector<const Constraint*> rows_;
  Solution before_;
};

/// Sweeps until the relative change drops below the tolerance with every
/// enabled constraint satisfied, or the iteration cap is hit. A stable
/// iterate that still violates a constraint (random pivots can stall on
/// one) keeps sweeping. `start` is copied, never modified.
SolveResult solve(const ConstraintSystem& system, std::span<const ConstraintId> enabled,
                  const Solution& start, const SolverConfig& config, Rng& rng,
                  const SolveOptions& options = {});

/// Same as above with a generator seeded from config.seed.
SolveResult solve(const ConstraintSystem& system, std::span<const ConstraintId> enabled,
                  const Solution& start, const SolverConfig& config,
                  const SolveOptions& options = {});

}  // namespace sorlayout
