#include "sorlayout/sor_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sorlayout/error.hpp"

namespace sorlayout {

void SolverConfig::validate() const {
  if (!(omega > 0.0 && omega < 2.0)) {
    throw Error(ErrorCode::kInvalidConfig, "omega must lie in (0, 2), got " + std::to_string(omega));
  }
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_iterations must be at least 1");
  }
}

void PivotAssignment::assign(ConstraintId c, VariableId v) {
  if (c.value >= by_constraint_.size()) by_constraint_.resize(c.value + 1, kNone);
  if (by_constraint_[c.value] == kNone) ++count_;
  by_constraint_[c.value] = v.index;
}

VariableId PivotAssignment::at(ConstraintId c) const {
  if (!contains(c)) {
    throw Error(ErrorCode::kUnknownConstraint,
                "no pivot assigned to constraint " + std::to_string(c.value));
  }
  return VariableId{by_constraint_[c.value]};
}

namespace {

// Uniform over the terms with a usable coefficient. Draws nothing when the
// choice is forced, so sweeps and assign_pivots_random consume the
// generator identically.
VariableId draw_pivot(const Constraint& c, Rng& rng) {
  std::size_t eligible = 0;
  for (const Term& t : c.terms) eligible += std::abs(t.coeff) > kCoeffEps ? 1 : 0;
  if (eligible == 0) {
    throw Error(ErrorCode::kNoEligiblePivot,
                "constraint " + std::to_string(c.id.value) + " has no eligible pivot");
  }
  std::size_t k = 0;
  if (eligible > 1) k = std::uniform_int_distribution<std::size_t>(0, eligible - 1)(rng);
  for (const Term& t : c.terms) {
    if (std::abs(t.coeff) <= kCoeffEps) continue;
    if (k-- == 0) return t.var;
  }
  return c.terms.back().var;  // unreachable
}

}  // namespace

PivotAssignment assign_pivots_random(const ConstraintSystem& system,
                                     std::span<const ConstraintId> enabled, Rng& rng) {
  PivotAssignment pivots(system.size());
  for (ConstraintId id : enabled) pivots.assign(id, draw_pivot(system.constraint(id), rng));
  return pivots;
}

PivotAssignment assign_pivots_diagonal(const ConstraintSystem& system) {
  PivotAssignment pivots(system.size());
  for (const Constraint& c : system.constraints()) {
    VariableId diag{c.id.value};
    if (std::abs(c.coefficient(diag)) <= kCoeffEps) {
      throw Error(ErrorCode::kNoEligiblePivot,
                  "constraint " + std::to_string(c.id.value) + " has a zero diagonal");
    }
    pivots.assign(c.id, diag);
  }
  return pivots;
}

double relax_step(const Constraint& c, VariableId pivot, const Solution& x, double omega) {
  double pivot_coeff = 0.0;
  double rest = c.rhs;
  for (const Term& t : c.terms) {
    if (t.var == pivot) {
      pivot_coeff = t.coeff;
    } else {
      rest -= t.coeff * x[t.var];
    }
  }
  if (std::abs(pivot_coeff) <= kCoeffEps) {
    throw Error(ErrorCode::kNoEligiblePivot, "pivot variable " + std::to_string(pivot.index) +
                                                 " is not in constraint " +
                                                 std::to_string(c.id.value));
  }
  return omega * rest / pivot_coeff + (1.0 - omega) * x[pivot];
}

double relative_error(const Solution& prev, const Solution& next) {
  if (prev.size() != next.size()) {
    throw Error(ErrorCode::kLengthMismatch, "solutions differ in length");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    double change = std::abs(next[i] - prev[i]) / std::max(std::abs(next[i]), kErrEps);
    worst = std::max(worst, change);
  }
  return worst;
}

std::vector<ConstraintId> priority_sorted(const ConstraintSystem& system,
                                          std::span<const ConstraintId> enabled) {
  std::vector<ConstraintId> order(enabled.begin(), enabled.end());
  auto by_priority = [&](ConstraintId a, ConstraintId b) {
    return system.constraint(a).priority < system.constraint(b).priority;
  };
  if (!std::is_sorted(order.begin(), order.end(), by_priority)) {
    std::sort(order.begin(), order.end(), by_priority);
  }
  return order;
}

namespace {

bool inequality_holds(const Constraint& c, const Solution& x) {
  const double value = lhs(c, x);
  return c.relation == Relation::kLe ? value <= c.rhs : value >= c.rhs;
}

void check_length(const ConstraintSystem& system, const Solution& x) {
  if (x.size() != system.variable_count()) {
    throw Error(ErrorCode::kLengthMismatch,
                "solution has " + std::to_string(x.size()) + " entries, system has " +
                    std::to_string(system.variable_count()) + " variables");
  }
}

}  // namespace

SorSweeper::SorSweeper(const ConstraintSystem& system, std::span<const ConstraintId> enabled)
    : system_(&system) {
  for (ConstraintId id : priority_sorted(system, enabled)) {
    rows_.push_back(&system.constraint(id));
  }
}

double SorSweeper::sweep(Solution& solution, double omega, Rng& rng,
                         const PivotAssignment* fixed_pivots) {
  check_length(*system_, solution);
  before_ = solution;
  for (const Constraint* c : rows_) {
    // Pivots are drawn for skipped rows too so the draw sequence matches a
    // full assign_pivots_random call.
    const VariableId p = fixed_pivots ? fixed_pivots->at(c->id) : draw_pivot(*c, rng);
    if (c->is_inequality() && inequality_holds(*c, solution)) continue;
    solution[p] = relax_step(*c, p, solution, omega);
  }
  if (!solution.all_finite()) {
    solution = before_;
    return std::numeric_limits<double>::infinity();
  }
  return relative_error(before_, solution);
}

SolveResult SorSweeper::solve(const Solution& start, const SolverConfig& config, Rng& rng,
                              const SolveOptions& options) {
  config.validate();
  check_length(*system_, start);

  SolveResult result;
  result.solution = start;
  for (int sweep_index = 1; sweep_index <= config.max_iterations; ++sweep_index) {
    const double error = sweep(result.solution, config.omega, rng, options.fixed_pivots);
    result.iterations = sweep_index;
    result.final_error = error;
    if (options.on_sweep) options.on_sweep(sweep_index, error);
    if (!std::isfinite(error)) break;
    if (error < config.tolerance) {
      result.reached_stability = true;
      const bool satisfied = std::all_of(rows_.begin(), rows_.end(), [&](const Constraint* c) {
        return is_satisfied(*c, result.solution, config.tolerance);
      });
      if (satisfied) {
        result.converged = true;
        break;
      }
    }
  }
  return result;
}

double iterate_once(const ConstraintSystem& system, std::span<const ConstraintId> enabled,
                    Solution& solution, const SolverConfig& config, Rng& rng,
                    const PivotAssignment* fixed_pivots) {
  SorSweeper sweeper(system, enabled);
  return sweeper.sweep(solution, config.omega, rng, fixed_pivots);
}

SolveResult solve(const ConstraintSystem& system, std::span<const ConstraintId> enabled,
                  const Solution& start, const SolverConfig& config, Rng& rng,
                  const SolveOptions& options) {
  SorSweeper sweeper(system, enabled);
  return sweeper.solve(start, config, rng, options);
}

SolveResult solve(const ConstraintSystem& system, std::span<const ConstraintId> enabled,
                  const Solution& start, const SolverConfig& config,
                  const SolveOptions& options) {
  Rng rng(config.seed);
  return solve(system, enabled, start, config, rng, options);
}

}  // namespace sorlayout
