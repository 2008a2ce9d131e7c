#include "sorlayout/constraint_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sorlayout/error.hpp"

namespace sorlayout {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyConstraint: return "EmptyConstraint";
    case ErrorCode::kDuplicatePriority: return "DuplicatePriority";
    case ErrorCode::kInvalidPriority: return "InvalidPriority";
    case ErrorCode::kUnknownVariable: return "UnknownVariable";
    case ErrorCode::kUnknownConstraint: return "UnknownConstraint";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNoEligiblePivot: return "NoEligiblePivot";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kBelowMinimum: return "BelowMinimum";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kSingularDesign: return "SingularDesign";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kLimitExceeded: return "LimitExceeded";
    case ErrorCode::kBadRequest: return "BadRequest";
  }
  return "Unknown";
}

std::string_view to_string(Relation rel) {
  switch (rel) {
    case Relation::kEq: return "eq";
    case Relation::kLe: return "le";
    case Relation::kGe: return "ge";
  }
  return "eq";
}

Relation relation_from_string(std::string_view text) {
  if (text == "eq") return Relation::kEq;
  if (text == "le") return Relation::kLe;
  if (text == "ge") return Relation::kGe;
  throw Error(ErrorCode::kBadFormat, "unknown relation '" + std::string(text) + "'");
}

double Constraint::coefficient(VariableId var) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), var,
                             [](const Term& t, VariableId v) { return t.var < v; });
  return (it != terms.end() && it->var == var) ? it->coeff : 0.0;
}

ConstraintId ConstraintSystem::add_constraint(std::vector<Term> terms, Relation relation,
                                              double rhs, int priority) {
  if (priority <= 0) {
    throw Error(ErrorCode::kInvalidPriority,
                "priority must be positive, got " + std::to_string(priority));
  }
  if (!std::isfinite(rhs)) {
    throw Error(ErrorCode::kInvalidArgument, "rhs must be finite");
  }
  for (const Term& t : terms) {
    if (t.var.index >= variable_count_) {
      throw Error(ErrorCode::kUnknownVariable,
                  "variable " + std::to_string(t.var.index) + " out of range");
    }
    if (!std::isfinite(t.coeff)) {
      throw Error(ErrorCode::kInvalidArgument, "coefficient must be finite");
    }
  }

  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return std::abs(t.coeff) <= kCoeffEps; });

  if (merged.empty()) {
    throw Error(ErrorCode::kEmptyConstraint, "constraint has no non-zero coefficient");
  }
  if (priorities_.contains(priority)) {
    throw Error(ErrorCode::kDuplicatePriority,
                "priority " + std::to_string(priority) + " already used");
  }

  ConstraintId id{constraints_.size()};
  constraints_.push_back(Constraint{id, std::move(merged), relation, rhs, priority});
  priorities_.insert(priority);
  return id;
}

double ConstraintSystem::update_rhs(ConstraintId id, double new_rhs) {
  if (!contains(id)) {
    throw Error(ErrorCode::kUnknownConstraint,
                "unknown constraint " + std::to_string(id.value));
  }
  if (!std::isfinite(new_rhs)) {
    throw Error(ErrorCode::kInvalidArgument, "rhs must be finite");
  }
  double old = constraints_[id.value].rhs;
  constraints_[id.value].rhs = new_rhs;
  return old;
}

const Constraint& ConstraintSystem::constraint(ConstraintId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::kUnknownConstraint,
                "unknown constraint " + std::to_string(id.value));
  }
  return constraints_[id.value];
}

std::vector<ConstraintId> ConstraintSystem::priority_order() const {
  std::vector<ConstraintId> order;
  order.reserve(constraints_.size());
  for (const Constraint& c : constraints_) order.push_back(c.id);
  std::sort(order.begin(), order.end(), [this](ConstraintId a, ConstraintId b) {
    return constraints_[a.value].priority < constraints_[b.value].priority;
  });
  return order;
}

Solution::Solution(std::vector<double> values) : values_(std::move(values)) {
  if (!all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "solution values must be finite");
  }
}

bool Solution::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double lhs(const Constraint& c, const Solution& x) {
  double sum = 0.0;
  for (const Term& t : c.terms) sum += t.coeff * x[t.var];
  return sum;
}

double residual(const Constraint& c, const Solution& x) { return c.rhs - lhs(c, x); }

bool is_satisfied(const Constraint& c, const Solution& x, double tol) {
  const double slack = tol * satisfaction_scale(c);
  const double value = lhs(c, x);
  switch (c.relation) {
    case Relation::kEq: return std::abs(c.rhs - value) <= slack;
    case Relation::kLe: return value <= c.rhs + slack;
    case Relation::kGe: return value >= c.rhs - slack;
  }
  return false;
}

}  // namespace sorlayout
