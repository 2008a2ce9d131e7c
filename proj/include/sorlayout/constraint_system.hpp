#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string_view>
#include <vector>

namespace sorlayout {

/// Coefficients with magnitude at or below this are structural zeros.
inline constexpr double kCoeffEps = 1e-9;

struct VariableId {
  std::size_t index = 0;
  friend auto operator<=>(const VariableId&, const VariableId&) = default;
};

struct ConstraintId {
  std::size_t value = 0;
  friend auto operator<=>(const ConstraintId&, const ConstraintId&) = default;
};

enum class Relation { kEq, kLe, kGe };

std::string_view to_string(Relation rel);
Relation relation_from_string(std::string_view text);

struct Term {
  VariableId var;
  double coeff = 0.0;
  friend bool operator==(const Term&, const Term&) = default;
};

/// One row of the system: sum(coeff * x[var]) REL rhs.
///
/// Terms are kept sorted by variable index with no duplicates and no
/// structural zeros. Smaller priority numbers win conflicts.
struct Constraint {
  ConstraintId id;
  std::vector<Term> terms;
  Relation relation = Relation::kEq;
  double rhs = 0.0;
  int priority = 0;

  bool is_inequality() const { return relation != Relation::kEq; }
  /// Coefficient of `var`, or 0 when the variable does not appear.
  double coefficient(VariableId var) const;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// A sparse list of prioritized linear constraints over dense variables.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(std::size_t variable_count = 0)
      : variable_count_(variable_count) {}

  std::size_t variable_count() const { return variable_count_; }
  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }

  VariableId add_variable() { return VariableId{variable_count_++}; }

  /// Appends a constraint. Duplicate variables are merged by summing their
  /// coefficients; coefficients at or below kCoeffEps are dropped.
  ConstraintId add_constraint(std::vector<Term> terms, Relation relation,
                              double rhs, int priority);

  /// Replaces the right-hand side and returns the previous value.
  double update_rhs(ConstraintId id, double new_rhs);

  const Constraint& constraint(ConstraintId id) const;
  std::span<const Constraint> constraints() const { return constraints_; }
  bool contains(ConstraintId id) const { return id.value < constraints_.size(); }
  bool priority_in_use(int priority) const { return priorities_.contains(priority); }

  /// All constraint ids, highest priority (smallest number) first.
  std::vector<ConstraintId> priority_order() const;

  friend bool operator==(const ConstraintSystem& a, const ConstraintSystem& b) {
    return a.variable_count_ == b.variable_count_ && a.constraints_ == b.constraints_;
  }

 private:
  std::size_t variable_count_ = 0;
  std::vector<Constraint> constraints_;
  std::set<int> priorities_;
};

/// Dense assignment of values to every variable of a system. Entries are
/// always finite.
class Solution {
 public:
  Solution() = default;
  explicit Solution(std::size_t n) : values_(n, 0.0) {}
  explicit Solution(std::vector<double> values);

  static Solution zeros(const ConstraintSystem& system) {
    return Solution(system.variable_count());
  }

  std::size_t size() const { return values_.size(); }
  double operator[](VariableId v) const { return values_[v.index]; }
  double& operator[](VariableId v) { return values_[v.index]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  bool all_finite() const;

  friend bool operator==(const Solution&, const Solution&) = default;

 private:
  std::vector<double> values_;
};

/// Sum of coeff * x over the constraint's terms.
double lhs(const Constraint& c, const Solution& x);

/// b - sum(a * x).
double residual(const Constraint& c, const Solution& x);

/// max(1, |rhs|): relative tolerance for large pixel values, absolute for
/// small ones.
inline double satisfaction_scale(const Constraint& c) {
  return std::max(1.0, std::abs(c.rhs));
}

bool is_satisfied(const Constraint& c, const Solution& x, double tol);

}  // namespace sorlayout
