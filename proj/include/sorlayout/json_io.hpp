#pragma once

#include <json.hpp>

#include "sorlayout/constraint_system.hpp"

namespace sorlayout {

/// {"variables": n, "constraints": [{"id", "terms": [[j, a], ...], "rel",
/// "rhs", "priority"}, ...]}
nlohmann::json system_to_json(const ConstraintSystem& system);

/// Inverse of system_to_json. Constraint ids must equal their position in
/// the list. Throws Error(kBadFormat) on malformed input; constraint-level
/// validation errors propagate with their own codes.
ConstraintSystem system_from_json(const nlohmann::json& doc);

nlohmann::json solution_to_json(const Solution& solution);

}  // namespace sorlayout
