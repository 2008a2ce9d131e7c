#include "sorlayout/json_io.hpp"

#include <string>

#include "sorlayout/error.hpp"

namespace sorlayout {

using nlohmann::json;

json system_to_json(const ConstraintSystem& system) {
  json constraints = json::array();
  for (const Constraint& c : system.constraints()) {
    json terms = json::array();
    for (const Term& t : c.terms) terms.push_back(json::array({t.var.index, t.coeff}));
    constraints.push_back({{"id", c.id.value},
                           {"terms", std::move(terms)},
                           {"rel", std::string(to_string(c.relation))},
                           {"rhs", c.rhs},
                           {"priority", c.priority}});
  }
  return {{"variables", system.variable_count()}, {"constraints", std::move(constraints)}};
}

ConstraintSystem system_from_json(const json& doc) {
  try {
    ConstraintSystem system(doc.at("variables").get<std::size_t>());
    std::size_t position = 0;
    for (const json& entry : doc.at("constraints")) {
      if (entry.at("id").get<std::size_t>() != position) {
        throw Error(ErrorCode::kBadFormat,
                    "constraint ids must be dense and ordered, expected " +
                        std::to_string(position));
      }
      std::vector<Term> terms;
      for (const json& pair : entry.at("terms")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw Error(ErrorCode::kBadFormat, "term must be a [variable, coefficient] pair");
        }
        terms.push_back(Term{VariableId{pair[0].get<std::size_t>()}, pair[1].get<double>()});
      }
      system.add_constraint(std::move(terms),
                            relation_from_string(entry.at("rel").get<std::string>()),
                            entry.at("rhs").get<double>(), entry.at("priority").get<int>());
      ++position;
    }
    return system;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadFormat, std::string("malformed constraint system: ") + e.what());
  }
}

json solution_to_json(const Solution& solution) {
  return json(std::vector<double>(solution.values().begin(), solution.values().end()));
}

}  // namespace sorlayout
