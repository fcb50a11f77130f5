#pragma once

#include <string_view>

#include <json.hpp>

#include "qkin/causal.hpp"

// Site exchange format:
//   {"regions": ["empty", "U0", ...], "empty": "empty",
//    "subset": [["U00", "U0"], ...], "prec": [["U00", "U01"], ...]}
namespace qkin::causal {

// Throws std::invalid_argument describing the first malformed field; JSON
// syntax errors carry the byte offset of the failure.
Site parse_site(std::string_view text);
Site site_from_json(const nlohmann::json& doc);
nlohmann::json site_to_json(const Site& site);

// {"passed": bool, "violations": [{"axiom": "4b", "witness": ["A"]}, ...]}
nlohmann::json report_to_json(const Site& site, const AxiomReport& report);

}  // namespace qkin::causal
