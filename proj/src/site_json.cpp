#include "qkin/site_json.hpp"

#include <stdexcept>
#include <string>

namespace qkin::causal {

namespace {

std::vector<std::pair<std::string, std::string>> read_pairs(const nlohmann::json& doc,
                                                            const char* key) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw std::invalid_argument(std::string("'") + key + "' must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& pair = arr[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
      throw std::invalid_argument(std::string(key) + "[" + std::to_string(i) +
                                  "] must be a pair of region ids");
    out.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
  }
  return out;
}

}  // namespace

Site parse_site(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("site JSON: ") + e.what());
  }
  return site_from_json(doc);
}

Site site_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("site JSON must be an object");
  if (!doc.contains("regions") || !doc.at("regions").is_array())
    throw std::invalid_argument("site JSON needs a 'regions' array");
  if (!doc.contains("empty") || !doc.at("empty").is_string())
    throw std::invalid_argument("site JSON needs an 'empty' region id");
  for (const auto& [key, value] : doc.items())
    if (key != "regions" && key != "empty" && key != "subset" && key != "prec")
      throw std::invalid_argument("unknown site JSON key '" + key + "'");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < doc.at("regions").size(); ++i) {
    const auto& id = doc.at("regions")[i];
    if (!id.is_string())
      throw std::invalid_argument("regions[" + std::to_string(i) + "] must be a string");
    names.push_back(id.get<std::string>());
  }
  return Site::from_names(std::move(names), doc.at("empty").get<std::string>(),
                          read_pairs(doc, "subset"), read_pairs(doc, "prec"));
}

nlohmann::json site_to_json(const Site& site) {
  nlohmann::json doc;
  doc["regions"] = site.names();
  doc["empty"] = site.name(site.empty());
  auto pairs = [&](const std::vector<std::pair<RegionId, RegionId>>& facts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [a, b] : facts) arr.push_back({site.name(a), site.name(b)});
    return arr;
  };
  doc["subset"] = pairs(site.subset_pairs());
  doc["prec"] = pairs(site.prec_pairs());
  return doc;
}

nlohmann::json report_to_json(const Site& site, const AxiomReport& report) {
  nlohmann::json doc;
  doc["passed"] = report.passed();
  doc["violations"] = nlohmann::json::array();
  for (const auto& v : report.violations) {
    nlohmann::json witness = nlohmann::json::array();
    for (RegionId r : v.witness) witness.push_back(site.name(r));
    doc["violations"].push_back({{"axiom", v.axiom}, {"witness", witness}});
  }
  return doc;
}

}  // namespace qkin::causal
