#include <cmath>
#include <variant>

#include "json.hpp"

#include "amo/verify.hpp"

namespace amo {

namespace {

using Json = nlohmann::ordered_json;

Json param_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

}  // namespace

std::string to_json(const std::vector<VerificationReport>& reports, bool with_runtime) {
  Json arr = Json::array();
  for (const auto& r : reports) {
    Json params = Json::object();
    for (const auto& [k, v] : r.parameters) params[k] = param_json(v);
    Json rows = Json::array();
    for (const auto& m : r.measurements) {
      Json row;
      row["quantity"] = m.quantity;
      row["label"] = m.label;
      row["measured"] = m.measured;
      row["bound"] = m.relation == Relation::None && std::isnan(m.bound) ? Json(nullptr) : Json(m.bound);
      row["relation"] = to_string(m.relation);
      row["status"] = to_string(m.status);
      rows.push_back(std::move(row));
    }
    Json j;
    j["lemma_id"] = r.lemma_id;
    j["status"] = to_string(r.status);
    j["empirical"] = r.empirical;
    j["parameters"] = std::move(params);
    j["measurements"] = std::move(rows);
    if (with_runtime) j["runtime_seconds"] = r.runtime_seconds;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace amo
