#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "retrokit/rationale/rationale.hpp"

namespace retrokit::rationale {

/// `{r1, r2, r3, r4, answer}`; links are kept separately in records.
nlohmann::json to_json(const Rationale& r);
/// Throws nlohmann::json::exception on missing fields.
Rationale rationale_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Links& l);
Links links_from_json(const nlohmann::json& j);

/// Rationale record: `{id, rxn, r1..r4, answer, links: [...]}`.
nlohmann::json record_json(const std::string& id, const std::string& rxn, const Rationale& r,
                           const std::vector<Links>& links);

}  // namespace retrokit::rationale
