#pragma once

// JSON views of systems, constants and reports, used by the CLI output and
// golden files.

#include "ltvcomm/commute.hpp"
#include "ltvcomm/sim.hpp"
#include "ltvcomm/system.hpp"

#include <nlohmann/json.hpp>

namespace ltvcomm {

nlohmann::json to_json(const LTVSystem& s);
/// Throws SystemError on missing or mistyped fields; does not validate a2.
LTVSystem system_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PairConstants& k);
nlohmann::json to_json(const CommutativityReport& r);
nlohmann::json to_json(const TransitivityReport& r);
nlohmann::json to_json(const ComparisonMetrics& m);

/// Parses "c2,c1,c0". Throws std::invalid_argument on malformed text.
PairConstants parse_constants(std::string_view text);

}  // namespace ltvcomm
