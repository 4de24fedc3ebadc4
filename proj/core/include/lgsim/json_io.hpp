#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lgsim/filters.hpp"
#include "lgsim/nonlocality.hpp"
#include "lgsim/quantum.hpp"
#include "lgsim/temporal.hpp"

namespace lgsim {

// Channel document:
//   {"dim": d, "kind": "tp" | "tni", "kraus": [[[re, im], ...], ...]}
// with each Kraus operator flattened row-major.
nlohmann::json channel_to_json(const KrausChannel& ch);

// ParseError for malformed documents, ValidationError when the operators do
// not form a channel of the stated kind.
KrausChannel channel_from_json(const nlohmann::json& doc);
KrausChannel parse_channel(std::string_view text);

nlohmann::json filter_to_json(const FilterSpec& f);

nlohmann::json to_json(const ChshReport& report);
nlohmann::json to_json(const ActivationResult& result);
nlohmann::json to_json(const NonlocalityVerdict& verdict);

// CSV with header a,b,x,y,p; one row per table entry.
void write_statistics_csv(const TwoTimeStatistics& stats, std::ostream& out);

// {"N": {"+1|1": ..., "-1|1": ..., "+1|2": ..., "-1|2": ...}}
nlohmann::json success_sidecar(const TwoTimeStatistics& stats);

// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

}  // namespace lgsim
