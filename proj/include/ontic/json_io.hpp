#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ontic/measure.hpp"
#include "ontic/nogo.hpp"
#include "ontic/state.hpp"
#include "ontic/theory.hpp"

namespace ontic {

// nlohmann::json keeps keys sorted, so dumps are canonical byte-for-byte
using Json = nlohmann::json;

Json to_json(const ProjState& s);
ProjState state_from_json(const Json& j);
Json to_json(const OrthoBasis& m);
Json to_json(const FiberedMeasure& m);
Json to_json(const OutcomeCheck& c);
Json to_json(const BornReport& r);
Json to_json(const FractionEstimate& e);
Json to_json(const EvasionReport& r);

Json certificate_json(const std::string& check, int d, const Json& params,
                      std::uint64_t seed, const Json& result,
                      const Json& tolerances, bool pass);

std::uint64_t fnv1a(std::string_view bytes);

// Stamps "schema": 1, then a determinism hash over the canonical dump taken
// before the timestamp is added; identical payloads always hash identically.
Json finalize_report(Json payload);
void write_report(const Json& payload, const std::string& path);
void write_text(const std::string& path, const std::string& content);

std::string csv_outcomes(const BornReport& r);
std::string csv_intervals(const IntervalSet& s);

}  // namespace ontic
