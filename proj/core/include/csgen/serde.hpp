#pragma once

#include <nlohmann/json.hpp>

#include "csgen/trace.hpp"
#include "csgen/types.hpp"

namespace csgen {

// JSON conversions for the shared domain types. Round-tripping any of these
// through JSON is the identity on all fields.

void to_json(nlohmann::json& j, const Language& lang);
void from_json(const nlohmann::json& j, Language& lang);

void to_json(nlohmann::json& j, const HsInstance& instance);
void from_json(const nlohmann::json& j, HsInstance& instance);

void to_json(nlohmann::json& j, const Candidate& candidate);
void from_json(const nlohmann::json& j, Candidate& candidate);

void to_json(nlohmann::json& j, const AnnealConfig& cfg);
void from_json(const nlohmann::json& j, AnnealConfig& cfg);

void to_json(nlohmann::json& j, const TournamentResult& result);
void from_json(const nlohmann::json& j, TournamentResult& result);

void to_json(nlohmann::json& j, const TraceEvent& ev);
void from_json(const nlohmann::json& j, TraceEvent& ev);

/// One event per line (JSON lines), in sequence order.
std::string trace_to_jsonl(const std::vector<TraceEvent>& events);
std::vector<TraceEvent> trace_from_jsonl(std::string_view text);

}  // namespace csgen
