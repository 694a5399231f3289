#include "csgen/serde.hpp"

#include <sstream>

#include "csgen/error.hpp"

namespace csgen {

using nlohmann::json;

void to_json(json& j, const Language& lang) { j = std::string(to_string(lang)); }

void from_json(const json& j, Language& lang) {
  lang = language_from_code(j.get<std::string>());
}

void to_json(json& j, const HsInstance& instance) {
  j = json{{"id", instance.id},
           {"language", instance.language},
           {"hate_speech", instance.hate_speech},
           {"background", instance.background}};
  if (instance.reference_cn) j["reference_cn"] = *instance.reference_cn;
}

void from_json(const json& j, HsInstance& instance) {
  j.at("id").get_to(instance.id);
  j.at("language").get_to(instance.language);
  j.at("hate_speech").get_to(instance.hate_speech);
  j.at("background").get_to(instance.background);
  if (j.contains("reference_cn"))
    instance.reference_cn = j.at("reference_cn").get<std::string>();
  else
    instance.reference_cn.reset();
}

void to_json(json& j, const Candidate& candidate) {
  j = json{{"text", candidate.text},
           {"mutation", std::string(to_string(candidate.mutation))},
           {"iteration", candidate.iteration}};
  if (candidate.score) j["score"] = *candidate.score;
  if (candidate.parent_id) j["parent_id"] = *candidate.parent_id;
}

void from_json(const json& j, Candidate& candidate) {
  j.at("text").get_to(candidate.text);
  auto mutation = parse_mutation(j.at("mutation").get<std::string>());
  if (!mutation) throw DataError("unknown mutation tag in candidate");
  candidate.mutation = *mutation;
  j.at("iteration").get_to(candidate.iteration);
  candidate.score.reset();
  if (j.contains("score")) candidate.score = j.at("score").get<double>();
  candidate.parent_id.reset();
  if (j.contains("parent_id")) candidate.parent_id = j.at("parent_id").get<std::string>();
}

void to_json(json& j, const AnnealConfig& cfg) {
  j = json{{"s_target", cfg.s_target},   {"n_max", cfg.n_max},
           {"k", cfg.k},                 {"delta_t", cfg.delta_t},
           {"t0", cfg.t0},               {"n_per_gen", cfg.n_per_gen},
           {"append_width", cfg.append_width},
           {"append_fanout", cfg.append_fanout},
           {"rng_seed", cfg.rng_seed}};
}

void from_json(const json& j, AnnealConfig& cfg) {
  AnnealConfig defaults;
  cfg.s_target = j.value("s_target", defaults.s_target);
  cfg.n_max = j.value("n_max", defaults.n_max);
  cfg.k = j.value("k", defaults.k);
  cfg.delta_t = j.value("delta_t", defaults.delta_t);
  cfg.t0 = j.value("t0", defaults.t0);
  cfg.n_per_gen = j.value("n_per_gen", defaults.n_per_gen);
  cfg.append_width = j.value("append_width", defaults.append_width);
  cfg.append_fanout = j.value("append_fanout", defaults.append_fanout);
  cfg.rng_seed = j.value("rng_seed", defaults.rng_seed);
}

void to_json(json& j, const TournamentResult& result) {
  j = json{{"candidate_key", result.candidate_key},
           {"total_score", result.total_score},
           {"match_count", result.match_count},
           {"average_score", result.average_score},
           {"rank", result.rank}};
}

void from_json(const json& j, TournamentResult& result) {
  j.at("candidate_key").get_to(result.candidate_key);
  j.at("total_score").get_to(result.total_score);
  j.at("match_count").get_to(result.match_count);
  j.at("average_score").get_to(result.average_score);
  j.at("rank").get_to(result.rank);
}

namespace {

json payload_to_json(const JudgeScoreEvent& ev) {
  json j{{"type", "judge_score"},
         {"instance_id", ev.instance_id},
         {"candidate_key", ev.candidate_key},
         {"stage", std::string(to_string(ev.stage))},
         {"ok", ev.ok},
         {"attempts", ev.attempts}};
  if (ev.score) j["score"] = *ev.score;
  return j;
}

json payload_to_json(const JudgePairEvent& ev) {
  return json{{"type", "judge_pair"},
              {"instance_id", ev.instance_id},
              {"key_a", ev.key_a},
              {"key_b", ev.key_b},
              {"score_a", ev.score_a},
              {"score_b", ev.score_b},
              {"order", std::string(to_string(ev.order))},
              {"ok", ev.ok},
              {"attempts", ev.attempts}};
}

json payload_to_json(const GenCallEvent& ev) {
  return json{{"type", "gen_call"},
              {"instance_id", ev.instance_id},
              {"parent_key", ev.parent_key},
              {"produced_count", ev.produced_count},
              {"backend", ev.backend},
              {"ok", ev.ok}};
}

}  // namespace

void to_json(json& j, const TraceEvent& ev) {
  j = std::visit([](const auto& payload) { return payload_to_json(payload); }, ev.payload);
  j["seq"] = ev.seq;
}

void from_json(const json& j, TraceEvent& ev) {
  ev.seq = j.value("seq", std::uint64_t{0});
  const std::string type = j.at("type").get<std::string>();
  if (type == "judge_score") {
    JudgeScoreEvent p;
    j.at("instance_id").get_to(p.instance_id);
    j.at("candidate_key").get_to(p.candidate_key);
    if (j.contains("score")) p.score = j.at("score").get<double>();
    auto stage = parse_score_stage(j.at("stage").get<std::string>());
    if (!stage) throw DataError("unknown score stage in trace event");
    p.stage = *stage;
    p.ok = j.value("ok", true);
    p.attempts = j.value("attempts", 1);
    ev.payload = std::move(p);
  } else if (type == "judge_pair") {
    JudgePairEvent p;
    j.at("instance_id").get_to(p.instance_id);
    j.at("key_a").get_to(p.key_a);
    j.at("key_b").get_to(p.key_b);
    j.at("score_a").get_to(p.score_a);
    j.at("score_b").get_to(p.score_b);
    p.order = j.at("order").get<std::string>() == "reversed" ? PairOrder::reversed
                                                             : PairOrder::normal;
    p.ok = j.value("ok", true);
    p.attempts = j.value("attempts", 1);
    ev.payload = std::move(p);
  } else if (type == "gen_call") {
    GenCallEvent p;
    j.at("instance_id").get_to(p.instance_id);
    j.at("parent_key").get_to(p.parent_key);
    j.at("produced_count").get_to(p.produced_count);
    p.backend = j.value("backend", std::string{});
    p.ok = j.value("ok", true);
    ev.payload = std::move(p);
  } else {
    throw DataError("unknown trace event type: " + type);
  }
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const auto& ev : events) {
    out += json(ev).dump();
    out += '\n';
  }
  return out;
}

std::vector<TraceEvent> trace_from_jsonl(std::string_view text) {
  std::vector<TraceEvent> events;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    events.push_back(json::parse(line).get<TraceEvent>());
  }
  return events;
}

}  // namespace csgen
