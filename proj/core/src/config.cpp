#include "csgen/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "csgen/error.hpp"
#include "csgen/serde.hpp"

namespace csgen {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                  const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

net::HttpOptions parse_http(const json& obj, const std::string& where) {
  require_keys(obj,
               {"timeout_ms", "retry_attempts", "retry_backoff_ms", "max_in_flight",
                "requests_per_second", "api_key_env"},
               where);
  net::HttpOptions http;
  http.timeout_ms = obj.value("timeout_ms", http.timeout_ms);
  http.retry.attempts = obj.value("retry_attempts", http.retry.attempts);
  http.retry.backoff_base =
      std::chrono::milliseconds(obj.value("retry_backoff_ms", http.retry.backoff_base.count()));
  http.max_in_flight = obj.value("max_in_flight", http.max_in_flight);
  http.requests_per_second = obj.value("requests_per_second", http.requests_per_second);
  http.api_key_env = obj.value("api_key_env", http.api_key_env);
  return http;
}

std::map<Language, std::string> parse_language_map(const json& obj, const std::string& where) {
  std::map<Language, std::string> out;
  for (const auto& [key, value] : obj.items()) {
    auto language = parse_language(key);
    if (!language) throw ConfigError("unknown language '" + key + "' in " + where);
    if (!value.is_string()) throw ConfigError(where + "." + key + " must be a string");
    out[*language] = value.get<std::string>();
  }
  return out;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  require_keys(doc, {"anneal", "judge", "generator", "wordlists", "pipeline"}, "config");

  PipelineConfig cfg;
  if (doc.contains("anneal")) {
    const json& a = doc["anneal"];
    require_keys(a,
                 {"s_target", "n_max", "k", "delta_t", "t0", "n_per_gen", "append_width",
                  "append_fanout", "rng_seed"},
                 "anneal");
    cfg.anneal = a.get<AnnealConfig>();
  }

  if (doc.contains("judge")) {
    const json& jj = doc["judge"];
    require_keys(jj, {"endpoints", "score_template", "pair_template", "http"}, "judge");
    if (jj.contains("endpoints")) {
      cfg.judge.endpoints = parse_language_map(jj["endpoints"], "judge.endpoints");
    }
    cfg.judge.score_template = jj.value("score_template", cfg.judge.score_template);
    cfg.judge.pair_template = jj.value("pair_template", cfg.judge.pair_template);
    if (jj.contains("http")) cfg.judge.http = parse_http(jj["http"], "judge.http");
  }

  if (doc.contains("generator")) {
    const json& g = doc["generator"];
    require_keys(g, {"backends", "selection", "http"}, "generator");
    net::HttpOptions shared_http;
    if (g.contains("http")) shared_http = parse_http(g["http"], "generator.http");
    if (g.contains("selection")) {
      auto selection = parse_pool_selection(g["selection"].get<std::string>());
      if (!selection) {
        throw ConfigError("generator.selection must be round_robin or seeded_random");
      }
      cfg.generator_selection = *selection;
    }
    if (g.contains("backends")) {
      if (!g["backends"].is_array()) throw ConfigError("generator.backends must be an array");
      for (const json& b : g["backends"]) {
        require_keys(b,
                     {"url", "model_tag", "prompt_template", "max_tokens", "prompt_field",
                      "n_field", "max_tokens_field", "reply_texts_pointer", "reply_text_member"},
                     "generator.backends[]");
        RemoteGeneratorConfig backend;
        backend.http = shared_http;
        backend.url = b.value("url", backend.url);
        backend.model_tag = b.value("model_tag", backend.model_tag);
        backend.prompt_template = b.value("prompt_template", backend.prompt_template);
        backend.max_tokens = b.value("max_tokens", backend.max_tokens);
        backend.prompt_field = b.value("prompt_field", backend.prompt_field);
        backend.n_field = b.value("n_field", backend.n_field);
        backend.max_tokens_field = b.value("max_tokens_field", backend.max_tokens_field);
        backend.reply_texts_pointer = b.value("reply_texts_pointer", backend.reply_texts_pointer);
        backend.reply_text_member = b.value("reply_text_member", backend.reply_text_member);
        if (backend.url.empty()) throw ConfigError("generator backend needs a url");
        cfg.generator_backends.push_back(std::move(backend));
      }
    }
  }

  if (doc.contains("wordlists")) {
    for (const auto& [language, path] :
         parse_language_map(doc["wordlists"], "wordlists")) {
      cfg.wordlists[language] = path;
    }
  }

  if (doc.contains("pipeline")) {
    const json& p = doc["pipeline"];
    require_keys(p, {"workers", "failure_threshold", "tournament_limit", "train_corpus"},
                 "pipeline");
    cfg.workers = p.value("workers", cfg.workers);
    cfg.failure_threshold = p.value("failure_threshold", cfg.failure_threshold);
    cfg.tournament_limit = p.value("tournament_limit", cfg.tournament_limit);
    if (p.contains("train_corpus")) {
      cfg.train_corpus = std::filesystem::path(p["train_corpus"].get<std::string>());
    }
    if (cfg.workers < 1) throw ConfigError("pipeline.workers must be at least 1");
    if (cfg.failure_threshold < 0.0 || cfg.failure_threshold > 1.0) {
      throw ConfigError("pipeline.failure_threshold must lie in [0,1]");
    }
    if (cfg.tournament_limit < 1) throw ConfigError("pipeline.tournament_limit must be positive");
  }

  validate_config(cfg.anneal);
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_pipeline_config(std::move(buffer).str());
}

}  // namespace csgen
