#include "csgen/types.hpp"

#include <utility>

#include "csgen/error.hpp"

namespace csgen {

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::basque: return "basque";
    case Language::english: return "english";
    case Language::italian: return "italian";
    case Language::spanish: return "spanish";
  }
  return "english";
}

std::optional<Language> parse_language(std::string_view code) {
  if (code == "basque") return Language::basque;
  if (code == "english") return Language::english;
  if (code == "italian") return Language::italian;
  if (code == "spanish") return Language::spanish;
  return std::nullopt;
}

Language language_from_code(std::string_view code) {
  if (auto lang = parse_language(code)) return *lang;
  throw DataError("unknown language code: '" + std::string(code) +
                  "' (expected basque, english, italian, or spanish)");
}

void validate_instance(const HsInstance& instance) {
  if (instance.id.empty()) throw DataError("instance id must be non-empty");
  if (instance.hate_speech.empty())
    throw DataError("instance " + instance.id + ": hate_speech must be non-empty");
}

std::string_view to_string(Mutation m) {
  switch (m) {
    case Mutation::initial: return "initial";
    case Mutation::word_append: return "word_append";
    case Mutation::llm_rewrite: return "llm_rewrite";
  }
  return "initial";
}

std::optional<Mutation> parse_mutation(std::string_view tag) {
  if (tag == "initial") return Mutation::initial;
  if (tag == "word_append") return Mutation::word_append;
  if (tag == "llm_rewrite") return Mutation::llm_rewrite;
  return std::nullopt;
}

std::string candidate_key(std::string_view text) {
  static constexpr char hex[] = "0123456789abcdef";
  std::uint64_t h = fnv1a64(text);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

Candidate make_initial_candidate(std::string text) {
  Candidate c;
  c.text = std::move(text);
  c.mutation = Mutation::initial;
  c.iteration = 0;
  return c;
}

Candidate make_append_candidate(std::string text, const Candidate& parent) {
  Candidate c;
  c.text = std::move(text);
  c.parent_id = parent.key();
  c.mutation = Mutation::word_append;
  c.iteration = parent.iteration + 1;
  return c;
}

Candidate make_rewrite_candidate(std::string text, const Candidate& parent) {
  Candidate c;
  c.text = std::move(text);
  c.parent_id = parent.key();
  c.mutation = Mutation::llm_rewrite;
  // Rewrites happen in the same loop pass that produced their (append) seed.
  c.iteration = parent.iteration > 0 ? parent.iteration : 1;
  return c;
}

void validate_candidate(const Candidate& candidate) {
  if (candidate.score && (*candidate.score < 0.0 || *candidate.score > 10.0))
    throw DataError("candidate score out of [0,10]");
  const bool is_initial = candidate.mutation == Mutation::initial;
  if (is_initial != !candidate.parent_id.has_value() ||
      is_initial != (candidate.iteration == 0))
    throw DataError("candidate breaks the mutation/parent/iteration equivalence");
  if (candidate.iteration < 0) throw DataError("candidate iteration negative");
}

const AnnealConfig& validate_config(const AnnealConfig& cfg) {
  if (cfg.s_target < 0.0 || cfg.s_target > 10.0)
    throw ConfigError("s_target must lie in [0,10]");
  if (cfg.n_max < 1) throw ConfigError("n_max must be positive");
  if (cfg.k < 1) throw ConfigError("k must be positive");
  if (!(cfg.delta_t > 0.0)) throw ConfigError("delta_t must be positive");
  if (!(cfg.t0 > 1.0)) throw ConfigError("t0 must exceed 1");
  if (cfg.n_per_gen < 1) throw ConfigError("n_per_gen must be positive");
  if (cfg.append_width < 1) throw ConfigError("append_width must be positive");
  if (cfg.append_fanout < 1) throw ConfigError("append_fanout must be positive");
  if (cfg.k > cfg.append_fanout) throw ConfigError("k exceeds append_fanout");
  return cfg;
}

}  // namespace csgen
