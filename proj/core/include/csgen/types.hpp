#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "csgen/rng.hpp"

namespace csgen {

// ---------------------------------------------------------------------------
// Language

enum class Language { basque, english, italian, spanish };

inline constexpr std::array<Language, 4> kAllLanguages = {
    Language::basque, Language::english, Language::italian, Language::spanish};

std::string_view to_string(Language lang);

/// Parses a language code. Only "basque", "english", "italian", "spanish"
/// are accepted; anything else yields nullopt.
std::optional<Language> parse_language(std::string_view code);

/// Like parse_language but throws DataError on unknown codes.
Language language_from_code(std::string_view code);

// ---------------------------------------------------------------------------
// HsInstance

/// One hate-speech record: the text to respond to plus its five background
/// knowledge sentences and an optional reference counter-narrative.
struct HsInstance {
  std::string id;
  Language language = Language::english;
  std::string hate_speech;
  std::array<std::string, 5> background;
  std::optional<std::string> reference_cn;
};

/// Throws DataError if the instance breaks an invariant (empty id, empty
/// hate speech). The five-sentence background count is enforced by the type.
void validate_instance(const HsInstance& instance);

// ---------------------------------------------------------------------------
// Candidate

enum class Mutation { initial, word_append, llm_rewrite };

std::string_view to_string(Mutation m);
std::optional<Mutation> parse_mutation(std::string_view tag);

/// Key for a candidate text. Content-hash based, so identical texts map to
/// the same key and dedupe inside one instance's pool.
std::string candidate_key(std::string_view text);

/// A counterspeech text with its judge score, lineage, and iteration stamp.
///
/// Invariant: mutation == initial  <=>  parent_id absent  <=>  iteration == 0.
/// Use the factory functions below; they cannot produce a broken triple.
struct Candidate {
  std::string text;
  std::optional<double> score;      // E(c) in [0,10] once judged
  std::optional<std::string> parent_id;
  Mutation mutation = Mutation::initial;
  int iteration = 0;

  std::string key() const { return candidate_key(text); }
};

Candidate make_initial_candidate(std::string text);
Candidate make_append_candidate(std::string text, const Candidate& parent);
Candidate make_rewrite_candidate(std::string text, const Candidate& parent);

/// Throws DataError if the candidate violates the score range or the
/// mutation/parent/iteration triple-equivalence.
void validate_candidate(const Candidate& candidate);

// ---------------------------------------------------------------------------
// AnnealConfig

/// Search hyperparameters. Defaults mirror the tuned operating point
/// (8 iterations, 6 candidates per loop, target score 9).
struct AnnealConfig {
  double s_target = 9.0;    // stop once any candidate scores at least this
  int n_max = 8;            // max loop iterations
  int k = 6;                // candidates selected / kept per loop
  double delta_t = 0.5;     // temperature increment per iteration
  double t0 = 1.5;          // initial temperature, must exceed 1
  int n_per_gen = 2;        // rewrites requested per generator call
  int append_width = 3;     // words appended per mutation
  int append_fanout = 6;    // append mutations built per parent
  std::uint64_t rng_seed = 0;
};

/// Returns cfg unchanged iff every invariant holds; otherwise throws
/// ConfigError naming the first violated invariant.
const AnnealConfig& validate_config(const AnnealConfig& cfg);

// ---------------------------------------------------------------------------
// TournamentResult

/// Per-candidate outcome of the round-robin re-ranking.
struct TournamentResult {
  std::string candidate_key;
  double total_score = 0.0;   // sum of scores banked over all comparisons
  int match_count = 0;        // judged presentations the entrant took part in
  double average_score = 0.0; // total_score / (2 x opponent_count)
  int rank = 0;               // 1-based, unique within one tournament
};

}  // namespace csgen
