#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csgen/rng.hpp"
#include "csgen/types.hpp"

namespace csgen {

/// Splits on Unicode whitespace, strips leading/trailing punctuation from
/// each token, lowercases, and drops empty results. Internal apostrophes and
/// hyphens survive ("e-mail", "don't"). Lowercasing covers ASCII, Latin-1,
/// and Latin Extended-A; other scripts pass through unchanged.
std::vector<std::string> tokenize(std::string_view text);

/// Sampling vocabulary for the word-append mutation: language word list
/// entries first, then tokens of the hate speech, deduplicated in that order.
struct Vocabulary {
  std::vector<std::string> words;
  int from_wordlist = 0;  // first-source attribution
  int from_hs = 0;
};

/// Throws DataError("empty vocabulary") when both sources contribute nothing.
Vocabulary build_vocabulary(std::span<const std::string> wordlist, std::string_view hate_speech);

/// Appends `width` words sampled uniformly with replacement from the
/// vocabulary to the parent text (single spaces throughout). The result is
/// unscored, mutation = word_append.
Candidate append_mutation(const Candidate& parent, const Vocabulary& vocab, int width, Rng& rng);

/// One token per line, UTF-8; '#'-prefixed comment lines and blank lines are
/// ignored. Throws DataError on a missing file or invalid UTF-8.
std::vector<std::string> load_wordlist(const std::filesystem::path& path);

/// True iff `text` is well-formed UTF-8.
bool utf8_valid(std::string_view text);

}  // namespace csgen
