#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csgen/types.hpp"

namespace csgen {

enum class Split { dev, train, test };

std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view tag);

/// Number of instances the full official split carries (dev/train/test).
int expected_split_size(Split split);

struct Dataset {
  std::vector<HsInstance> instances;
  Split split = Split::test;
  Language language = Language::english;
};

/// Loads a CSV table with header columns id, hate_speech, bk1..bk5 and an
/// optional counter_narrative column. Rejects non-UTF-8 content, missing
/// columns, empty background cells (naming the row id), and duplicate ids.
/// A size differing from the official split count only warns.
Dataset load_dataset(const std::filesystem::path& path, Language language,
                     Split split = Split::test);

/// One emitted run: every instance's rank-r counterspeech.
struct RankFile {
  int rank = 1;
  Language language = Language::english;
  std::vector<std::pair<std::string, std::string>> rows;  // (id, counterspeech)
};

/// Two-column CSV with header "id,counterspeech"; byte-stable for fixed rows.
void write_rank_file(const RankFile& file, const std::filesystem::path& path);

RankFile read_rank_file(const std::filesystem::path& path, int rank,
                        Language language = Language::english);

}  // namespace csgen
