#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csgen/generate.hpp"
#include "csgen/judge.hpp"
#include "csgen/tournament.hpp"
#include "csgen/types.hpp"

namespace csgen {

/// Everything a batch run needs beyond the dataset itself.
struct PipelineConfig {
  AnnealConfig anneal;
  RemoteJudgeConfig judge;
  std::vector<RemoteGeneratorConfig> generator_backends;
  PoolSelection generator_selection = PoolSelection::round_robin;
  std::map<Language, std::filesystem::path> wordlists;
  /// Dataset whose counter_narrative column is the novelty training corpus;
  /// without it, report novelty compares against an empty corpus.
  std::optional<std::filesystem::path> train_corpus;
  int workers = 4;
  double failure_threshold = 0.1;  // abort when more than this share of instances fail
  int tournament_limit = kDefaultTournamentLimit;
};

/// Parses the JSON config document. Unknown keys are rejected so typos
/// surface immediately; every field falls back to its default when absent.
PipelineConfig parse_pipeline_config(const std::string& json_text);

PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace csgen
