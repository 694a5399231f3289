#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csgen/config.hpp"
#include "csgen/dataset.hpp"
#include "csgen/generate.hpp"
#include "csgen/judge.hpp"
#include "csgen/metrics.hpp"
#include "csgen/trace.hpp"

namespace csgen {

inline constexpr int kPersistedRanks = 4;

/// Histogram bin for a score: nearest integer (halves away from zero),
/// clamped into 0..10.
int score_bin(double score);

struct RunSummary {
  int total_instances = 0;
  int succeeded_instances = 0;
  int failed_instances = 0;
  std::vector<std::string> failed_ids;  // sorted
  long long judge_score_calls = 0;
  long long judge_pair_calls = 0;
  long long gen_calls = 0;
  long long score_call_bound_per_instance = 0;
  std::array<long long, 11> histogram{};  // search-stage scores binned 0..10
  std::optional<metrics::MetricReport> metric_report;
  double wall_seconds = 0.0;
  std::filesystem::path out_dir;
};

/// Full batch run: per instance (bounded worker pool) — anneal, keep the top
/// entrants, re-rank by round-robin tournament — then a single writer emits
/// rank_1.csv..rank_4.csv (rows in dataset order, instances with fewer ranked
/// answers repeat their last one), report.json, histogram.csv, and one trace
/// JSONL per instance under traces/.
///
/// judge and pool must both record into `trace`. Failed instances are
/// skipped and listed in the report; the run throws once more than
/// cfg.failure_threshold of the instances fail. Metrics are computed against
/// reference counterspeeches when the dataset carries them.
RunSummary run_pipeline(const Dataset& dataset, const PipelineConfig& cfg,
                        std::span<const std::string> wordlist, Judge& judge, GeneratorPool& pool,
                        RunTrace& trace, const std::filesystem::path& out_dir);

struct RunScore {
  int run_rank = 0;  // which rank file this run came from
  double average_score = 0.0;
};

/// Cross-run re-scoring: per instance, every ordered pair of run answers is
/// compared once (the call pays out to both slots), and each run's banked
/// scores are averaged over 2 x (runs-1) x instances. Returns runs sorted by
/// average descending, ties to the lower run rank.
std::vector<RunScore> evaluate_runs(std::span<const RankFile> files, const Dataset& dataset,
                                    Judge& judge);

/// The three highest-scoring run ranks (which need not be 1-2-3). Fewer than
/// three runs are returned whole, with a warning.
std::vector<int> select_submission(std::span<const RunScore> scored);

}  // namespace csgen
