#include "csgen/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "csgen/anneal.hpp"
#include "csgen/csv.hpp"
#include "csgen/error.hpp"
#include "csgen/serde.hpp"
#include "csgen/tokenize.hpp"
#include "csgen/tournament.hpp"

namespace csgen {

int score_bin(double score) {
  return static_cast<int>(std::clamp(std::llround(score), 0LL, 10LL));
}

namespace {

using nlohmann::json;

struct InstanceOutput {
  bool ok = false;
  std::string error;
  std::array<std::string, kPersistedRanks> rank_texts;
  std::vector<TournamentResult> ranking;
  int iterations = 0;
  bool reached_target = false;
};

InstanceOutput process_instance(const HsInstance& instance, const PipelineConfig& cfg,
                                std::span<const std::string> wordlist, Judge& judge,
                                GeneratorPool& pool) {
  InstanceOutput out;
  Vocabulary vocab = build_vocabulary(wordlist, instance.hate_speech);
  AnnealOutcome outcome = anneal(instance, cfg.anneal, judge, pool, vocab);
  std::vector<Candidate> entrants = truncate_pool(outcome.pool, cfg.tournament_limit);
  std::vector<TournamentResult> ranking =
      rank_tournament(entrants, instance, judge, cfg.tournament_limit);

  std::unordered_map<std::string, const std::string*> text_of;
  for (const Candidate& c : entrants) text_of.emplace(c.key(), &c.text);
  if (ranking.size() < static_cast<std::size_t>(kPersistedRanks)) {
    spdlog::warn("instance {} ranked only {} answers; lower rank files repeat the last one",
                 instance.id, ranking.size());
  }
  for (int r = 0; r < kPersistedRanks; ++r) {
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(r), ranking.size() - 1);
    out.rank_texts[static_cast<std::size_t>(r)] = *text_of.at(ranking[idx].candidate_key);
  }
  out.ranking = std::move(ranking);
  out.iterations = outcome.iterations_run;
  out.reached_target = outcome.reached_target;
  out.ok = true;
  return out;
}

// Instance ids become trace file names; anything path-hostile is replaced,
// with a content-hash suffix to keep mangled names collision-free.
std::string trace_file_name(const std::string& id) {
  std::string safe;
  bool mangled = false;
  for (char ch : id) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '.' || ch == '_' || ch == '-';
    safe += keep ? ch : '_';
    mangled |= !keep;
  }
  if (mangled || safe.empty()) safe += "-" + candidate_key(id).substr(0, 8);
  return safe + ".jsonl";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << content;
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<std::string> training_texts_from(const std::filesystem::path& path,
                                             Language language) {
  Dataset corpus = load_dataset(path, language, Split::train);
  std::vector<std::string> texts;
  for (const HsInstance& inst : corpus.instances) {
    if (inst.reference_cn) texts.push_back(*inst.reference_cn);
  }
  return texts;
}

}  // namespace

RunSummary run_pipeline(const Dataset& dataset, const PipelineConfig& cfg,
                        std::span<const std::string> wordlist, Judge& judge, GeneratorPool& pool,
                        RunTrace& trace, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  if (dataset.instances.empty()) throw DataError("cannot run on an empty dataset");
  validate_config(cfg.anneal);
  if (judge.trace() != &trace) {
    throw ConfigError("judge does not record into the run trace");
  }
  std::filesystem::create_directories(out_dir / "traces");

  const std::size_t n = dataset.instances.size();
  std::vector<InstanceOutput> outputs(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= n) return;
      const HsInstance& instance = dataset.instances[idx];
      try {
        outputs[idx] = process_instance(instance, cfg, wordlist, judge, pool);
      } catch (const std::exception& e) {
        outputs[idx].ok = false;
        outputs[idx].error = e.what();
        spdlog::error("instance {} failed: {}", instance.id, e.what());
      }
    }
  };
  const int worker_count =
      std::clamp(cfg.workers, 1, static_cast<int>(n));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(worker_count));
  for (int w = 0; w < worker_count; ++w) workers.emplace_back(work);
  for (std::thread& t : workers) t.join();

  RunSummary summary;
  summary.out_dir = out_dir;
  summary.total_instances = static_cast<int>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (outputs[i].ok) {
      ++summary.succeeded_instances;
    } else {
      ++summary.failed_instances;
      summary.failed_ids.push_back(dataset.instances[i].id);
    }
  }
  std::sort(summary.failed_ids.begin(), summary.failed_ids.end());
  if (static_cast<double>(summary.failed_instances) >
      cfg.failure_threshold * static_cast<double>(n)) {
    throw Error("too many instance failures: " + std::to_string(summary.failed_instances) +
                " of " + std::to_string(n) + " (threshold " +
                std::to_string(cfg.failure_threshold) + ")");
  }

  // --- Emission: single-threaded, deterministic order. ---

  for (int r = 1; r <= kPersistedRanks; ++r) {
    RankFile file;
    file.rank = r;
    file.language = dataset.language;
    for (std::size_t i = 0; i < n; ++i) {
      if (!outputs[i].ok) continue;
      file.rows.emplace_back(dataset.instances[i].id,
                             outputs[i].rank_texts[static_cast<std::size_t>(r - 1)]);
    }
    write_rank_file(file, out_dir / ("rank_" + std::to_string(r) + ".csv"));
  }

  const std::vector<TraceEvent> events = trace.snapshot();
  for (const TraceEvent& ev : events) {
    const auto* score_ev = std::get_if<JudgeScoreEvent>(&ev.payload);
    if (!score_ev || !score_ev->ok || !score_ev->score) continue;
    if (score_ev->stage == ScoreStage::append || score_ev->stage == ScoreStage::rewrite) {
      ++summary.histogram[static_cast<std::size_t>(score_bin(*score_ev->score))];
    }
  }
  summary.judge_score_calls = static_cast<long long>(trace.count_scores());
  summary.judge_pair_calls = static_cast<long long>(trace.count_pairs());
  summary.gen_calls = static_cast<long long>(trace.count_gen_calls());
  summary.score_call_bound_per_instance = judge_call_bound(cfg.anneal);

  {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"bin", "count"});
    for (std::size_t bin = 0; bin < summary.histogram.size(); ++bin) {
      rows.push_back({std::to_string(bin), std::to_string(summary.histogram[bin])});
    }
    write_text_file(out_dir / "histogram.csv", csv::write(rows));
  }

  for (const HsInstance& instance : dataset.instances) {
    write_text_file(out_dir / "traces" / trace_file_name(instance.id),
                    trace_to_jsonl(trace.events_for(instance.id)));
  }

  // Aggregates walk instances in sorted-id order so a reordered dataset
  // yields the same report bytes.
  std::vector<std::size_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return dataset.instances[a].id < dataset.instances[b].id;
  });

  double iteration_sum = 0.0;
  int reached_target = 0;
  std::vector<metrics::EvalItem> eval_items;
  for (std::size_t idx : by_id) {
    if (!outputs[idx].ok) continue;
    iteration_sum += outputs[idx].iterations;
    reached_target += outputs[idx].reached_target ? 1 : 0;
    const HsInstance& instance = dataset.instances[idx];
    if (instance.reference_cn) {
      eval_items.push_back(
          {instance.id, outputs[idx].rank_texts[0], *instance.reference_cn});
    }
  }
  if (!eval_items.empty()) {
    std::vector<std::string> training;
    if (cfg.train_corpus) {
      training = training_texts_from(*cfg.train_corpus, dataset.language);
    } else {
      spdlog::warn("no training corpus configured; novelty treats every repeated n-gram as new");
    }
    summary.metric_report = metrics::evaluate(eval_items, training);
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report;
  report["calls"] = {{"judge_score", summary.judge_score_calls},
                     {"judge_pair", summary.judge_pair_calls},
                     {"gen", summary.gen_calls}};
  report["config"] = {{"anneal", cfg.anneal},
                      {"tournament_limit", cfg.tournament_limit},
                      {"workers", cfg.workers},
                      {"generator_selection", std::string(to_string(cfg.generator_selection))},
                      {"failure_threshold", cfg.failure_threshold}};
  report["histogram"] = summary.histogram;
  report["instances"] = {{"total", summary.total_instances},
                         {"succeeded", summary.succeeded_instances},
                         {"failed", summary.failed_instances},
                         {"failed_ids", summary.failed_ids}};
  report["iterations"] = {
      {"mean", summary.succeeded_instances
                   ? iteration_sum / static_cast<double>(summary.succeeded_instances)
                   : 0.0},
      {"reached_target", reached_target}};
  report["score_call_bound_per_instance"] = summary.score_call_bound_per_instance;
  if (summary.metric_report) {
    const metrics::MetricReport& m = *summary.metric_report;
    json per_item = json::array();
    for (const metrics::ItemMetrics& item : m.per_item) {
      per_item.push_back({{"id", item.id},
                          {"bleu", item.bleu},
                          {"rouge_l", item.rouge_l},
                          {"gen_len", item.gen_len}});
    }
    report["metrics"] = {{"bleu", m.bleu},
                         {"rouge_l", m.rouge_l},
                         {"novelty", m.novelty},
                         {"gen_len", m.gen_len},
                         {"per_item", std::move(per_item)}};
  } else {
    report["metrics"] = nullptr;
  }
  report["notes"] = {
      {"bleu", "sentence-level, add-one smoothed for n>=2, mean-aggregated"},
      {"rouge_l", "LCS F-measure with beta=1"},
      {"novelty",
       std::string("non-singleton = bigram count >= 2 across generated texts; training corpus ") +
           (cfg.train_corpus ? "loaded from config" : "empty")},
      {"histogram", "scores rounded half away from zero into bins 0..10"}};
  report["timing"] = {{"wall_seconds", summary.wall_seconds}};
  write_text_file(out_dir / "report.json", report.dump(2) + "\n");

  return summary;
}

std::vector<RunScore> evaluate_runs(std::span<const RankFile> files, const Dataset& dataset,
                                    Judge& judge) {
  if (files.size() < 2) throw DataError("need at least two runs to evaluate");

  std::unordered_map<std::string, const HsInstance*> dataset_by_id;
  for (const HsInstance& instance : dataset.instances) {
    dataset_by_id.emplace(instance.id, &instance);
  }

  const std::size_t m = files.size();
  std::vector<std::unordered_map<std::string, std::string>> texts(m);
  for (std::size_t f = 0; f < m; ++f) {
    for (const auto& [id, text] : files[f].rows) {
      if (!texts[f].emplace(id, text).second) {
        throw DataError("run " + std::to_string(files[f].rank) + " repeats id '" + id + "'");
      }
    }
  }
  std::vector<std::string> ids;
  ids.reserve(files[0].rows.size());
  for (const auto& [id, text] : files[0].rows) ids.push_back(id);
  if (ids.empty()) throw DataError("run files contain no rows");
  for (std::size_t f = 1; f < m; ++f) {
    std::string missing;
    for (const std::string& id : ids) {
      if (!texts[f].count(id)) missing += missing.empty() ? id : ", " + id;
    }
    if (!missing.empty()) {
      throw DataError("run " + std::to_string(files[f].rank) + " is missing ids: " + missing);
    }
    if (texts[f].size() != ids.size()) {
      throw DataError("run " + std::to_string(files[f].rank) + " has extra ids");
    }
  }

  std::vector<double> totals(m, 0.0);
  for (const std::string& id : ids) {
    auto found = dataset_by_id.find(id);
    if (found == dataset_by_id.end()) {
      throw DataError("id '" + id + "' from the run files is not in the dataset");
    }
    const HsInstance& instance = *found->second;
    std::vector<Candidate> entrants;
    entrants.reserve(m);
    for (std::size_t f = 0; f < m; ++f) {
      entrants.push_back(make_initial_candidate(texts[f].at(id)));
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        PairOutcome out{0.0, 0.0};
        try {
          out = judge.compare(instance, entrants[i], entrants[j],
                              i < j ? PairOrder::normal : PairOrder::reversed);
        } catch (const JudgeError& e) {
          spdlog::warn("run comparison failed on id {}: {}; counting 0-0", id, e.what());
        }
        totals[i] += out.score_first;
        totals[j] += out.score_second;
      }
    }
  }

  const double divisor = 2.0 * static_cast<double>(m - 1) * static_cast<double>(ids.size());
  std::vector<RunScore> scored(m);
  for (std::size_t f = 0; f < m; ++f) {
    scored[f] = {files[f].rank, totals[f] / divisor};
  }
  std::sort(scored.begin(), scored.end(), [](const RunScore& a, const RunScore& b) {
    if (a.average_score != b.average_score) return a.average_score > b.average_score;
    return a.run_rank < b.run_rank;
  });
  return scored;
}

std::vector<int> select_submission(std::span<const RunScore> scored) {
  if (scored.empty()) throw DataError("no scored runs to select from");
  std::vector<RunScore> order(scored.begin(), scored.end());
  std::sort(order.begin(), order.end(), [](const RunScore& a, const RunScore& b) {
    if (a.average_score != b.average_score) return a.average_score > b.average_score;
    return a.run_rank < b.run_rank;
  });
  if (order.size() < 3) {
    spdlog::warn("only {} runs scored; submitting all of them", order.size());
  }
  std::vector<int> picks;
  for (std::size_t i = 0; i < order.size() && i < 3; ++i) picks.push_back(order[i].run_rank);
  return picks;
}

}  // namespace csgen
