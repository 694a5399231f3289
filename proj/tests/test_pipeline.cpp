#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csgen/anneal.hpp"
#include "csgen/config.hpp"
#include "csgen/error.hpp"
#include "csgen/pipeline.hpp"
#include "csgen/serde.hpp"
#include "support.hpp"

using namespace csgen;
using nlohmann::json;

namespace {

Dataset make_dataset(int n, bool with_refs) {
  Dataset ds;
  ds.language = Language::english;
  ds.split = Split::dev;
  for (int i = 1; i <= n; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "HS%03d", i);
    HsInstance instance = testsupport::make_instance(id);
    if (with_refs) {
      instance.reference_cn =
          "The evidence and community voices of case " + std::string(id) + " refute this claim.";
    }
    ds.instances.push_back(std::move(instance));
  }
  return ds;
}

PipelineConfig quick_config() {
  PipelineConfig cfg;
  cfg.anneal.s_target = 9.0;
  cfg.anneal.n_max = 3;
  cfg.anneal.k = 2;
  cfg.anneal.append_fanout = 2;
  cfg.anneal.n_per_gen = 2;
  cfg.anneal.append_width = 2;
  cfg.anneal.rng_seed = 42;
  cfg.workers = 2;
  cfg.tournament_limit = 4;
  return cfg;
}

GeneratorPool make_mock_pool(int n_per_gen, RunTrace* trace) {
  std::vector<std::unique_ptr<Generator>> backends;
  backends.push_back(std::make_unique<MockGenerator>());
  return GeneratorPool(std::move(backends), PoolSelection::round_robin, n_per_gen, trace);
}

std::string report_without_timing(const std::filesystem::path& out_dir) {
  json report = json::parse(testsupport::read_file(out_dir / "report.json"));
  report.erase("timing");
  return report.dump(2);
}

// Global sequence numbers depend on worker interleaving; per-instance event
// order does not via the worker-per-instance model.
std::string strip_seq(const std::string& jsonl) {
  std::string out;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json ev = json::parse(line);
    ev.erase("seq");
    out += ev.dump();
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("scores bin to the nearest integer, clamped into 0..10") {
  CHECK(score_bin(0.0) == 0);
  CHECK(score_bin(0.4) == 0);
  CHECK(score_bin(0.5) == 1);
  CHECK(score_bin(3.5) == 4);
  CHECK(score_bin(4.5) == 5);
  CHECK(score_bin(7.49) == 7);
  CHECK(score_bin(9.5) == 10);
  CHECK(score_bin(10.0) == 10);
  CHECK(score_bin(10.9) == 10);
  CHECK(score_bin(-0.4) == 0);
  CHECK(score_bin(-3.0) == 0);
}

TEST_CASE("a mock batch run emits every artifact") {
  testsupport::TempDir dir;
  Dataset ds = make_dataset(4, true);
  PipelineConfig cfg = quick_config();

  RunTrace trace;
  VocabOverlapJudge judge(testsupport::fixture_wordlist(), &trace);
  GeneratorPool pool = make_mock_pool(cfg.anneal.n_per_gen, &trace);

  RunSummary summary = run_pipeline(ds, cfg, testsupport::fixture_wordlist(), judge, pool,
                                    trace, dir.path() / "out");
  CHECK(summary.total_instances == 4);
  CHECK(summary.succeeded_instances == 4);
  CHECK(summary.failed_instances == 0);
  CHECK(summary.failed_ids.empty());
  CHECK(summary.wall_seconds > 0.0);
  CHECK(summary.out_dir == dir.path() / "out");

  // Four rank files, rows in dataset order.
  for (int r = 1; r <= kPersistedRanks; ++r) {
    RankFile file =
        read_rank_file(dir.path() / "out" / ("rank_" + std::to_string(r) + ".csv"), r);
    REQUIRE(file.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(file.rows[i].first == ds.instances[i].id);
      CHECK_FALSE(file.rows[i].second.empty());
    }
  }

  // Histogram file mirrors the summary counts, and the counts cover exactly
  // the search-stage scoring calls (every call succeeded here).
  std::string expected_hist = "bin,count\n";
  long long hist_total = 0;
  for (std::size_t bin = 0; bin < summary.histogram.size(); ++bin) {
    expected_hist += std::to_string(bin) + "," + std::to_string(summary.histogram[bin]) + "\n";
    hist_total += summary.histogram[bin];
  }
  CHECK(testsupport::read_file(dir.path() / "out" / "histogram.csv") == expected_hist);
  CHECK(hist_total == summary.judge_score_calls);

  // Call accounting: per-instance bound holds for the batch.
  CHECK(summary.score_call_bound_per_instance == judge_call_bound(cfg.anneal));
  CHECK(summary.judge_score_calls <= summary.score_call_bound_per_instance * 4);
  CHECK(summary.judge_score_calls > 0);
  CHECK(summary.judge_pair_calls > 0);
  CHECK(summary.gen_calls > 0);

  // One trace file per instance, holding only that instance's events.
  for (const HsInstance& instance : ds.instances) {
    const auto path = dir.path() / "out" / "traces" / (instance.id + ".jsonl");
    REQUIRE(std::filesystem::exists(path));
    auto events = trace_from_jsonl(testsupport::read_file(path));
    CHECK_FALSE(events.empty());
    for (const TraceEvent& ev : events) {
      std::visit([&](const auto& payload) { CHECK(payload.instance_id == instance.id); },
                 ev.payload);
    }
  }

  // Report carries the same numbers.
  json report = json::parse(testsupport::read_file(dir.path() / "out" / "report.json"));
  CHECK(report["instances"]["total"] == 4);
  CHECK(report["instances"]["failed"] == 0);
  CHECK(report["calls"]["judge_score"] == summary.judge_score_calls);
  CHECK(report["calls"]["judge_pair"] == summary.judge_pair_calls);
  CHECK(report["calls"]["gen"] == summary.gen_calls);
  CHECK(report["histogram"] == json(summary.histogram));
  CHECK(report["score_call_bound_per_instance"] == summary.score_call_bound_per_instance);

  // Metrics are present (the dataset has references) and per-item rows are
  // sorted by id.
  REQUIRE(summary.metric_report.has_value());
  REQUIRE_FALSE(report["metrics"].is_null());
  const json& per_item = report["metrics"]["per_item"];
  REQUIRE(per_item.size() == 4);
  for (std::size_t i = 1; i < per_item.size(); ++i) {
    CHECK(per_item[i - 1]["id"].get<std::string>() < per_item[i]["id"].get<std::string>());
  }
}

TEST_CASE("a dataset without references skips metrics") {
  testsupport::TempDir dir;
  Dataset ds = make_dataset(2, false);
  PipelineConfig cfg = quick_config();
  cfg.workers = 1;

  RunTrace trace;
  VocabOverlapJudge judge(testsupport::fixture_wordlist(), &trace);
  GeneratorPool pool = make_mock_pool(cfg.anneal.n_per_gen, &trace);
  RunSummary summary = run_pipeline(ds, cfg, testsupport::fixture_wordlist(), judge, pool,
                                    trace, dir.path() / "out");
  CHECK_FALSE(summary.metric_report.has_value());
  json report = json::parse(testsupport::read_file(dir.path() / "out" / "report.json"));
  CHECK(report["metrics"].is_null());
}

TEST_CASE("wiring mistakes and empty datasets are rejected up front") {
  testsupport::TempDir dir;
  PipelineConfig cfg = quick_config();
  RunTrace trace;
  GeneratorPool pool = make_mock_pool(cfg.anneal.n_per_gen, &trace);

  SUBCASE("judge not recording into the run trace") {
    VocabOverlapJudge unwired(testsupport::fixture_wordlist());
    Dataset ds = make_dataset(1, false);
    CHECK_THROWS_AS(run_pipeline(ds, cfg, testsupport::fixture_wordlist(), unwired, pool, trace,
                                 dir.path() / "out"),
                    ConfigError);
  }
  SUBCASE("empty dataset") {
    VocabOverlapJudge judge(testsupport::fixture_wordlist(), &trace);
    Dataset empty;
    CHECK_THROWS_AS(run_pipeline(empty, cfg, testsupport::fixture_wordlist(), judge, pool, trace,
                                 dir.path() / "out"),
                    DataError);
  }
}

TEST_CASE("failed instances are skipped and reported") {
  testsupport::TempDir dir;
  Dataset ds = make_dataset(4, false);
  PipelineConfig cfg = quick_config();
  cfg.anneal.n_max = 2;

  RunTrace trace;
  testsupport::ScriptedJudge judge(&trace);
  judge.score_fn = [](const HsInstance& instance, const Candidate&) -> double {
    if (instance.id == "HS002") throw JudgeError("scoring backend rejected HS002");
    return 5.0;
  };
  GeneratorPool pool = make_mock_pool(cfg.anneal.n_per_gen, &trace);

  SUBCASE("within the failure budget") {
    cfg.failure_threshold = 0.5;
    RunSummary summary = run_pipeline(ds, cfg, testsupport::fixture_wordlist(), judge, pool,
                                      trace, dir.path() / "out");
    CHECK(summary.succeeded_instances == 3);
    CHECK(summary.failed_instances == 1);
    REQUIRE(summary.failed_ids.size() == 1);
    CHECK(summary.failed_ids[0] == "HS002");

    RankFile file = read_rank_file(dir.path() / "out" / "rank_1.csv", 1);
    REQUIRE(file.rows.size() == 3);
    for (const auto& [id, text] : file.rows) CHECK(id != "HS002");

    json report = json::parse(testsupport::read_file(dir.path() / "out" / "report.json"));
    CHECK(report["instances"]["failed_ids"] == json::array({"HS002"}));

    // The failing instance still leaves its failed-call events behind.
    const auto trace_path = dir.path() / "out" / "traces" / "HS002.jsonl";
    REQUIRE(std::filesystem::exists(trace_path));
    auto events = trace_from_jsonl(testsupport::read_file(trace_path));
    CHECK_FALSE(events.empty());
  }
  SUBCASE("over the failure budget") {
    cfg.failure_threshold = 0.0;
    CHECK_THROWS_AS(run_pipeline(ds, cfg, testsupport::fixture_wordlist(), judge, pool, trace,
                                 dir.path() / "out"),
                    Error);
  }
}

TEST_CASE("an instance with a single ranked answer fills all four rank slots") {
  testsupport::TempDir dir;
  Dataset ds = make_dataset(1, false);
  PipelineConfig cfg = quick_config();
  cfg.anneal.n_max = 1;
  cfg.anneal.k = 1;
  cfg.anneal.append_fanout = 1;
  cfg.workers = 1;

  RunTrace trace;
  testsupport::ScriptedJudge judge(&trace);
  std::vector<std::unique_ptr<Generator>> backends;
  backends.push_back(std::make_unique<testsupport::ScriptedGenerator>(
      "silent", [](const HsInstance&, const Candidate&, int) {
        return std::vector<std::string>{};  // no rewrites: the pool stays at one append
      }));
  GeneratorPool pool(std::move(backends), PoolSelection::round_robin, cfg.anneal.n_per_gen,
                     &trace);

  RunSummary summary = run_pipeline(ds, cfg, testsupport::fixture_wordlist(), judge, pool, trace,
                                    dir.path() / "out");
  CHECK(summary.succeeded_instances == 1);

  std::vector<std::string> texts;
  for (int r = 1; r <= kPersistedRanks; ++r) {
    RankFile file =
        read_rank_file(dir.path() / "out" / ("rank_" + std::to_string(r) + ".csv"), r);
    REQUIRE(file.rows.size() == 1);
    texts.push_back(file.rows[0].second);
  }
  CHECK(texts[0] == texts[1]);
  CHECK(texts[0] == texts[2]);
  CHECK(texts[0] == texts[3]);
}

TEST_CASE("path-hostile instance ids get mangled trace file names") {
  testsupport::TempDir dir;
  Dataset ds;
  ds.language = Language::english;
  ds.instances.push_back(testsupport::make_instance("HS 01"));
  PipelineConfig cfg = quick_config();
  cfg.anneal.n_max = 1;
  cfg.workers = 1;

  RunTrace trace;
  VocabOverlapJudge judge(testsupport::fixture_wordlist(), &trace);
  GeneratorPool pool = make_mock_pool(cfg.anneal.n_per_gen, &trace);
  run_pipeline(ds, cfg, testsupport::fixture_wordlist(), judge, pool, trace, dir.path() / "out");

  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "out" / "traces")) {
    ++files;
    const std::string name = entry.path().filename().string();
    CHECK(name.substr(0, 6) == "HS_01-");
    CHECK(name.substr(name.size() - 6) == ".jsonl");
  }
  CHECK(files == 1);
}

TEST_CASE("replays are byte-identical") {
  testsupport::TempDir dir;
  Dataset ds = make_dataset(4, true);
  PipelineConfig cfg = quick_config();
  cfg.workers = 4;

  auto run_once = [&](const std::filesystem::path& out) {
    RunTrace trace;
    VocabOverlapJudge judge(testsupport::fixture_wordlist(), &trace);
    GeneratorPool pool = make_mock_pool(cfg.anneal.n_per_gen, &trace);
    run_pipeline(ds, cfg, testsupport::fixture_wordlist(), judge, pool, trace, out);
  };
  run_once(dir.path() / "a");
  run_once(dir.path() / "b");

  for (int r = 1; r <= kPersistedRanks; ++r) {
    const std::string name = "rank_" + std::to_string(r) + ".csv";
    CHECK(testsupport::read_file(dir.path() / "a" / name) ==
          testsupport::read_file(dir.path() / "b" / name));
  }
  CHECK(testsupport::read_file(dir.path() / "a" / "histogram.csv") ==
        testsupport::read_file(dir.path() / "b" / "histogram.csv"));
  CHECK(report_without_timing(dir.path() / "a") == report_without_timing(dir.path() / "b"));
  for (const HsInstance& instance : ds.instances) {
    const std::string name = instance.id + ".jsonl";
    CHECK(strip_seq(testsupport::read_file(dir.path() / "a" / "traces" / name)) ==
          strip_seq(testsupport::read_file(dir.path() / "b" / "traces" / name)));
  }
}

TEST_CASE("reordering the dataset reorders rows without changing results") {
  testsupport::TempDir dir;
  Dataset ds = make_dataset(4, true);
  PipelineConfig cfg = quick_config();

  auto run_once = [&](const Dataset& data, const std::filesystem::path& out) {
    RunTrace trace;
    VocabOverlapJudge judge(testsupport::fixture_wordlist(), &trace);
    GeneratorPool pool = make_mock_pool(cfg.anneal.n_per_gen, &trace);
    run_pipeline(data, cfg, testsupport::fixture_wordlist(), judge, pool, trace, out);
  };
  run_once(ds, dir.path() / "fwd");

  Dataset reversed = ds;
  std::reverse(reversed.instances.begin(), reversed.instances.end());
  run_once(reversed, dir.path() / "rev");

  // Same per-id answers, rows following the new dataset order.
  for (int r = 1; r <= kPersistedRanks; ++r) {
    const std::string name = "rank_" + std::to_string(r) + ".csv";
    RankFile fwd = read_rank_file(dir.path() / "fwd" / name, r);
    RankFile rev = read_rank_file(dir.path() / "rev" / name, r);
    REQUIRE(fwd.rows.size() == rev.rows.size());
    std::map<std::string, std::string> by_id(fwd.rows.begin(), fwd.rows.end());
    for (std::size_t i = 0; i < rev.rows.size(); ++i) {
      CHECK(rev.rows[i].first == reversed.instances[i].id);
      CHECK(rev.rows[i].second == by_id.at(rev.rows[i].first));
    }
  }

  // Aggregates do not depend on dataset order at all.
  CHECK(testsupport::read_file(dir.path() / "fwd" / "histogram.csv") ==
        testsupport::read_file(dir.path() / "rev" / "histogram.csv"));
  CHECK(report_without_timing(dir.path() / "fwd") == report_without_timing(dir.path() / "rev"));

  // Per-instance traces match once the global sequence numbers are stripped.
  for (const HsInstance& instance : ds.instances) {
    const std::string name = instance.id + ".jsonl";
    CHECK(strip_seq(testsupport::read_file(dir.path() / "fwd" / "traces" / name)) ==
          strip_seq(testsupport::read_file(dir.path() / "rev" / "traces" / name)));
  }
}

TEST_CASE("run evaluation averages shared pairwise calls per run") {
  Dataset ds = make_dataset(2, false);
  std::vector<RankFile> files(2);
  files[0].rank = 1;
  files[0].rows = {{"HS001", "a deliberately much longer counterspeech text"},
                   {"HS002", "another comfortably long reply for this case"}};
  files[1].rank = 2;
  files[1].rows = {{"HS001", "short reply"}, {"HS002", "tiny text"}};

  LengthPreferenceJudge judge;
  auto scored = evaluate_runs(files, ds, judge);
  REQUIRE(scored.size() == 2);
  // Longer texts win 8-6 in both presentation orders on both instances:
  // totals 32 vs 24, divided by 2 x (runs-1) x instances = 4.
  CHECK(scored[0].run_rank == 1);
  CHECK(scored[0].average_score == doctest::Approx(8.0));
  CHECK(scored[1].run_rank == 2);
  CHECK(scored[1].average_score == doctest::Approx(6.0));
}

TEST_CASE("run evaluation ties break toward the lower run rank") {
  Dataset ds = make_dataset(1, false);
  std::vector<RankFile> files(3);
  for (int f = 0; f < 3; ++f) {
    files[static_cast<std::size_t>(f)].rank = 3 - f;  // ranks 3, 2, 1
    files[static_cast<std::size_t>(f)].rows = {{"HS001", "same length"}};
  }
  testsupport::ScriptedJudge judge;  // constant 7-7
  auto scored = evaluate_runs(files, ds, judge);
  REQUIRE(scored.size() == 3);
  CHECK(scored[0].run_rank == 1);
  CHECK(scored[1].run_rank == 2);
  CHECK(scored[2].run_rank == 3);
  for (const RunScore& rs : scored) CHECK(rs.average_score == doctest::Approx(7.0));
}

TEST_CASE("run evaluation plays every ordered pair once per instance") {
  Dataset ds = make_dataset(2, false);
  std::vector<RankFile> files(3);
  for (int f = 0; f < 3; ++f) {
    files[static_cast<std::size_t>(f)].rank = f + 1;
    files[static_cast<std::size_t>(f)].rows = {
        {"HS001", "text one variant " + std::to_string(f)},
        {"HS002", "text two variant " + std::to_string(f)}};
  }
  RunTrace trace;
  testsupport::ScriptedJudge judge(&trace);
  evaluate_runs(files, ds, judge);
  CHECK(trace.count_pairs() == 12);  // 2 instances x 3 runs x 2 opponents
}

TEST_CASE("run evaluation rejects inconsistent inputs") {
  Dataset ds = make_dataset(2, false);

  SUBCASE("fewer than two runs") {
    std::vector<RankFile> files(1);
    files[0].rank = 1;
    files[0].rows = {{"HS001", "text"}};
    testsupport::ScriptedJudge judge;
    CHECK_THROWS_AS(evaluate_runs(files, ds, judge), DataError);
  }
  SUBCASE("duplicate id inside one run") {
    std::vector<RankFile> files(2);
    files[0].rank = 1;
    files[0].rows = {{"HS001", "text"}, {"HS001", "again"}};
    files[1].rank = 2;
    files[1].rows = {{"HS001", "other"}};
    testsupport::ScriptedJudge judge;
    CHECK_THROWS_AS(evaluate_runs(files, ds, judge), DataError);
  }
  SUBCASE("second run missing an id") {
    std::vector<RankFile> files(2);
    files[0].rank = 1;
    files[0].rows = {{"HS001", "text"}, {"HS002", "more"}};
    files[1].rank = 2;
    files[1].rows = {{"HS001", "other"}};
    testsupport::ScriptedJudge judge;
    CHECK_THROWS_AS(evaluate_runs(files, ds, judge), DataError);
  }
  SUBCASE("second run with an extra id") {
    std::vector<RankFile> files(2);
    files[0].rank = 1;
    files[0].rows = {{"HS001", "text"}};
    files[1].rank = 2;
    files[1].rows = {{"HS001", "other"}, {"HS002", "extra"}};
    testsupport::ScriptedJudge judge;
    CHECK_THROWS_AS(evaluate_runs(files, ds, judge), DataError);
  }
  SUBCASE("id absent from the dataset") {
    std::vector<RankFile> files(2);
    files[0].rank = 1;
    files[0].rows = {{"HS999", "text"}};
    files[1].rank = 2;
    files[1].rows = {{"HS999", "other"}};
    testsupport::ScriptedJudge judge;
    CHECK_THROWS_AS(evaluate_runs(files, ds, judge), DataError);
  }
  SUBCASE("no rows at all") {
    std::vector<RankFile> files(2);
    files[0].rank = 1;
    files[1].rank = 2;
    testsupport::ScriptedJudge judge;
    CHECK_THROWS_AS(evaluate_runs(files, ds, judge), DataError);
  }
}

TEST_CASE("submission selection keeps the three best runs in score order") {
  std::vector<RunScore> scored = {{2, 5.6}, {4, 9.1}, {1, 9.1}, {3, 8.0}};
  CHECK(select_submission(scored) == std::vector<int>{1, 4, 3});
}

TEST_CASE("submission selection returns short fields whole") {
  std::vector<RunScore> two = {{2, 6.0}, {1, 5.0}};
  CHECK(select_submission(two) == std::vector<int>{2, 1});
  std::vector<RunScore> none;
  CHECK_THROWS_AS(select_submission(none), DataError);
}
