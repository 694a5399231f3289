#include <memory>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "csgen/anneal.hpp"
#include "csgen/generate.hpp"
#include "csgen/judge.hpp"
#include "csgen/metrics.hpp"
#include "csgen/rng.hpp"
#include "csgen/tokenize.hpp"
#include "csgen/trace.hpp"
#include "csgen/types.hpp"

namespace {

std::vector<double> make_scores(std::size_t n) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  std::vector<double> scores(n);
  for (double& s : scores) s = dist(gen);
  return scores;
}

std::vector<csgen::Candidate> make_candidates(std::size_t n) {
  std::vector<csgen::Candidate> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(csgen::make_initial_candidate("candidate text number " + std::to_string(i)));
  }
  return out;
}

std::string lorem_paragraph() {
  std::string base =
      "Communities thrive when neighbors answer hostility with facts, patience, and a firm "
      "commitment to the dignity of every person involved. ";
  std::string text;
  for (int i = 0; i < 8; ++i) text += base;
  return text;
}

csgen::HsInstance bench_instance() {
  csgen::HsInstance instance;
  instance.id = "BENCH01";
  instance.language = csgen::Language::english;
  instance.hate_speech = "those people ruin every neighborhood they move into";
  instance.background = {
      "Migration statistics show no link between newcomers and neighborhood decline.",
      "Local business registrations rise in districts with mixed communities.",
      "Crime rates track poverty and policing, not the origin of residents.",
      "Schools in diverse districts report stable or improving outcomes.",
      "Long-term studies find integration benefits both new and old residents."};
  return instance;
}

void BM_ComputeProbabilities(benchmark::State& state) {
  auto scores = make_scores(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(csgen::compute_probabilities(scores, 2.5));
  }
}
BENCHMARK(BM_ComputeProbabilities)->Arg(8)->Arg(64)->Arg(512);

void BM_SelectCandidates(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto candidates = make_candidates(n);
  auto probs = csgen::compute_probabilities(make_scores(n), 2.0);
  csgen::Rng rng(99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(csgen::select_candidates(candidates, probs, n / 2, rng));
  }
}
BENCHMARK(BM_SelectCandidates)->Arg(16)->Arg(128);

void BM_Tokenize(benchmark::State& state) {
  const std::string text = lorem_paragraph();
  for (auto _ : state) {
    benchmark::DoNotOptimize(csgen::tokenize(text));
  }
}
BENCHMARK(BM_Tokenize);

void BM_RougeL(benchmark::State& state) {
  const auto a = csgen::tokenize(lorem_paragraph());
  auto b = a;
  std::reverse(b.begin() + 10, b.end() - 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(csgen::metrics::rouge_l(a, b));
  }
}
BENCHMARK(BM_RougeL);

void BM_Bleu(benchmark::State& state) {
  const auto cand = csgen::tokenize(lorem_paragraph());
  std::vector<csgen::metrics::Tokens> refs = {cand};
  refs[0].resize(refs[0].size() - 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(csgen::metrics::bleu(cand, refs));
  }
}
BENCHMARK(BM_Bleu);

void BM_AnnealMock(benchmark::State& state) {
  csgen::HsInstance instance = bench_instance();
  std::vector<std::string> wordlist = {"facts",     "dignity",  "community", "statistics",
                                       "neighbors", "patience", "evidence",  "respect"};
  csgen::AnnealConfig cfg;
  cfg.n_max = 3;
  cfg.s_target = 10.5;  // unreachable: exercises the full loop
  auto vocab = csgen::build_vocabulary(wordlist, instance.hate_speech);
  for (auto _ : state) {
    csgen::RunTrace trace;
    csgen::VocabOverlapJudge judge(wordlist, &trace);
    std::vector<std::unique_ptr<csgen::Generator>> gens;
    gens.push_back(std::make_unique<csgen::MockGenerator>());
    csgen::GeneratorPool pool(std::move(gens), csgen::PoolSelection::round_robin, cfg.n_per_gen,
                              &trace);
    benchmark::DoNotOptimize(csgen::anneal(instance, cfg, judge, pool, vocab));
  }
}
BENCHMARK(BM_AnnealMock)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
