#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "csgen/anneal.hpp"
#include "csgen/config.hpp"
#include "csgen/dataset.hpp"
#include "csgen/error.hpp"
#include "csgen/generate.hpp"
#include "csgen/judge.hpp"
#include "csgen/metrics.hpp"
#include "csgen/pipeline.hpp"
#include "csgen/serde.hpp"
#include "csgen/tokenize.hpp"
#include "csgen/tournament.hpp"

namespace {

using csgen::Language;

// Demo vocabulary used when no wordlist file is configured. Real runs should
// point the config at curated per-language lists.
const std::map<Language, std::vector<std::string>> kBuiltinWordlists = {
    {Language::english,
     {"respect", "dignity", "facts", "evidence", "community", "together", "humanity", "kindness",
      "truth", "neighbors", "empathy", "peace", "rights", "equality", "understanding"}},
    {Language::spanish,
     {"respeto", "dignidad", "hechos", "comunidad", "juntos", "humanidad", "verdad", "vecinos",
      "empatía", "paz", "derechos", "igualdad", "convivencia", "apoyo", "diálogo"}},
    {Language::italian,
     {"rispetto", "dignità", "fatti", "comunità", "insieme", "umanità", "verità", "vicini",
      "empatia", "pace", "diritti", "uguaglianza", "convivenza", "sostegno", "dialogo"}},
    {Language::basque,
     {"errespetua", "duintasuna", "egitateak", "komunitatea", "elkarrekin", "gizatasuna", "egia",
      "bizilagunak", "enpatia", "bakea", "eskubideak", "berdintasuna", "elkarbizitza", "laguntza",
      "elkarrizketa"}}};

std::vector<std::string> wordlist_for(const csgen::PipelineConfig& cfg, Language language) {
  auto it = cfg.wordlists.find(language);
  if (it != cfg.wordlists.end()) return csgen::load_wordlist(it->second);
  spdlog::warn("no wordlist configured for {}; using the built-in demo list",
               csgen::to_string(language));
  return kBuiltinWordlists.at(language);
}

Language parse_lang_or_throw(const std::string& code) {
  return csgen::language_from_code(code);
}

csgen::PipelineConfig load_config_opt(const std::string& path) {
  if (path.empty()) return {};
  return csgen::load_pipeline_config(path);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw csgen::DataError("cannot write file: " + out_path);
  out << content;
}

struct Backends {
  std::unique_ptr<csgen::Judge> judge;
  std::unique_ptr<csgen::GeneratorPool> pool;
};

Backends make_backends(const csgen::PipelineConfig& cfg, bool mock, Language language,
                       const std::vector<std::string>& wordlist, csgen::RunTrace& trace) {
  Backends b;
  if (mock) {
    b.judge = std::make_unique<csgen::VocabOverlapJudge>(wordlist, &trace);
    std::vector<std::unique_ptr<csgen::Generator>> gens;
    gens.push_back(std::make_unique<csgen::MockGenerator>());
    b.pool = std::make_unique<csgen::GeneratorPool>(std::move(gens), cfg.generator_selection,
                                                    cfg.anneal.n_per_gen, &trace);
    return b;
  }
  if (!cfg.judge.endpoints.count(language)) {
    throw csgen::ConfigError("config routes no judge endpoint for " +
                             std::string(csgen::to_string(language)));
  }
  b.judge = std::make_unique<csgen::RemoteJudge>(cfg.judge, &trace);
  if (cfg.generator_backends.empty()) {
    throw csgen::ConfigError("config lists no generator backends (or pass --mock)");
  }
  std::vector<std::unique_ptr<csgen::Generator>> gens;
  for (const csgen::RemoteGeneratorConfig& backend : cfg.generator_backends) {
    gens.push_back(std::make_unique<csgen::RemoteGenerator>(backend));
  }
  b.pool = std::make_unique<csgen::GeneratorPool>(std::move(gens), cfg.generator_selection,
                                                  cfg.anneal.n_per_gen, &trace);
  return b;
}

int run_command(const std::string& data, const std::string& lang, const std::string& config,
                const std::string& out, std::optional<std::uint64_t> seed,
                std::optional<int> workers, bool mock, const std::string& split_tag) {
  csgen::PipelineConfig cfg = load_config_opt(config);
  if (seed) cfg.anneal.rng_seed = *seed;
  if (workers) cfg.workers = *workers;
  const Language language = parse_lang_or_throw(lang);
  auto split = csgen::parse_split(split_tag);
  if (!split) throw csgen::ConfigError("unknown split '" + split_tag + "'");

  csgen::Dataset dataset = csgen::load_dataset(data, language, *split);
  std::vector<std::string> wordlist = wordlist_for(cfg, language);
  csgen::RunTrace trace;
  Backends backends = make_backends(cfg, mock, language, wordlist, trace);

  csgen::RunSummary summary = csgen::run_pipeline(dataset, cfg, wordlist, *backends.judge,
                                                  *backends.pool, trace, out);
  std::cout << "instances: " << summary.succeeded_instances << "/" << summary.total_instances
            << " succeeded\n"
            << "judge calls: " << summary.judge_score_calls << " score, "
            << summary.judge_pair_calls << " pair (bound "
            << summary.score_call_bound_per_instance << " score calls per instance)\n"
            << "outputs: " << summary.out_dir.string() << "\n";
  return 0;
}

int evaluate_command(const std::vector<std::string>& runs, const std::string& data,
                     const std::string& lang, const std::string& config, const std::string& out,
                     bool mock) {
  const Language language = parse_lang_or_throw(lang);
  csgen::Dataset dataset = csgen::load_dataset(data, language);
  std::vector<csgen::RankFile> files;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    // Prefer the rank in the file name (rank_3.csv -> 3), else the position.
    const std::string stem = std::filesystem::path(runs[i]).stem().string();
    int rank = static_cast<int>(i) + 1;
    const auto digits = stem.find_last_not_of("0123456789");
    if (digits != std::string::npos && digits + 1 < stem.size()) {
      rank = std::stoi(stem.substr(digits + 1));
    }
    files.push_back(csgen::read_rank_file(runs[i], rank, language));
  }

  csgen::PipelineConfig cfg = load_config_opt(config);
  csgen::RunTrace trace;
  std::unique_ptr<csgen::Judge> judge;
  if (mock) {
    judge = std::make_unique<csgen::LengthPreferenceJudge>(&trace);
  } else {
    judge = std::make_unique<csgen::RemoteJudge>(cfg.judge, &trace);
  }

  std::vector<csgen::RunScore> scored = csgen::evaluate_runs(files, dataset, *judge);
  std::vector<int> submission = csgen::select_submission(scored);

  nlohmann::json doc;
  doc["runs"] = nlohmann::json::array();
  for (const csgen::RunScore& rs : scored) {
    doc["runs"].push_back({{"rank", rs.run_rank}, {"average_score", rs.average_score}});
  }
  doc["submission"] = submission;
  emit(out, doc.dump(2) + "\n");
  return 0;
}

int metrics_command(const std::string& pred, const std::string& ref,
                    const std::string& train_corpus, const std::string& lang,
                    const std::string& out) {
  const Language language = parse_lang_or_throw(lang);
  csgen::RankFile predictions = csgen::read_rank_file(pred, 1, language);
  csgen::Dataset references = csgen::load_dataset(ref, language, csgen::Split::dev);

  std::map<std::string, std::string> ref_by_id;
  for (const csgen::HsInstance& instance : references.instances) {
    if (instance.reference_cn) ref_by_id[instance.id] = *instance.reference_cn;
  }
  std::vector<csgen::metrics::EvalItem> items;
  for (const auto& [id, text] : predictions.rows) {
    auto it = ref_by_id.find(id);
    if (it == ref_by_id.end()) {
      throw csgen::DataError("prediction id '" + id + "' has no reference counterspeech");
    }
    items.push_back({id, text, it->second});
  }

  std::vector<std::string> training;
  if (!train_corpus.empty()) {
    csgen::Dataset corpus = csgen::load_dataset(train_corpus, language, csgen::Split::train);
    for (const csgen::HsInstance& instance : corpus.instances) {
      if (instance.reference_cn) training.push_back(*instance.reference_cn);
    }
  }
  csgen::metrics::MetricReport report = csgen::metrics::evaluate(items, training);

  nlohmann::json doc;
  doc["bleu"] = report.bleu;
  doc["rouge_l"] = report.rouge_l;
  doc["novelty"] = report.novelty;
  doc["gen_len"] = report.gen_len;
  doc["per_item"] = nlohmann::json::array();
  for (const csgen::metrics::ItemMetrics& item : report.per_item) {
    doc["per_item"].push_back({{"id", item.id},
                               {"bleu", item.bleu},
                               {"rouge_l", item.rouge_l},
                               {"gen_len", item.gen_len}});
  }
  emit(out, doc.dump(2) + "\n");
  return 0;
}

int histogram_command(const std::string& traces_dir, const std::string& out) {
  std::array<long long, 11> bins{};
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(traces_dir)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  if (files.empty()) throw csgen::DataError("no .jsonl trace files in " + traces_dir);
  std::sort(files.begin(), files.end());
  for (const std::filesystem::path& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw csgen::DataError("cannot open trace file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    for (const csgen::TraceEvent& ev : csgen::trace_from_jsonl(buffer.str())) {
      const auto* score_ev = std::get_if<csgen::JudgeScoreEvent>(&ev.payload);
      if (!score_ev || !score_ev->ok || !score_ev->score) continue;
      if (score_ev->stage == csgen::ScoreStage::append ||
          score_ev->stage == csgen::ScoreStage::rewrite) {
        ++bins[static_cast<std::size_t>(csgen::score_bin(*score_ev->score))];
      }
    }
  }
  std::string content = "bin,count\n";
  for (std::size_t bin = 0; bin < bins.size(); ++bin) {
    content += std::to_string(bin) + "," + std::to_string(bins[bin]) + "\n";
  }
  emit(out, content);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("csgen"));
  spdlog::set_pattern("[%^%l%$] %v");

  CLI::App app{"Counterspeech generation pipeline: annealing search, tournament re-ranking, "
               "rank-file emission"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Enable debug logging");

  // --- run ---
  auto* run = app.add_subcommand("run", "Run the full pipeline over a dataset");
  std::string run_data, run_lang, run_config, run_out = "out", run_split = "test";
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_workers;
  bool run_mock = false;
  run->add_option("--data", run_data, "Dataset CSV")->required();
  run->add_option("--lang", run_lang, "Language (basque|english|italian|spanish)")->required();
  run->add_option("--config", run_config, "JSON config file");
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--seed", run_seed, "Override anneal.rng_seed");
  run->add_option("--workers", run_workers, "Override pipeline.workers");
  run->add_option("--split", run_split, "Dataset split (dev|train|test)");
  run->add_flag("--mock", run_mock, "Use deterministic mock judge/generator");

  // --- evaluate ---
  auto* evaluate = app.add_subcommand("evaluate", "Cross-score emitted rank files per instance");
  std::vector<std::string> eval_runs;
  std::string eval_data, eval_lang, eval_config, eval_out = "-";
  bool eval_mock = false;
  evaluate->add_option("--runs", eval_runs, "Rank files to compare")->required()->expected(2, 8);
  evaluate->add_option("--data", eval_data, "Dataset CSV")->required();
  evaluate->add_option("--lang", eval_lang, "Language")->required();
  evaluate->add_option("--config", eval_config, "JSON config file");
  evaluate->add_option("--out", eval_out, "Output JSON path (- for stdout)");
  evaluate->add_flag("--mock", eval_mock, "Use the length-preference mock comparator");

  // --- metrics ---
  auto* metrics_cmd = app.add_subcommand("metrics", "Score predictions against references");
  std::string met_pred, met_ref, met_train, met_lang = "english", met_out = "-";
  metrics_cmd->add_option("--pred", met_pred, "Predictions CSV (id,counterspeech)")->required();
  metrics_cmd->add_option("--ref", met_ref, "Reference dataset CSV")->required();
  metrics_cmd->add_option("--train-corpus", met_train, "Training dataset CSV for novelty");
  metrics_cmd->add_option("--lang", met_lang, "Language");
  metrics_cmd->add_option("--out", met_out, "Output JSON path (- for stdout)");

  // --- histogram ---
  auto* histogram = app.add_subcommand("histogram", "Bin search-stage scores from trace files");
  std::string hist_traces, hist_out = "-";
  histogram->add_option("--traces", hist_traces, "Directory of per-instance .jsonl traces")
      ->required();
  histogram->add_option("--out", hist_out, "Output CSV path (- for stdout)");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*run) {
      return run_command(run_data, run_lang, run_config, run_out, run_seed, run_workers, run_mock,
                         run_split);
    }
    if (*evaluate) {
      return evaluate_command(eval_runs, eval_data, eval_lang, eval_config, eval_out, eval_mock);
    }
    if (*metrics_cmd) {
      return metrics_command(met_pred, met_ref, met_train, met_lang, met_out);
    }
    if (*histogram) {
      return histogram_command(hist_traces, hist_out);
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
