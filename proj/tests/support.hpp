#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "csgen/csv.hpp"
#include "csgen/generate.hpp"
#include "csgen/judge.hpp"
#include "csgen/types.hpp"

namespace testsupport {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    std::ostringstream name;
    name << "csgen-test-" << std::hex << rd() << rd();
    path_ = std::filesystem::temp_directory_path() / name.str();
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline csgen::HsInstance make_instance(const std::string& id,
                                       csgen::Language language = csgen::Language::english) {
  csgen::HsInstance instance;
  instance.id = id;
  instance.language = language;
  instance.hate_speech = "sample hateful claim targeting a group, case " + id;
  instance.background = {"Official statistics disprove the claim in case " + id + ".",
                         "Community reports from " + id + " tell a different story.",
                         "Historical context shows the stereotype is baseless.",
                         "Experts agree the generalization does not hold.",
                         "Local data for " + id + " contradicts the accusation."};
  return instance;
}

/// Judge test double driven by plain callbacks (defaults: score 5, pair 7-7).
class ScriptedJudge : public csgen::Judge {
 public:
  using ScoreFn = std::function<double(const csgen::HsInstance&, const csgen::Candidate&)>;
  using PairFn = std::function<csgen::PairOutcome(const csgen::HsInstance&,
                                                  const csgen::Candidate&,
                                                  const csgen::Candidate&)>;

  explicit ScriptedJudge(csgen::RunTrace* trace = nullptr) : Judge(trace) {}

  std::string name() const override { return "scripted"; }

  ScoreFn score_fn = [](const csgen::HsInstance&, const csgen::Candidate&) { return 5.0; };
  PairFn pair_fn = [](const csgen::HsInstance&, const csgen::Candidate&,
                      const csgen::Candidate&) { return csgen::PairOutcome{7.0, 7.0}; };

 protected:
  ScoreResult do_score(const csgen::HsInstance& instance,
                       const csgen::Candidate& candidate) override {
    return {score_fn(instance, candidate), 1};
  }
  PairResult do_compare(const csgen::HsInstance& instance, const csgen::Candidate& first,
                        const csgen::Candidate& second) override {
    return {pair_fn(instance, first, second), 1};
  }
};

/// Generator test double driven by a callback.
class ScriptedGenerator : public csgen::Generator {
 public:
  using ProduceFn = std::function<std::vector<std::string>(const csgen::HsInstance&,
                                                           const csgen::Candidate&, int)>;

  explicit ScriptedGenerator(std::string tag, ProduceFn fn)
      : tag_(std::move(tag)), fn_(std::move(fn)) {}

  std::string name() const override { return tag_; }

  std::vector<std::string> produce(const csgen::HsInstance& instance,
                                   const csgen::Candidate& seed, int n) override {
    return fn_(instance, seed, n);
  }

 private:
  std::string tag_;
  ProduceFn fn_;
};

/// Deterministic dataset CSV with ids HS001..HS<n>; counter_narrative column
/// included when with_refs.
inline std::string fixture_dataset_csv(int n, bool with_refs = false) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"id", "hate_speech", "bk1", "bk2", "bk3", "bk4", "bk5"};
  if (with_refs) header.push_back("counter_narrative");
  rows.push_back(header);
  for (int i = 1; i <= n; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "HS%03d", i);
    csgen::HsInstance instance = make_instance(id);
    std::vector<std::string> row = {instance.id, instance.hate_speech};
    row.insert(row.end(), instance.background.begin(), instance.background.end());
    if (with_refs) {
      row.push_back("The evidence and community voices of case " + std::string(id) +
                    " refute this claim.");
    }
    rows.push_back(std::move(row));
  }
  return csgen::csv::write(rows);
}

inline std::vector<std::string> fixture_wordlist() {
  return {"facts", "dignity", "respect", "community", "evidence", "together", "statistics"};
}

}  // namespace testsupport
