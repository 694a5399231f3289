#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "csgen/error.hpp"
#include "csgen/net.hpp"
#include "csgen/trace.hpp"
#include "csgen/types.hpp"

namespace csgen {

class JudgeError : public Error {
 public:
  using Error::Error;
};

/// Transport-level failure after all retries were spent.
class JudgeTransportError : public JudgeError {
 public:
  JudgeTransportError(const std::string& what, int attempts)
      : JudgeError(what), attempts(attempts) {}
  int attempts;
};

/// The backend replied, but not with parseable scores. payload carries the
/// raw reply body for the log.
class JudgeParseError : public JudgeError {
 public:
  JudgeParseError(const std::string& what, std::string payload, int attempts = 1)
      : JudgeError(what), payload(std::move(payload)), attempts(attempts) {}
  std::string payload;
  int attempts;
};

/// Scores for a pairwise comparison, in presentation order.
struct PairOutcome {
  double score_first = 0.0;
  double score_second = 0.0;
};

/// Scoring oracle. Concrete backends implement do_score/do_compare; the
/// public entry points validate inputs, enforce the [0,10] range, and record
/// one trace event per invocation (including failed ones), so the trace is an
/// exact call log.
class Judge {
 public:
  explicit Judge(RunTrace* trace = nullptr) : trace_(trace) {}
  virtual ~Judge() = default;

  virtual std::string name() const = 0;

  /// Absolute score E(candidate) in [0,10].
  double score(const HsInstance& instance, const Candidate& candidate, ScoreStage stage);

  /// Scores (first, second) as presented. `order` is bookkeeping for the
  /// caller's debiasing scheme; candidates are already in presentation order.
  PairOutcome compare(const HsInstance& instance, const Candidate& first,
                      const Candidate& second, PairOrder order);

  RunTrace* trace() const { return trace_; }

 protected:
  struct ScoreResult {
    double value = 0.0;
    int attempts = 1;
  };
  struct PairResult {
    PairOutcome outcome;
    int attempts = 1;
  };

  virtual ScoreResult do_score(const HsInstance& instance, const Candidate& candidate) = 0;
  virtual PairResult do_compare(const HsInstance& instance, const Candidate& first,
                                const Candidate& second) = 0;

 private:
  RunTrace* trace_;
};

/// Test fixture, not a quality proxy: score = 7 + min(3, distinct candidate
/// tokens found in the language's wordlist). Pure function of its inputs.
class VocabOverlapJudge : public Judge {
 public:
  VocabOverlapJudge(std::vector<std::string> wordlist, RunTrace* trace = nullptr);
  VocabOverlapJudge(std::map<Language, std::vector<std::string>> wordlists,
                    RunTrace* trace = nullptr);

  std::string name() const override { return "mock-vocab-overlap"; }

 protected:
  ScoreResult do_score(const HsInstance& instance, const Candidate& candidate) override;
  PairResult do_compare(const HsInstance& instance, const Candidate& first,
                        const Candidate& second) override;

 private:
  double score_text(Language language, const std::string& text) const;

  std::map<Language, std::unordered_set<std::string>> vocab_;
  std::unordered_set<std::string> fallback_;
};

/// Test fixture, not a quality proxy: comparisons favor the longer text
/// (byte length) 8-6, ties 7-7. Absolute scores grow with length, capped at
/// 10. Order-insensitive by construction.
class LengthPreferenceJudge : public Judge {
 public:
  explicit LengthPreferenceJudge(RunTrace* trace = nullptr) : Judge(trace) {}

  std::string name() const override { return "mock-length-preference"; }

 protected:
  ScoreResult do_score(const HsInstance& instance, const Candidate& candidate) override;
  PairResult do_compare(const HsInstance& instance, const Candidate& first,
                        const Candidate& second) override;
};

/// Fills {hate_speech}, {background}, {candidate_a}, {candidate_b}
/// placeholders. Unknown placeholders are left verbatim.
std::string render_prompt(std::string_view tmpl, const HsInstance& instance,
                          const std::string& candidate_a, const std::string& candidate_b = "");

struct RemoteJudgeConfig {
  /// Endpoint per language; every language the run touches must be mapped
  /// (Basque routes to its own judge, the rest may share one).
  std::map<Language, std::string> endpoints;
  std::string score_template =
      "Rate this counterspeech from 0 to 10.\n"
      "Hate speech: {hate_speech}\n"
      "Context: {background}\n"
      "Counterspeech: {candidate_a}";
  std::string pair_template =
      "Rate both counterspeeches from 0 to 10.\n"
      "Hate speech: {hate_speech}\n"
      "Context: {background}\n"
      "Counterspeech A: {candidate_a}\n"
      "Counterspeech B: {candidate_b}";
  net::HttpOptions http;
};

/// Judge backed by an HTTP scoring service (one client per language route).
/// Wire format: POST {"mode":"score"|"pair","prompt":...} ->
/// {"scores":[x]} or {"scores":[x,y]}. Out-of-range replies are clamped into
/// [0,10] with a warning.
class RemoteJudge : public Judge {
 public:
  RemoteJudge(RemoteJudgeConfig config, RunTrace* trace = nullptr);
  ~RemoteJudge() override;

  std::string name() const override { return "remote"; }

 protected:
  ScoreResult do_score(const HsInstance& instance, const Candidate& candidate) override;
  PairResult do_compare(const HsInstance& instance, const Candidate& first,
                        const Candidate& second) override;

 private:
  net::HttpClient& client_for(Language language);
  std::vector<double> call(Language language, const std::string& mode, const std::string& prompt,
                           std::size_t expected_scores, int& attempts_out);

  RemoteJudgeConfig config_;
  std::map<Language, std::unique_ptr<net::HttpClient>> clients_;
};

}  // namespace csgen
