#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace csgen {

/// Presentation order of a pairwise comparison, as seen from the entrant the
/// caller is scoring: normal = entrant shown first, reversed = shown second.
enum class PairOrder { normal, reversed };

std::string_view to_string(PairOrder order);

/// Pipeline stage that requested an absolute score.
enum class ScoreStage { append, rewrite, rerank };

std::string_view to_string(ScoreStage stage);
std::optional<ScoreStage> parse_score_stage(std::string_view tag);

/// One judge invocation asking for an absolute score E(c).
/// score is absent when the call failed after all retries (ok == false).
struct JudgeScoreEvent {
  std::string instance_id;
  std::string candidate_key;
  std::optional<double> score;
  ScoreStage stage = ScoreStage::append;
  bool ok = true;
  int attempts = 1;
};

/// One judge invocation comparing two candidates in a fixed presentation
/// order. Scores are as presented: score_a for the first slot, score_b for
/// the second.
struct JudgePairEvent {
  std::string instance_id;
  std::string key_a;
  std::string key_b;
  double score_a = 0.0;
  double score_b = 0.0;
  PairOrder order = PairOrder::normal;
  bool ok = true;
  int attempts = 1;
};

/// One generator invocation. produced_count is the number of candidates that
/// survived trimming and the n_per_gen cap; backend tags which endpoint
/// served the call (verifies round-robin rotation).
struct GenCallEvent {
  std::string instance_id;
  std::string parent_key;
  int produced_count = 0;
  std::string backend;
  bool ok = true;
};

struct TraceEvent {
  std::uint64_t seq = 0;
  std::variant<JudgeScoreEvent, JudgePairEvent, GenCallEvent> payload;
};

/// Append-only log of every oracle invocation across a run. Sequence numbers
/// are assigned at append time under a lock, so concurrent workers observe a
/// total order. Everything else in the pipeline is immutable after
/// construction; this is the one shared mutable structure.
class RunTrace {
 public:
  RunTrace() = default;
  RunTrace(const RunTrace&) = delete;
  RunTrace& operator=(const RunTrace&) = delete;

  std::uint64_t append(JudgeScoreEvent ev);
  std::uint64_t append(JudgePairEvent ev);
  std::uint64_t append(GenCallEvent ev);

  std::size_t size() const;

  /// Copy of the whole log in sequence order.
  std::vector<TraceEvent> snapshot() const;

  /// Events belonging to one instance, in sequence order.
  std::vector<TraceEvent> events_for(std::string_view instance_id) const;

  std::size_t count_scores() const;
  std::size_t count_pairs() const;
  std::size_t count_gen_calls() const;

 private:
  std::uint64_t append_event(std::variant<JudgeScoreEvent, JudgePairEvent, GenCallEvent> payload);

  mutable std::mutex mu_;
  std::vector<TraceEvent> events_;
};

const std::string& event_instance_id(const TraceEvent& ev);

}  // namespace csgen
