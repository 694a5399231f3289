#include "csgen/trace.hpp"

#include <algorithm>

namespace csgen {

std::string_view to_string(PairOrder order) {
  return order == PairOrder::normal ? "normal" : "reversed";
}

std::string_view to_string(ScoreStage stage) {
  switch (stage) {
    case ScoreStage::append: return "append";
    case ScoreStage::rewrite: return "rewrite";
    case ScoreStage::rerank: return "rerank";
  }
  return "append";
}

std::optional<ScoreStage> parse_score_stage(std::string_view tag) {
  if (tag == "append") return ScoreStage::append;
  if (tag == "rewrite") return ScoreStage::rewrite;
  if (tag == "rerank") return ScoreStage::rerank;
  return std::nullopt;
}

std::uint64_t RunTrace::append(JudgeScoreEvent ev) { return append_event(std::move(ev)); }
std::uint64_t RunTrace::append(JudgePairEvent ev) { return append_event(std::move(ev)); }
std::uint64_t RunTrace::append(GenCallEvent ev) { return append_event(std::move(ev)); }

std::uint64_t RunTrace::append_event(
    std::variant<JudgeScoreEvent, JudgePairEvent, GenCallEvent> payload) {
  std::lock_guard lock(mu_);
  TraceEvent ev;
  ev.seq = static_cast<std::uint64_t>(events_.size());
  ev.payload = std::move(payload);
  events_.push_back(std::move(ev));
  return events_.back().seq;
}

std::size_t RunTrace::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::vector<TraceEvent> RunTrace::snapshot() const {
  std::lock_guard lock(mu_);
  return events_;
}

const std::string& event_instance_id(const TraceEvent& ev) {
  return std::visit([](const auto& p) -> const std::string& { return p.instance_id; },
                    ev.payload);
}

std::vector<TraceEvent> RunTrace::events_for(std::string_view instance_id) const {
  std::lock_guard lock(mu_);
  std::vector<TraceEvent> out;
  for (const auto& ev : events_)
    if (event_instance_id(ev) == instance_id) out.push_back(ev);
  return out;
}

std::size_t RunTrace::count_scores() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [](const TraceEvent& ev) {
        return std::holds_alternative<JudgeScoreEvent>(ev.payload);
      }));
}

std::size_t RunTrace::count_pairs() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [](const TraceEvent& ev) {
        return std::holds_alternative<JudgePairEvent>(ev.payload);
      }));
}

std::size_t RunTrace::count_gen_calls() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [](const TraceEvent& ev) {
        return std::holds_alternative<GenCallEvent>(ev.payload);
      }));
}

}  // namespace csgen
