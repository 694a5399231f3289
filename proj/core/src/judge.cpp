#include "csgen/judge.hpp"

#include <algorithm>
#include <utility>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "csgen/text.hpp"
#include "csgen/tokenize.hpp"

namespace csgen {

namespace {

void require_text(const Candidate& candidate, const char* role) {
  if (candidate.text.empty()) {
    throw JudgeError(std::string("cannot judge empty candidate text (") + role + ")");
  }
}

void require_in_range(double value, const std::string& backend) {
  if (!(value >= 0.0 && value <= 10.0)) {
    throw JudgeError("backend '" + backend + "' produced score " + std::to_string(value) +
                     " outside [0,10]");
  }
}

}  // namespace

double Judge::score(const HsInstance& instance, const Candidate& candidate, ScoreStage stage) {
  require_text(candidate, "score");
  JudgeScoreEvent ev;
  ev.instance_id = instance.id;
  ev.candidate_key = candidate.key();
  ev.stage = stage;
  try {
    ScoreResult result = do_score(instance, candidate);
    require_in_range(result.value, name());
    ev.score = result.value;
    ev.attempts = result.attempts;
    if (trace_) trace_->append(std::move(ev));
    return result.value;
  } catch (const JudgeTransportError& e) {
    ev.ok = false;
    ev.attempts = e.attempts;
    if (trace_) trace_->append(std::move(ev));
    throw;
  } catch (const JudgeParseError& e) {
    ev.ok = false;
    ev.attempts = e.attempts;
    if (trace_) trace_->append(std::move(ev));
    throw;
  } catch (const JudgeError&) {
    ev.ok = false;
    if (trace_) trace_->append(std::move(ev));
    throw;
  }
}

PairOutcome Judge::compare(const HsInstance& instance, const Candidate& first,
                           const Candidate& second, PairOrder order) {
  require_text(first, "compare/first");
  require_text(second, "compare/second");
  JudgePairEvent ev;
  ev.instance_id = instance.id;
  ev.key_a = first.key();
  ev.key_b = second.key();
  ev.order = order;
  try {
    PairResult result = do_compare(instance, first, second);
    require_in_range(result.outcome.score_first, name());
    require_in_range(result.outcome.score_second, name());
    ev.score_a = result.outcome.score_first;
    ev.score_b = result.outcome.score_second;
    ev.attempts = result.attempts;
    if (trace_) trace_->append(std::move(ev));
    return result.outcome;
  } catch (const JudgeTransportError& e) {
    ev.ok = false;
    ev.attempts = e.attempts;
    if (trace_) trace_->append(std::move(ev));
    throw;
  } catch (const JudgeParseError& e) {
    ev.ok = false;
    ev.attempts = e.attempts;
    if (trace_) trace_->append(std::move(ev));
    throw;
  } catch (const JudgeError&) {
    ev.ok = false;
    if (trace_) trace_->append(std::move(ev));
    throw;
  }
}

VocabOverlapJudge::VocabOverlapJudge(std::vector<std::string> wordlist, RunTrace* trace)
    : Judge(trace), fallback_(wordlist.begin(), wordlist.end()) {}

VocabOverlapJudge::VocabOverlapJudge(std::map<Language, std::vector<std::string>> wordlists,
                                     RunTrace* trace)
    : Judge(trace) {
  for (auto& [language, words] : wordlists) {
    vocab_.emplace(language, std::unordered_set<std::string>(words.begin(), words.end()));
  }
}

double VocabOverlapJudge::score_text(Language language, const std::string& text) const {
  const std::unordered_set<std::string>* words = &fallback_;
  if (auto it = vocab_.find(language); it != vocab_.end()) words = &it->second;
  std::unordered_set<std::string> hits;
  for (const std::string& token : tokenize(text)) {
    if (words->count(token)) hits.insert(token);
  }
  return 7.0 + static_cast<double>(std::min<std::size_t>(3, hits.size()));
}

Judge::ScoreResult VocabOverlapJudge::do_score(const HsInstance& instance,
                                               const Candidate& candidate) {
  return {score_text(instance.language, candidate.text), 1};
}

Judge::PairResult VocabOverlapJudge::do_compare(const HsInstance& instance,
                                                const Candidate& first, const Candidate& second) {
  return {{score_text(instance.language, first.text), score_text(instance.language, second.text)},
          1};
}

Judge::ScoreResult LengthPreferenceJudge::do_score(const HsInstance&, const Candidate& candidate) {
  return {std::min(10.0, static_cast<double>(candidate.text.size()) / 10.0), 1};
}

Judge::PairResult LengthPreferenceJudge::do_compare(const HsInstance&, const Candidate& first,
                                                    const Candidate& second) {
  if (first.text.size() > second.text.size()) return {{8.0, 6.0}, 1};
  if (first.text.size() < second.text.size()) return {{6.0, 8.0}, 1};
  return {{7.0, 7.0}, 1};
}

std::string render_prompt(std::string_view tmpl, const HsInstance& instance,
                          const std::string& candidate_a, const std::string& candidate_b) {
  std::string background;
  for (const std::string& sentence : instance.background) {
    if (!background.empty()) background += ' ';
    background += sentence;
  }
  const std::pair<std::string_view, std::string_view> slots[] = {
      {"{hate_speech}", instance.hate_speech},
      {"{background}", background},
      {"{candidate_a}", candidate_a},
      {"{candidate_b}", candidate_b},
  };
  return render_template(tmpl, slots);
}

RemoteJudge::RemoteJudge(RemoteJudgeConfig config, RunTrace* trace)
    : Judge(trace), config_(std::move(config)) {
  if (config_.endpoints.empty()) throw ConfigError("remote judge has no endpoints");
  for (const auto& [language, url] : config_.endpoints) {
    if (url.empty()) {
      throw ConfigError("remote judge endpoint for " + std::string(to_string(language)) +
                        " is empty");
    }
    clients_.emplace(language, std::make_unique<net::HttpClient>(url, config_.http));
  }
}

RemoteJudge::~RemoteJudge() = default;

net::HttpClient& RemoteJudge::client_for(Language language) {
  auto it = clients_.find(language);
  if (it == clients_.end()) {
    throw JudgeError("no judge endpoint routed for language " +
                     std::string(to_string(language)));
  }
  return *it->second;
}

std::vector<double> RemoteJudge::call(Language language, const std::string& mode,
                                      const std::string& prompt, std::size_t expected_scores,
                                      int& attempts_out) {
  nlohmann::json request = {{"mode", mode}, {"prompt", prompt}};
  net::PostResult response;
  try {
    response = client_for(language).post_json(request.dump());
  } catch (const net::TransportError& e) {
    throw JudgeTransportError(e.what(), e.attempts);
  }
  attempts_out = response.attempts;

  nlohmann::json reply = nlohmann::json::parse(response.body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("scores") || !reply["scores"].is_array()) {
    throw JudgeParseError("judge reply is not {\"scores\":[...]} JSON", response.body,
                          response.attempts);
  }
  const auto& scores = reply["scores"];
  if (scores.size() != expected_scores) {
    throw JudgeParseError("judge reply has " + std::to_string(scores.size()) +
                              " scores, expected " + std::to_string(expected_scores),
                          response.body, response.attempts);
  }
  std::vector<double> out;
  for (const auto& entry : scores) {
    if (!entry.is_number()) {
      throw JudgeParseError("judge reply score is not numeric", response.body, response.attempts);
    }
    double value = entry.get<double>();
    if (value < 0.0 || value > 10.0) {
      double clamped = std::clamp(value, 0.0, 10.0);
      spdlog::warn("judge score {} out of range, clamped to {}", value, clamped);
      value = clamped;
    }
    out.push_back(value);
  }
  return out;
}

Judge::ScoreResult RemoteJudge::do_score(const HsInstance& instance, const Candidate& candidate) {
  std::string prompt = render_prompt(config_.score_template, instance, candidate.text);
  int attempts = 1;
  std::vector<double> scores = call(instance.language, "score", prompt, 1, attempts);
  return {scores[0], attempts};
}

Judge::PairResult RemoteJudge::do_compare(const HsInstance& instance, const Candidate& first,
                                          const Candidate& second) {
  std::string prompt = render_prompt(config_.pair_template, instance, first.text, second.text);
  int attempts = 1;
  std::vector<double> scores = call(instance.language, "pair", prompt, 2, attempts);
  return {{scores[0], scores[1]}, attempts};
}

}  // namespace csgen
