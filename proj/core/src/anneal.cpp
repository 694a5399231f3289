#include "csgen/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include <spdlog/spdlog.h>

namespace csgen {

Candidate initial_candidate(const HsInstance& instance) {
  std::string text;
  for (const std::string& sentence : instance.background) {
    if (!text.empty()) text += ' ';
    text += sentence;
  }
  return make_initial_candidate(std::move(text));
}

std::vector<double> compute_probabilities(std::span<const double> scores, double temperature) {
  if (scores.empty()) throw AnnealError("cannot compute probabilities of an empty score list");
  if (!(temperature > 1.0)) {
    throw AnnealError("temperature must exceed 1, got " + std::to_string(temperature));
  }
  const double log_t = std::log(temperature);
  std::vector<double> exponents(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) exponents[i] = scores[i] * log_t;
  const double shift = *std::max_element(exponents.begin(), exponents.end());
  std::vector<double> weights(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weights[i] = std::exp(exponents[i] - shift);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return weights;
}

std::vector<Candidate> select_candidates(std::span<const Candidate> candidates,
                                         std::span<const double> probabilities, int count,
                                         Rng& rng) {
  if (candidates.size() != probabilities.size()) {
    throw AnnealError("candidate/probability length mismatch: " +
                      std::to_string(candidates.size()) + " vs " +
                      std::to_string(probabilities.size()));
  }
  if (count <= 0) return {};
  if (static_cast<std::size_t>(count) >= candidates.size()) {
    return {candidates.begin(), candidates.end()};
  }

  std::vector<bool> taken(candidates.size(), false);
  double remaining = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int draw = 0; draw < count; ++draw) {
    std::size_t pick = candidates.size();
    if (remaining > 0.0) {
      // Renormalized draw over the untaken mass: u * remaining against the
      // running sum, strict >, so zero-probability entries are never hit.
      const double target = rng.next_double() * remaining;
      double cum = 0.0;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (taken[i]) continue;
        cum += probabilities[i];
        if (cum > target) {
          pick = i;
          break;
        }
      }
    }
    if (pick == candidates.size()) {
      // Rounding exhausted the mass (or only zero-probability entries are
      // left): fall back to the first untaken, keeping the draw deterministic.
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!taken[i]) {
          pick = i;
          break;
        }
      }
    }
    taken[pick] = true;
    remaining -= probabilities[pick];
    out.push_back(candidates[pick]);
  }
  return out;
}

long long judge_call_bound(const AnnealConfig& cfg) {
  const long long per_parent =
      cfg.append_fanout + static_cast<long long>(cfg.k) * cfg.n_per_gen;
  const long long parents = 1 + static_cast<long long>(cfg.n_max - 1) * cfg.k;
  return per_parent * parents;
}

namespace {

double score_or_lowest(const Candidate& c) {
  return c.score.value_or(-std::numeric_limits<double>::infinity());
}

/// Scores a batch in place; candidates whose judge call fails keep no score.
/// Every scored candidate is also appended to pool.
void score_batch(std::vector<Candidate>& batch, const HsInstance& instance, Judge& judge,
                 ScoreStage stage, std::vector<Candidate>& pool) {
  for (Candidate& candidate : batch) {
    try {
      candidate.score = judge.score(instance, candidate, stage);
      pool.push_back(candidate);
    } catch (const JudgeError& e) {
      spdlog::warn("scoring failed for candidate {} of {}: {}", candidate.key(), instance.id,
                   e.what());
    }
  }
}

/// Indices of the top `count` scored entries, by probability descending,
/// ties keeping input order.
std::vector<std::size_t> top_indices(std::span<const double> probabilities, int count) {
  std::vector<std::size_t> order(probabilities.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probabilities[a] > probabilities[b]; });
  if (order.size() > static_cast<std::size_t>(count)) order.resize(static_cast<std::size_t>(count));
  return order;
}

}  // namespace

AnnealOutcome anneal(const HsInstance& instance, const AnnealConfig& cfg, Judge& judge,
                     GeneratorPool& generator, const Vocabulary& vocab) {
  validate_config(cfg);
  validate_instance(instance);

  Rng rng(instance_seed(cfg.rng_seed, instance.id));
  AnnealOutcome outcome;
  std::vector<Candidate> current{initial_candidate(instance)};
  double temperature = cfg.t0;

  for (int iteration = 1; iteration <= cfg.n_max; ++iteration) {
    temperature += cfg.delta_t;
    std::vector<Candidate> next;
    std::unordered_set<std::string> next_keys;
    auto add_to_next = [&](const Candidate& c) {
      if (next_keys.insert(c.key()).second) next.push_back(c);
    };

    for (const Candidate& parent : current) {
      // S: word-append mutations of the parent.
      std::vector<Candidate> appends;
      appends.reserve(static_cast<std::size_t>(cfg.append_fanout));
      for (int i = 0; i < cfg.append_fanout; ++i) {
        appends.push_back(append_mutation(parent, vocab, cfg.append_width, rng));
      }
      score_batch(appends, instance, judge, ScoreStage::append, outcome.pool);

      std::vector<Candidate> scored_appends;
      std::vector<double> append_scores;
      for (Candidate& c : appends) {
        if (!c.score) continue;
        append_scores.push_back(*c.score);
        scored_appends.push_back(std::move(c));
      }
      if (scored_appends.empty()) {
        spdlog::warn("no append mutation of parent {} could be scored; parent survives",
                     parent.key());
        add_to_next(parent);
        continue;
      }

      std::vector<double> append_probs = compute_probabilities(append_scores, temperature);
      std::vector<Candidate> selected =
          select_candidates(scored_appends, append_probs, cfg.k, rng);

      // S~: LLM rewrites of the selected mutations.
      std::vector<Candidate> rewrites;
      for (const Candidate& seed : selected) {
        std::vector<Candidate> batch = generator.generate(instance, seed, rng);
        std::move(batch.begin(), batch.end(), std::back_inserter(rewrites));
      }
      if (rewrites.empty()) {
        spdlog::warn("no rewrites produced for parent {}; parent survives", parent.key());
        add_to_next(parent);
        continue;
      }
      score_batch(rewrites, instance, judge, ScoreStage::rewrite, outcome.pool);

      std::vector<Candidate> scored_rewrites;
      std::vector<double> rewrite_scores;
      for (Candidate& c : rewrites) {
        if (!c.score) continue;
        rewrite_scores.push_back(*c.score);
        scored_rewrites.push_back(std::move(c));
      }
      if (scored_rewrites.empty()) {
        spdlog::warn("no rewrite of parent {} could be scored; parent survives", parent.key());
        add_to_next(parent);
        continue;
      }

      std::vector<double> rewrite_probs = compute_probabilities(rewrite_scores, temperature);
      for (std::size_t idx : top_indices(rewrite_probs, cfg.k)) {
        add_to_next(scored_rewrites[idx]);
      }
    }

    if (next.empty()) throw AnnealError("search extinct: working set is empty");
    // Keep the k best for the next round (the per-parent top-k can overfill).
    std::stable_sort(next.begin(), next.end(), [](const Candidate& a, const Candidate& b) {
      return score_or_lowest(a) > score_or_lowest(b);
    });
    if (next.size() > static_cast<std::size_t>(cfg.k)) {
      next.resize(static_cast<std::size_t>(cfg.k));
    }
    current = std::move(next);
    outcome.iterations_run = iteration;

    const auto best_it = std::max_element(
        current.begin(), current.end(),
        [](const Candidate& a, const Candidate& b) { return score_or_lowest(a) < score_or_lowest(b); });
    if (best_it->score && *best_it->score >= cfg.s_target) {
      outcome.best = *best_it;
      outcome.reached_target = true;
      outcome.final_temperature = temperature;
      return outcome;
    }
  }

  const auto best_it = std::max_element(
      current.begin(), current.end(),
      [](const Candidate& a, const Candidate& b) { return score_or_lowest(a) < score_or_lowest(b); });
  outcome.best = *best_it;
  outcome.final_temperature = temperature;
  return outcome;
}

}  // namespace csgen
