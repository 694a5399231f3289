#include "csgen/tournament.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include <spdlog/spdlog.h>

namespace csgen {

std::vector<Candidate> truncate_pool(std::span<const Candidate> pool, int limit) {
  if (pool.empty()) throw TournamentError("cannot rank an empty candidate pool");
  if (limit < 1) throw TournamentError("pool limit must be positive");
  for (const Candidate& c : pool) {
    if (!c.score) {
      throw TournamentError("pool candidate " + c.key() + " has no score");
    }
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return *pool[a].score > *pool[b].score; });
  // The pool may contain the same text more than once (one entry per scoring
  // event); keep each text's best-scored occurrence only.
  std::vector<Candidate> out;
  std::unordered_set<std::string> seen;
  for (std::size_t idx : order) {
    if (out.size() == static_cast<std::size_t>(limit)) break;
    if (seen.insert(pool[idx].key()).second) out.push_back(pool[idx]);
  }
  return out;
}

double round_robin_score(const Candidate& c, std::span<const Candidate> opponents,
                         const HsInstance& instance, Judge& judge) {
  if (opponents.empty()) throw TournamentError("no opponents");
  double total = 0.0;
  for (const Candidate& opponent : opponents) {
    PairOutcome normal{0.0, 0.0};
    PairOutcome reversed{0.0, 0.0};
    try {
      normal = judge.compare(instance, c, opponent, PairOrder::normal);
    } catch (const JudgeError& e) {
      spdlog::warn("comparison failed ({} vs {}): {}; counting 0-0", c.key(), opponent.key(),
                   e.what());
    }
    try {
      reversed = judge.compare(instance, opponent, c, PairOrder::reversed);
    } catch (const JudgeError& e) {
      spdlog::warn("comparison failed ({} vs {}): {}; counting 0-0", opponent.key(), c.key(),
                   e.what());
    }
    total += normal.score_first + reversed.score_second;
  }
  return total / (2.0 * static_cast<double>(opponents.size()));
}

std::vector<TournamentResult> rank_tournament(std::span<const Candidate> pool,
                                              const HsInstance& instance, Judge& judge,
                                              int limit) {
  const std::vector<Candidate> entrants = truncate_pool(pool, limit);
  const std::size_t m = entrants.size();

  std::vector<TournamentResult> results(m);
  for (std::size_t i = 0; i < m; ++i) {
    results[i].candidate_key = entrants[i].key();
  }

  if (m == 1) {
    // No opponents: Algorithm 3's divisor is zero, so the Stage-1 score
    // stands in for the average.
    results[0].average_score = *entrants[0].score;
    results[0].rank = 1;
    return results;
  }

  // Each ordered pair plays once; the call pays out to both slots, so every
  // entrant still banks 2 x (m - 1) readings as in the per-entrant formula.
  std::vector<double> totals(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      PairOutcome out{0.0, 0.0};
      try {
        out = judge.compare(instance, entrants[i], entrants[j],
                            i < j ? PairOrder::normal : PairOrder::reversed);
      } catch (const JudgeError& e) {
        spdlog::warn("comparison failed ({} vs {}): {}; counting 0-0", entrants[i].key(),
                     entrants[j].key(), e.what());
      }
      totals[i] += out.score_first;
      totals[j] += out.score_second;
    }
  }

  const int matches = 2 * static_cast<int>(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    results[i].total_score = totals[i];
    results[i].match_count = matches;
    results[i].average_score = totals[i] / static_cast<double>(matches);
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].average_score != results[b].average_score) {
      return results[a].average_score > results[b].average_score;
    }
    return *entrants[a].score > *entrants[b].score;
  });

  std::vector<TournamentResult> ranked;
  ranked.reserve(m);
  for (std::size_t pos = 0; pos < m; ++pos) {
    TournamentResult r = results[order[pos]];
    r.rank = static_cast<int>(pos) + 1;
    ranked.push_back(std::move(r));
  }
  return ranked;
}

}  // namespace csgen
