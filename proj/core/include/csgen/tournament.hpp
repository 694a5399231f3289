#pragma once

#include <span>
#include <vector>

#include "csgen/judge.hpp"
#include "csgen/types.hpp"

namespace csgen {

inline constexpr int kDefaultTournamentLimit = 6;

/// Keeps the `limit` highest-scoring candidates (ties: earlier entry wins),
/// dropping duplicate texts first so nobody plays against themselves.
std::vector<Candidate> truncate_pool(std::span<const Candidate> pool,
                                     int limit = kDefaultTournamentLimit);

/// One entrant's double round-robin average: for each opponent a, one
/// comparison as (c, a) banking the first slot and one as (a, c) banking the
/// second, summed and divided by 2 x |opponents|. Costs 2 x |opponents| judge
/// calls; rank_tournament shares calls between entrants instead.
double round_robin_score(const Candidate& c, std::span<const Candidate> opponents,
                         const HsInstance& instance, Judge& judge);

/// Full re-ranking: truncates the pool, plays every ordered pair exactly once
/// (m x (m-1) judge calls; each call feeds the first-slot entrant and the
/// second-slot entrant), and ranks by average score descending. Ties go to
/// the higher Stage-1 score, then to pool order. A failed comparison counts
/// 0-0 but still divides. A single entrant gets its Stage-1 score as average.
std::vector<TournamentResult> rank_tournament(std::span<const Candidate> pool,
                                              const HsInstance& instance, Judge& judge,
                                              int limit = kDefaultTournamentLimit);

}  // namespace csgen
