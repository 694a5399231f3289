#pragma once

#include <span>
#include <vector>

#include "csgen/generate.hpp"
#include "csgen/judge.hpp"
#include "csgen/rng.hpp"
#include "csgen/tokenize.hpp"
#include "csgen/types.hpp"

namespace csgen {

/// Seed candidate for the search: the five background sentences joined by
/// single spaces, verbatim otherwise.
Candidate initial_candidate(const HsInstance& instance);

/// Selection distribution over scores: p_i proportional to temperature^score_i.
/// Computed in the log domain with a max shift, so temperatures up to 1e6 and
/// scores up to 10 cannot overflow. Requires temperature > 1 — the weight must
/// grow with the score, below 1 it would invert the preference order.
std::vector<double> compute_probabilities(std::span<const double> scores, double temperature);

/// Draws min(count, size) candidates without replacement: sequential draws,
/// renormalizing over the remainder after each removal. When count covers all
/// candidates, returns them in their original order without consuming rng.
std::vector<Candidate> select_candidates(std::span<const Candidate> candidates,
                                         std::span<const double> probabilities, int count,
                                         Rng& rng);

/// Exact worst-case number of judge-score calls for one run: every iteration
/// processes k parents (the first only 1), each costing append_fanout append
/// scores plus k * n_per_gen rewrite scores.
long long judge_call_bound(const AnnealConfig& cfg);

struct AnnealOutcome {
  /// Every candidate that received a score, in scoring order (duplicates kept:
  /// one entry per scoring event).
  std::vector<Candidate> pool;
  /// Highest-scoring member of the final working set.
  Candidate best;
  int iterations_run = 0;
  double final_temperature = 0.0;
  bool reached_target = false;
};

/// The full search loop. Per iteration: heat T by delta_t; for each parent in
/// the working set C, build append_fanout word-append mutations, score them,
/// select k by the Boltzmann-like distribution, rewrite each selected via the
/// generator pool, score the rewrites, and add the top k rewrites (by
/// probability, stable ties) to the next working set; then cap the next set
/// at k by score and stop early once any member reaches s_target.
///
/// A parent whose whole sub-batch fails (no scored appends, no rewrites, or
/// no scored rewrites) survives into the next set unchanged. Judge calls are
/// recorded through the judge's trace; the per-instance random stream is
/// seeded from cfg.rng_seed mixed with the instance id.
AnnealOutcome anneal(const HsInstance& instance, const AnnealConfig& cfg, Judge& judge,
                     GeneratorPool& generator, const Vocabulary& vocab);

}  // namespace csgen
