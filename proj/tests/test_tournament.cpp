#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "csgen/error.hpp"
#include "csgen/judge.hpp"
#include "csgen/tournament.hpp"
#include "csgen/trace.hpp"
#include "support.hpp"

using namespace csgen;

namespace {

Candidate scored(const std::string& text, double score) {
  Candidate c = make_initial_candidate(text);
  c.score = score;
  return c;
}

std::vector<Candidate> six_entrants() {
  std::vector<Candidate> pool;
  for (int i = 0; i < 6; ++i) {
    pool.push_back(scored("entrant number " + std::to_string(i), 5.0 + 0.5 * i));
  }
  return pool;
}

}  // namespace

TEST_CASE("truncate keeps the best-scored candidates in score order") {
  std::vector<Candidate> pool = {scored("a", 3.0), scored("b", 9.0), scored("c", 6.0),
                                 scored("d", 8.0)};
  auto kept = truncate_pool(pool, 3);
  REQUIRE(kept.size() == 3);
  CHECK(kept[0].text == "b");
  CHECK(kept[1].text == "d");
  CHECK(kept[2].text == "c");

  CHECK(truncate_pool(pool, 10).size() == 4);
}

TEST_CASE("truncate breaks score ties by pool order") {
  std::vector<Candidate> pool = {scored("first", 5.0), scored("second", 5.0),
                                 scored("third", 5.0)};
  auto kept = truncate_pool(pool, 2);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].text == "first");
  CHECK(kept[1].text == "second");
}

TEST_CASE("truncate drops duplicate texts, keeping the best occurrence") {
  std::vector<Candidate> pool = {scored("same text", 5.0), scored("other", 6.0),
                                 scored("same text", 8.0)};
  auto kept = truncate_pool(pool, 3);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].text == "same text");
  CHECK(kept[0].score == 8.0);
  CHECK(kept[1].text == "other");
}

TEST_CASE("truncate rejects bad input") {
  CHECK_THROWS_AS(truncate_pool(std::vector<Candidate>{}, 3), TournamentError);
  std::vector<Candidate> pool = {scored("a", 5.0)};
  CHECK_THROWS_AS(truncate_pool(pool, 0), TournamentError);
  std::vector<Candidate> unscored = {make_initial_candidate("no score")};
  CHECK_THROWS_AS(truncate_pool(unscored, 3), TournamentError);
}

TEST_CASE("single-opponent average works out to 8.5") {
  HsInstance instance = testsupport::make_instance("HS001");
  Candidate c = scored("the entrant", 5.0);
  Candidate a = scored("the opponent", 5.0);

  testsupport::ScriptedJudge judge;
  judge.pair_fn = [&](const HsInstance&, const Candidate& first,
                      const Candidate& second) -> PairOutcome {
    if (first.text == c.text && second.text == a.text) return {8.0, 6.0};
    if (first.text == a.text && second.text == c.text) return {5.0, 9.0};
    FAIL("unexpected pairing");
    return {0.0, 0.0};
  };

  const std::vector<Candidate> opponents = {a};
  CHECK(round_robin_score(c, opponents, instance, judge) == 8.5);  // (8 + 9) / 2
}

TEST_CASE("round robin scoring needs opponents") {
  HsInstance instance = testsupport::make_instance("HS001");
  testsupport::ScriptedJudge judge;
  Candidate c = scored("lonely", 5.0);
  CHECK_THROWS_AS(round_robin_score(c, std::vector<Candidate>{}, instance, judge),
                  TournamentError);
}

TEST_CASE("six entrants cost exactly thirty shared judge calls") {
  HsInstance instance = testsupport::make_instance("HS001");
  RunTrace trace;
  testsupport::ScriptedJudge judge(&trace);

  auto results = rank_tournament(six_entrants(), instance, judge, 6);
  REQUIRE(results.size() == 6);
  CHECK(trace.count_pairs() == 30);  // m(m-1) ordered pairs
  for (const auto& r : results) CHECK(r.match_count == 10);  // 2(m-1) presentations
}

TEST_CASE("a slot-biased comparator cancels out to identical averages") {
  HsInstance instance = testsupport::make_instance("HS001");
  testsupport::ScriptedJudge judge;
  judge.pair_fn = [](const HsInstance&, const Candidate&, const Candidate&) {
    return PairOutcome{9.0, 5.0};  // always favors the first slot
  };

  auto results = rank_tournament(six_entrants(), instance, judge, 6);
  REQUIRE(results.size() == 6);
  for (const auto& r : results) {
    CHECK(r.average_score == 7.0);
    CHECK(r.total_score == 70.0);  // 5 firsts * 9 + 5 seconds * 5
  }
}

TEST_CASE("ranks are a 1..m permutation ordered by average") {
  HsInstance instance = testsupport::make_instance("HS001");
  LengthPreferenceJudge judge;
  std::vector<Candidate> pool = {
      scored("short", 5.0),
      scored("a mid-length candidate", 5.5),
      scored("the longest candidate text of them all", 6.0),
  };
  auto results = rank_tournament(pool, instance, judge, 3);
  REQUIRE(results.size() == 3);

  std::vector<int> ranks;
  for (const auto& r : results) ranks.push_back(r.rank);
  std::sort(ranks.begin(), ranks.end());
  CHECK(ranks == std::vector<int>{1, 2, 3});

  CHECK(results[0].rank == 1);
  CHECK(results[0].candidate_key == candidate_key("the longest candidate text of them all"));
  CHECK(results[0].average_score == 8.0);
  CHECK(results[1].average_score == 7.0);
  CHECK(results[2].average_score == 6.0);
  for (std::size_t i = 1; i < results.size(); ++i) {
    CHECK(results[i - 1].average_score >= results[i].average_score);
  }
}

TEST_CASE("average ties fall back to the stage-1 score") {
  HsInstance instance = testsupport::make_instance("HS001");
  testsupport::ScriptedJudge judge;  // constant 7-7 pairs: all averages tie
  std::vector<Candidate> pool = {scored("weak", 4.0), scored("strong", 9.0),
                                 scored("middle", 6.0)};
  auto results = rank_tournament(pool, instance, judge, 3);
  REQUIRE(results.size() == 3);
  CHECK(results[0].candidate_key == candidate_key("strong"));
  CHECK(results[1].candidate_key == candidate_key("middle"));
  CHECK(results[2].candidate_key == candidate_key("weak"));
}

TEST_CASE("failed comparisons bank zero but still divide") {
  HsInstance instance = testsupport::make_instance("HS001");
  RunTrace trace;
  testsupport::ScriptedJudge judge(&trace);
  Candidate a = scored("alpha entrant", 9.0);
  Candidate b = scored("bravo entrant", 8.0);
  Candidate c = scored("charlie entrant", 7.0);
  judge.pair_fn = [&](const HsInstance&, const Candidate& first,
                      const Candidate& second) -> PairOutcome {
    const bool ab = (first.text == a.text && second.text == b.text) ||
                    (first.text == b.text && second.text == a.text);
    if (ab) throw JudgeTransportError("pair endpoint down", 3);
    return {9.0, 5.0};
  };

  auto results = rank_tournament(std::vector<Candidate>{a, b, c}, instance, judge, 3);
  REQUIRE(results.size() == 3);
  std::map<std::string, TournamentResult> by_key;
  for (const auto& r : results) by_key[r.candidate_key] = r;

  // a and b each keep one 9 (as first vs c) and one 5 (as second vs c)
  CHECK(by_key[a.key()].average_score == 3.5);
  CHECK(by_key[b.key()].average_score == 3.5);
  CHECK(by_key[c.key()].average_score == 7.0);
  CHECK(by_key[a.key()].match_count == 4);

  // the failed calls are still trace events
  CHECK(trace.count_pairs() == 6);
  int failed = 0;
  for (const auto& ev : trace.snapshot()) {
    if (const auto* pair = std::get_if<JudgePairEvent>(&ev.payload); pair && !pair->ok) ++failed;
  }
  CHECK(failed == 2);

  // the a-b tie resolves by stage-1 score
  CHECK(by_key[a.key()].rank == 2);
  CHECK(by_key[b.key()].rank == 3);
  CHECK(by_key[c.key()].rank == 1);
}

TEST_CASE("a single entrant keeps its stage-1 score") {
  HsInstance instance = testsupport::make_instance("HS001");
  RunTrace trace;
  testsupport::ScriptedJudge judge(&trace);
  std::vector<Candidate> pool = {scored("only one", 7.5)};
  auto results = rank_tournament(pool, instance, judge, 6);
  REQUIRE(results.size() == 1);
  CHECK(results[0].average_score == 7.5);
  CHECK(results[0].rank == 1);
  CHECK(results[0].match_count == 0);
  CHECK(trace.count_pairs() == 0);
}

TEST_CASE("entrant input order does not change the outcome") {
  HsInstance instance = testsupport::make_instance("HS001");
  LengthPreferenceJudge judge;
  std::vector<Candidate> pool = {
      scored("tiny", 5.0),
      scored("somewhat longer text", 6.0),
      scored("the very longest candidate in this set", 7.0),
      scored("medium size", 8.0),
  };
  auto baseline = rank_tournament(pool, instance, judge, 4);
  std::map<std::string, double> expected;
  for (const auto& r : baseline) expected[r.candidate_key] = r.average_score;

  std::reverse(pool.begin(), pool.end());
  auto reversed = rank_tournament(pool, instance, judge, 4);
  REQUIRE(reversed.size() == expected.size());
  for (const auto& r : reversed) {
    CHECK(expected.at(r.candidate_key) == r.average_score);
  }
}

TEST_CASE("shared-call averages equal the per-entrant double round robin") {
  HsInstance instance = testsupport::make_instance("HS001");
  LengthPreferenceJudge judge;
  std::vector<Candidate> pool = {
      scored("one", 5.0),
      scored("two words more", 6.0),
      scored("three words and then some", 7.0),
      scored("four words and even more padding", 8.0),
  };
  auto results = rank_tournament(pool, instance, judge, 4);
  auto entrants = truncate_pool(pool, 4);

  for (const auto& r : results) {
    const auto it = std::find_if(entrants.begin(), entrants.end(),
                                 [&](const Candidate& c) { return c.key() == r.candidate_key; });
    REQUIRE(it != entrants.end());
    std::vector<Candidate> opponents;
    for (const auto& c : entrants) {
      if (c.key() != r.candidate_key) opponents.push_back(c);
    }
    CHECK(round_robin_score(*it, opponents, instance, judge) ==
          doctest::Approx(r.average_score));
  }
}

TEST_CASE("tournament rejects unscored pools") {
  HsInstance instance = testsupport::make_instance("HS001");
  testsupport::ScriptedJudge judge;
  std::vector<Candidate> pool = {make_initial_candidate("unscored")};
  CHECK_THROWS_AS(rank_tournament(pool, instance, judge, 3), TournamentError);
}
