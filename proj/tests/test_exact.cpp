#include "kemeny/exact.hpp"

#include <algorithm>

#include "doctest.h"
#include "kemeny/error.hpp"
#include "kemeny/generators.hpp"
#include "kemeny/ranking.hpp"
#include "kemeny/rng.hpp"
#include "oracles.hpp"

using namespace kemeny;
namespace oracle = kemeny::testoracle;

namespace {

Profile make_profile(std::vector<std::vector<Item>> orders) {
  Profile p;
  p.n = static_cast<int>(orders[0].size());
  for (auto& o : orders) p.rankings.emplace_back(std::move(o));
  return p;
}

}  // namespace

TEST_CASE("brute force: unanimity recovers the common ranking at cost 0") {
  const Profile p = make_profile({{2, 0, 1}, {2, 0, 1}, {2, 0, 1}});
  const ExactResult r = solve_brute_force(p);
  CHECK(r.ranking == Ranking({2, 0, 1}));
  CHECK(r.cost_numerator == 0);
  CHECK(r.cost == 0.0);
}

TEST_CASE("brute force: majority profile") {
  const Profile p = make_profile({{0, 1, 2}, {0, 1, 2}, {1, 0, 2}});
  const ExactResult r = solve_brute_force(p);
  CHECK(r.ranking == Ranking({0, 1, 2}));
  CHECK(r.cost_numerator == 1);
  CHECK(r.cost == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("brute force: lexicographic tie-break") {
  const Profile p = make_profile({{0, 1}, {1, 0}});
  const ExactResult r = solve_brute_force(p);
  CHECK(r.ranking == Ranking({0, 1}));
  CHECK(r.cost == 0.5);
}

TEST_CASE("brute force: capacity guard") {
  Profile p;
  p.n = 11;
  p.rankings.push_back(Ranking::identity(11));
  CHECK_THROWS_AS(solve_brute_force(p), CapacityError);
}

TEST_CASE("subset dp: single voter is reproduced at cost 0") {
  const Profile p = make_profile({{3, 1, 4, 0, 2}});
  const ExactResult r = solve_subset_dp(p);
  CHECK(r.ranking == Ranking({3, 1, 4, 0, 2}));
  CHECK(r.cost_numerator == 0);
}

TEST_CASE("subset dp: capacity guard") {
  Profile p;
  p.n = 21;
  p.rankings.push_back(Ranking::identity(21));
  CHECK_THROWS_AS(solve_subset_dp(p), CapacityError);
}

TEST_CASE("subset dp equals brute force, ranking included, on random sweeps") {
  Rng rng(424242);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_below(5));  // 4..8
    const int m = 1 + static_cast<int>(rng.next_below(8));
    const Profile p = oracle::random_profile(n, m, rng);
    const ExactResult bf = solve_brute_force(p);
    const ExactResult dp = solve_subset_dp(p);
    CHECK(bf.cost_numerator == dp.cost_numerator);
    CHECK(bf.ranking == dp.ranking);
    CHECK(bf.cost == doctest::Approx(kemeny_distance(bf.ranking, p)).epsilon(1e-15));
    CHECK(dp.cost == doctest::Approx(kemeny_distance(dp.ranking, p)).epsilon(1e-15));
  }
}

TEST_CASE("unanimous first place wins first place in the dp output") {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5;
    const int m = 4;
    Profile p;
    p.n = n;
    const Item star = static_cast<Item>(rng.next_below(n));
    for (int v = 0; v < m; ++v) {
      std::vector<Item> rest;
      for (Item x = 0; x < n; ++x) {
        if (x != star) rest.push_back(x);
      }
      rng.shuffle(rest.begin(), rest.end());
      std::vector<Item> order;
      order.push_back(star);
      order.insert(order.end(), rest.begin(), rest.end());
      p.rankings.emplace_back(std::move(order));
    }
    CHECK(solve_subset_dp(p).ranking.order[0] == star);
    CHECK(solve_brute_force(p).ranking.order[0] == star);
  }
}

TEST_CASE("condorcet winner is ranked first by the exact solvers") {
  // Item 0 beats every other item pairwise (2 of 3 voters), though the
  // voters disagree elsewhere.
  const Profile p = make_profile({{0, 1, 2, 3}, {0, 3, 2, 1}, {2, 1, 0, 3}});
  const auto w = precedence_matrix(p);
  for (int j = 1; j < 4; ++j) CHECK(w.at(0, j) * 2 > 3);
  CHECK(solve_brute_force(p).ranking.order[0] == 0);
  CHECK(solve_subset_dp(p).ranking.order[0] == 0);
}

TEST_CASE("lower_bound: known values") {
  {
    const Profile p = make_profile({{0, 1, 2}, {0, 1, 2}});
    CHECK(lower_bound(precedence_matrix(p)) == 0);
  }
  {
    const Profile p = make_profile({{0, 1}, {1, 0}});
    CHECK(lower_bound(precedence_matrix(p)) == 1);
  }
}

TEST_CASE("lower_bound never exceeds the exact numerator") {
  Rng rng(6060);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_below(8));
    const Profile p = oracle::random_profile(8, m, rng);
    const auto w = precedence_matrix(p);
    const ExactResult r = solve_brute_force(p);
    CHECK(lower_bound(w) <= r.cost_numerator);
  }
}

TEST_CASE("exact solvers dominate every other permutation on small profiles") {
  Rng rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const Profile p = oracle::random_profile(5, 3, rng);
    const ExactResult r = solve_subset_dp(p);
    Ranking probe = Ranking::identity(5);
    do {
      CHECK(kemeny_numerator(probe, p) >= r.cost_numerator);
    } while (std::next_permutation(probe.order.begin(), probe.order.end()));
  }
}

TEST_CASE("dp handles repeat and jiggling generator output") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    GeneratorSpec s;
    s.kind = GenKind::kRepeat;
    s.n = 9;
    s.m = 6;
    s.seed = seed;
    s.repeat_count = 4;
    Ranking ref;
    const Profile p = gen_repeat(s, &ref);
    const ExactResult r = solve_subset_dp(p);
    // With a 4-of-6 majority copying the reference, the reference is optimal.
    CHECK(r.cost_numerator <= kemeny_numerator(ref, p));
  }
}
