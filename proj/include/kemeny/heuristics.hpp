#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "kemeny/ranking.hpp"

namespace kemeny {

struct HeuristicResult {
  Ranking ranking;
  std::int64_t cost_numerator = 0;
  double cost = 0.0;  // cost_numerator / m
  std::chrono::duration<double> elapsed{0};
  std::string method;
};

// Quicksort-like pivot partition on majority preferences: items strictly
// beating the pivot go left, the rest (ties included) go right; recurse.
// Deterministic given the seed.
HeuristicResult kiwisort(const Profile& profile, std::uint64_t seed);

// MC4-style chain: from state i a uniformly random j is proposed and the
// chain moves iff a strict majority of voters places j above i. The chain
// is mixed with the uniform matrix (weight `teleport`) for ergodicity and
// solved by power iteration to L1 change < tol. Items are ranked by
// descending stationary probability, ties by ascending index.
// Throws ConvergenceError (carrying the last iterate) after max_iters.
HeuristicResult markov_chain(const Profile& profile, double teleport = 0.05,
                             double tol = 1e-10, int max_iters = 100000);

// Front-to-back greedy: pick the unplaced item maximizing
// agreement(x) = sum over unplaced y of w[x][y]; ties by ascending index.
HeuristicResult greedy_max_agreement(const Profile& profile);

// Same loop minimizing regret(x) = sum over unplaced y of w[y][x].
// At every step agreement(x) + regret(x) is the same for all candidates, so
// the two methods can differ only through tie handling.
HeuristicResult greedy_min_regret(const Profile& profile);

struct DecorConfig {
  int population_size = 15;       // P
  int stall_limit = 100;          // L consecutive generations without improvement
  double crossover_rate = 0.9;
  double differential_weight = 0.8;  // F
  int max_generations = 5000;
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidInputError (needs P >= 4)
};

// Differential evolution over real score vectors decoded to permutations by
// argsort (ascending score = earlier position, ties by item index). The
// population starts from the base rankings' position vectors (jittered)
// topped up with uniform random vectors; acceptance is strict improvement.
// Returns the best ranking ever seen, which is never worse than the best
// base ranking. Deterministic given the seed.
HeuristicResult decor(const Profile& profile, const DecorConfig& config);

}  // namespace kemeny
