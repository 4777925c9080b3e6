#pragma once

#include <chrono>
#include <cstdint>

#include "kemeny/ranking.hpp"

namespace kemeny {

struct ExactResult {
  Ranking ranking;
  std::int64_t cost_numerator = 0;   // total disagreements over all voters
  double cost = 0.0;                 // cost_numerator / m
  std::int64_t nodes_explored = 0;
  std::chrono::duration<double> elapsed{0};
};

inline constexpr int kBruteForceMaxItems = 10;
inline constexpr int kSubsetDpMaxItems = 20;

// Enumerates all n! rankings; returns the lexicographically smallest
// minimizer. Throws CapacityError when n > kBruteForceMaxItems.
ExactResult solve_brute_force(const Profile& profile);

// Held-Karp style dynamic program over item subsets. Exact; same
// lexicographic-minimum tie convention as brute force (lowest item index
// wins among equal-cost extensions). Throws CapacityError when
// n > kSubsetDpMaxItems (2^n table).
ExactResult solve_subset_dp(const Profile& profile);

// Pairwise floor on the total-disagreement numerator:
// sum over {i,j} of min(w[i][j], w[j][i]). No ranking can do better.
std::int64_t lower_bound(const PrecedenceMatrix& w);

}  // namespace kemeny
