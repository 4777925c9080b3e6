#include "kemeny/exact.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "kemeny/error.hpp"

namespace kemeny {

ExactResult solve_brute_force(const Profile& profile) {
  profile.validate();
  const int n = profile.n;
  if (n > kBruteForceMaxItems) {
    throw CapacityError("solve_brute_force: n=" + std::to_string(n) +
                        " exceeds the n! enumeration guard (" +
                        std::to_string(kBruteForceMaxItems) + ")");
  }
  const auto start = std::chrono::steady_clock::now();
  const PrecedenceMatrix w = precedence_matrix(profile);

  Ranking candidate = Ranking::identity(n);
  Ranking best = candidate;
  std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
  std::int64_t explored = 0;
  do {
    ++explored;
    const std::int64_t cost = kemeny_numerator_via_precedence(candidate, w);
    // next_permutation enumerates lexicographically, so strict < keeps the
    // lexicographically smallest minimizer.
    if (cost < best_cost) {
      best_cost = cost;
      best = candidate;
    }
  } while (std::next_permutation(candidate.order.begin(), candidate.order.end()));

  ExactResult result;
  result.ranking = std::move(best);
  result.cost_numerator = best_cost;
  result.cost = static_cast<double>(best_cost) / profile.m();
  result.nodes_explored = explored;
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

ExactResult solve_subset_dp(const Profile& profile) {
  profile.validate();
  const int n = profile.n;
  if (n > kSubsetDpMaxItems) {
    throw CapacityError("solve_subset_dp: n=" + std::to_string(n) +
                        " exceeds the 2^n table guard (" +
                        std::to_string(kSubsetDpMaxItems) + ")");
  }
  const auto start = std::chrono::steady_clock::now();
  const PrecedenceMatrix w = precedence_matrix(profile);

  // against[x][y] = w[y][x], laid out contiguously per x.
  std::vector<std::int64_t> against(static_cast<std::size_t>(n) * n);
  std::vector<std::int64_t> total_against(n, 0);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      against[static_cast<std::size_t>(x) * n + y] = w.at(y, x);
      total_against[x] += w.at(y, x);
    }
  }

  // completion[S] = minimal disagreements incurred by the items not yet
  // placed, given that the items of S already occupy the prefix. Appending
  // x next costs total_against[x] minus the votes from already-placed items.
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<std::int64_t> completion(static_cast<std::size_t>(full) + 1);
  std::int64_t explored = 0;
  completion[full] = 0;
  for (std::uint32_t mask = full; mask-- > 0;) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (int x = 0; x < n; ++x) {
      if (mask & (1u << x)) continue;
      ++explored;
      std::int64_t add = total_against[x];
      const std::int64_t* row = &against[static_cast<std::size_t>(x) * n];
      for (std::uint32_t rest = mask; rest;) {
        const int y = std::countr_zero(rest);
        rest &= rest - 1;
        add -= row[y];
      }
      const std::int64_t total = add + completion[mask | (1u << x)];
      best = std::min(best, total);
    }
    completion[mask] = best;
  }

  // Forward reconstruction; taking the lowest feasible item at every step
  // yields the lexicographically smallest optimal ranking.
  Ranking best;
  best.order.reserve(n);
  std::uint32_t mask = 0;
  while (mask != full) {
    for (int x = 0; x < n; ++x) {
      if (mask & (1u << x)) continue;
      std::int64_t add = total_against[x];
      const std::int64_t* row = &against[static_cast<std::size_t>(x) * n];
      for (std::uint32_t rest = mask; rest;) {
        const int y = std::countr_zero(rest);
        rest &= rest - 1;
        add -= row[y];
      }
      if (add + completion[mask | (1u << x)] == completion[mask]) {
        best.order.push_back(x);
        mask |= 1u << x;
        break;
      }
    }
  }

  ExactResult result;
  result.ranking = std::move(best);
  result.cost_numerator = completion[0];
  result.cost = static_cast<double>(completion[0]) / profile.m();
  result.nodes_explored = explored;
  result.elapsed = std::chrono::steady_clock::now() - start;
  return result;
}

std::int64_t lower_bound(const PrecedenceMatrix& w) {
  std::int64_t bound = 0;
  for (int i = 0; i < w.n(); ++i) {
    for (int j = i + 1; j < w.n(); ++j) {
      bound += std::min(w.at(i, j), w.at(j, i));
    }
  }
  return bound;
}

}  // namespace kemeny
