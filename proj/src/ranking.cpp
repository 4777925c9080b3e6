#include "kemeny/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "kemeny/error.hpp"

namespace kemeny {

std::vector<Item> Ranking::positions() const {
  std::vector<Item> pos(order.size());
  for (int k = 0; k < n(); ++k) pos[order[k]] = k;
  return pos;
}

Ranking Ranking::identity(int n) {
  Ranking r;
  r.order.resize(n);
  std::iota(r.order.begin(), r.order.end(), 0);
  return r;
}

Ranking Ranking::reversed(int n) {
  Ranking r = identity(n);
  std::reverse(r.order.begin(), r.order.end());
  return r;
}

bool validate_ranking(const std::vector<Item>& order, int n) {
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (Item x : order) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

void Profile::validate() const {
  if (n < 1) throw InvalidInputError("profile: n must be >= 1");
  if (rankings.empty()) throw InvalidInputError("profile: m must be >= 1");
  for (std::size_t k = 0; k < rankings.size(); ++k) {
    if (!validate_ranking(rankings[k].order, n)) {
      throw InvalidInputError("profile: ranking " + std::to_string(k) +
                              " is not a permutation of 0.." +
                              std::to_string(n - 1));
    }
  }
  if (!item_labels.empty() && static_cast<int>(item_labels.size()) != n) {
    throw InvalidInputError("profile: item_labels must be empty or have n entries");
  }
}

namespace {

// Counts inversions of seq in place; tmp is scratch of equal size.
std::int64_t merge_count(std::vector<Item>& seq, std::vector<Item>& tmp,
                         int lo, int hi) {
  if (hi - lo <= 1) return 0;
  const int mid = lo + (hi - lo) / 2;
  std::int64_t inv = merge_count(seq, tmp, lo, mid) + merge_count(seq, tmp, mid, hi);
  int a = lo, b = mid, out = lo;
  while (a < mid && b < hi) {
    if (seq[a] <= seq[b]) {
      tmp[out++] = seq[a++];
    } else {
      inv += mid - a;
      tmp[out++] = seq[b++];
    }
  }
  while (a < mid) tmp[out++] = seq[a++];
  while (b < hi) tmp[out++] = seq[b++];
  std::copy(tmp.begin() + lo, tmp.begin() + hi, seq.begin() + lo);
  return inv;
}

}  // namespace

std::int64_t kendall_tau(const Ranking& rho, const Ranking& sigma) {
  const int n = rho.n();
  if (sigma.n() != n) {
    throw InvalidInputError("kendall_tau: length mismatch (" +
                            std::to_string(n) + " vs " +
                            std::to_string(sigma.n()) + ")");
  }
  std::vector<Item> pos_sigma(n, -1);
  for (int k = 0; k < n; ++k) {
    const Item x = sigma.order[k];
    if (x < 0 || x >= n) throw InvalidInputError("kendall_tau: item out of range");
    pos_sigma[x] = k;
  }
  // Relabel rho's sequence by sigma positions; disagreements become inversions.
  std::vector<Item> seq(n);
  for (int k = 0; k < n; ++k) {
    const Item x = rho.order[k];
    if (x < 0 || x >= n || pos_sigma[x] < 0) {
      throw InvalidInputError("kendall_tau: item universes differ");
    }
    seq[k] = pos_sigma[x];
  }
  std::vector<Item> tmp(n);
  return merge_count(seq, tmp, 0, n);
}

std::int64_t kemeny_numerator(const Ranking& rho, const Profile& profile) {
  if (rho.n() != profile.n) {
    throw InvalidInputError("kemeny_distance: ranking length " +
                            std::to_string(rho.n()) + " does not match profile n=" +
                            std::to_string(profile.n));
  }
  std::int64_t total = 0;
  for (const Ranking& sigma : profile.rankings) total += kendall_tau(rho, sigma);
  return total;
}

double kemeny_distance(const Ranking& rho, const Profile& profile) {
  if (profile.m() < 1) throw InvalidInputError("kemeny_distance: empty profile");
  return static_cast<double>(kemeny_numerator(rho, profile)) / profile.m();
}

PrecedenceMatrix precedence_matrix(const Profile& profile) {
  profile.validate();
  const int n = profile.n;
  PrecedenceMatrix w(n);
  for (const Ranking& sigma : profile.rankings) {
    for (int a = 0; a < n; ++a) {
      const Item i = sigma.order[a];
      for (int b = a + 1; b < n; ++b) {
        ++w.at(i, sigma.order[b]);
      }
    }
  }
  return w;
}

std::int64_t kemeny_numerator_via_precedence(const Ranking& rho,
                                             const PrecedenceMatrix& w) {
  const int n = w.n();
  if (rho.n() != n) {
    throw InvalidInputError("kemeny_cost_via_precedence: dimension mismatch");
  }
  std::int64_t total = 0;
  for (int a = 0; a < n; ++a) {
    const Item i = rho.order[a];
    for (int b = a + 1; b < n; ++b) {
      total += w.at(rho.order[b], i);
    }
  }
  return total;
}

double kemeny_cost_via_precedence(const Ranking& rho, const PrecedenceMatrix& w,
                                  int m) {
  if (m < 1) throw InvalidInputError("kemeny_cost_via_precedence: m must be >= 1");
  return static_cast<double>(kemeny_numerator_via_precedence(rho, w)) / m;
}

}  // namespace kemeny
