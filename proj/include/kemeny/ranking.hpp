#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kemeny {

using Item = std::int32_t;

// A strict total order over items 0..n-1, most preferred first:
// order[k] is the item at preference position k.
struct Ranking {
  std::vector<Item> order;

  Ranking() = default;
  explicit Ranking(std::vector<Item> o) : order(std::move(o)) {}

  int n() const { return static_cast<int>(order.size()); }

  // positions()[item] = preference position of that item (0-based inverse map).
  std::vector<Item> positions() const;

  static Ranking identity(int n);
  static Ranking reversed(int n);

  bool operator==(const Ranking&) const = default;
};

// True iff order is a permutation of {0,...,n-1}. Total function.
bool validate_ranking(const std::vector<Item>& order, int n);

// An aggregation instance: m base rankings over a shared set of n items.
// item_labels is display metadata only (empty or exactly n entries).
struct Profile {
  int n = 0;
  std::vector<Ranking> rankings;
  std::vector<std::string> item_labels;

  int m() const { return static_cast<int>(rankings.size()); }

  // Throws InvalidInputError if any structural invariant is violated.
  void validate() const;
};

// Pairwise vote counts: at(i, j) = number of base rankings placing item i
// before item j. Satisfies at(i,j) + at(j,i) = m for i != j, at(i,i) = 0.
class PrecedenceMatrix {
 public:
  PrecedenceMatrix() = default;
  explicit PrecedenceMatrix(int n)
      : n_(n), w_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0) {}

  int n() const { return n_; }
  std::int64_t at(int i, int j) const {
    return w_[static_cast<std::size_t>(i) * n_ + j];
  }
  std::int64_t& at(int i, int j) {
    return w_[static_cast<std::size_t>(i) * n_ + j];
  }

 private:
  int n_ = 0;
  std::vector<std::int64_t> w_;
};

// Number of unordered item pairs ordered oppositely by rho and sigma.
// O(n log n) inversion counting; symmetric; range [0, n(n-1)/2].
std::int64_t kendall_tau(const Ranking& rho, const Ranking& sigma);

// Total pairwise disagreements of rho against all base rankings (the exact
// integer numerator of the Kemeny distance).
std::int64_t kemeny_numerator(const Ranking& rho, const Profile& profile);

// Mean Kendall-tau distance from rho to the base rankings.
double kemeny_distance(const Ranking& rho, const Profile& profile);

PrecedenceMatrix precedence_matrix(const Profile& profile);

// Kemeny cost from the precedence matrix alone: sums w[j][i] over ordered
// pairs (i before j in rho). Equals kemeny_numerator for the profile that
// produced w.
std::int64_t kemeny_numerator_via_precedence(const Ranking& rho,
                                             const PrecedenceMatrix& w);
double kemeny_cost_via_precedence(const Ranking& rho, const PrecedenceMatrix& w,
                                  int m);

}  // namespace kemeny
