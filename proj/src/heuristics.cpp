#include "kemeny/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kemeny/error.hpp"
#include "kemeny/rng.hpp"

namespace kemeny {

namespace {

HeuristicResult finish(Ranking ranking, const Profile& profile,
                       const PrecedenceMatrix& w,
                       std::chrono::steady_clock::time_point start,
                       std::string method) {
  HeuristicResult r;
  r.cost_numerator = kemeny_numerator_via_precedence(ranking, w);
  r.cost = static_cast<double>(r.cost_numerator) / profile.m();
  r.ranking = std::move(ranking);
  r.elapsed = std::chrono::steady_clock::now() - start;
  r.method = std::move(method);
  return r;
}

void kiwisort_recurse(std::vector<Item>& items, const PrecedenceMatrix& w,
                      Rng& rng, std::vector<Item>& out) {
  if (items.empty()) return;
  if (items.size() == 1) {
    out.push_back(items[0]);
    return;
  }
  const Item pivot = items[rng.next_below(items.size())];
  std::vector<Item> left, right;
  for (Item y : items) {
    if (y == pivot) continue;
    if (w.at(y, pivot) > w.at(pivot, y)) {
      left.push_back(y);
    } else {
      right.push_back(y);
    }
  }
  kiwisort_recurse(left, w, rng, out);
  out.push_back(pivot);
  kiwisort_recurse(right, w, rng, out);
}

}  // namespace

HeuristicResult kiwisort(const Profile& profile, std::uint64_t seed) {
  profile.validate();
  const auto start = std::chrono::steady_clock::now();
  const PrecedenceMatrix w = precedence_matrix(profile);
  Rng rng(seed);
  std::vector<Item> items(profile.n);
  std::iota(items.begin(), items.end(), 0);
  Ranking result;
  result.order.reserve(profile.n);
  kiwisort_recurse(items, w, rng, result.order);
  return finish(std::move(result), profile, w, start, "kiwisort");
}

HeuristicResult markov_chain(const Profile& profile, double teleport,
                             double tol, int max_iters) {
  profile.validate();
  if (teleport <= 0.0 || teleport >= 1.0) {
    throw InvalidInputError("markov_chain: teleport must be in (0, 1)");
  }
  const auto start = std::chrono::steady_clock::now();
  const PrecedenceMatrix w = precedence_matrix(profile);
  const int n = profile.n;
  const double m_half = profile.m() / 2.0;

  // Row-stochastic transition matrix: majority-move chain mixed with the
  // uniform matrix.
  std::vector<double> p(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double stay = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j != i && static_cast<double>(w.at(j, i)) > m_half) {
        p[static_cast<std::size_t>(i) * n + j] = 1.0 / n;
        stay -= 1.0 / n;
      }
    }
    p[static_cast<std::size_t>(i) * n + i] = stay;
  }
  for (double& x : p) x *= 1.0 - teleport;
  for (double& x : p) x += teleport / n;

  std::vector<double> dist(n, 1.0 / n), next(n);
  bool converged = false;
  for (int iter = 0; iter < max_iters && !converged; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double di = dist[i];
      const double* row = &p[static_cast<std::size_t>(i) * n];
      for (int j = 0; j < n; ++j) next[j] += di * row[j];
    }
    double change = 0.0;
    for (int j = 0; j < n; ++j) change += std::abs(next[j] - dist[j]);
    dist.swap(next);
    converged = change < tol;
  }
  if (!converged) {
    throw ConvergenceError("markov_chain: no convergence after " +
                               std::to_string(max_iters) + " iterations",
                           dist);
  }

  Ranking result = Ranking::identity(n);
  std::stable_sort(result.order.begin(), result.order.end(),
                   [&](Item a, Item b) { return dist[a] > dist[b]; });
  return finish(std::move(result), profile, w, start, "mc4");
}

namespace {

HeuristicResult greedy_front_to_back(const Profile& profile, bool maximize_agreement,
                                     const char* method) {
  profile.validate();
  const auto start = std::chrono::steady_clock::now();
  const PrecedenceMatrix w = precedence_matrix(profile);
  const int n = profile.n;

  // score[x] over unplaced items; updated incrementally as items are placed.
  std::vector<std::int64_t> score(n, 0);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (y != x) score[x] += maximize_agreement ? w.at(x, y) : w.at(y, x);
    }
  }
  std::vector<bool> placed(n, false);
  Ranking result;
  result.order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int x = 0; x < n; ++x) {
      if (placed[x]) continue;
      if (pick < 0 ||
          (maximize_agreement ? score[x] > score[pick] : score[x] < score[pick])) {
        pick = x;
      }
    }
    placed[pick] = true;
    result.order.push_back(pick);
    for (int x = 0; x < n; ++x) {
      if (!placed[x]) score[x] -= maximize_agreement ? w.at(x, pick) : w.at(pick, x);
    }
  }
  return finish(std::move(result), profile, w, start, method);
}

}  // namespace

HeuristicResult greedy_max_agreement(const Profile& profile) {
  return greedy_front_to_back(profile, true, "max-agreement");
}

HeuristicResult greedy_min_regret(const Profile& profile) {
  return greedy_front_to_back(profile, false, "min-regret");
}

void DecorConfig::validate() const {
  if (population_size < 4) {
    throw InvalidInputError("decor: population_size must be >= 4 "
                            "(differential mutation needs four distinct members)");
  }
  if (stall_limit < 1) throw InvalidInputError("decor: stall_limit must be >= 1");
  if (crossover_rate <= 0.0 || crossover_rate >= 1.0) {
    throw InvalidInputError("decor: crossover_rate must be in (0, 1)");
  }
  if (differential_weight <= 0.0 || differential_weight >= 2.0) {
    throw InvalidInputError("decor: differential_weight must be in (0, 2)");
  }
  if (max_generations < 1) throw InvalidInputError("decor: max_generations must be >= 1");
}

namespace {

Ranking argsort_decode(const std::vector<double>& score) {
  Ranking r = Ranking::identity(static_cast<int>(score.size()));
  std::sort(r.order.begin(), r.order.end(), [&](Item a, Item b) {
    return score[a] < score[b] || (score[a] == score[b] && a < b);
  });
  return r;
}

}  // namespace

HeuristicResult decor(const Profile& profile, const DecorConfig& config) {
  profile.validate();
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const PrecedenceMatrix w = precedence_matrix(profile);
  const int n = profile.n;
  const int pop_size = config.population_size;
  Rng rng(config.seed);

  std::vector<std::vector<double>> population(pop_size);
  std::vector<std::int64_t> member_cost(pop_size);
  for (int k = 0; k < pop_size; ++k) {
    std::vector<double>& vec = population[k];
    vec.resize(n);
    if (k < profile.m()) {
      // Position vector of base ranking k, jittered by less than half a
      // rank step so it decodes back to the same permutation.
      const std::vector<Item> pos = profile.rankings[k].positions();
      for (int x = 0; x < n; ++x) {
        vec[x] = pos[x] + 0.5 * (rng.next_double() - 0.5);
      }
    } else {
      for (int x = 0; x < n; ++x) vec[x] = rng.next_double() * n;
    }
    member_cost[k] = kemeny_numerator_via_precedence(argsort_decode(vec), w);
  }

  // Best-ever starts at the best base ranking so the result can never be
  // worse than any input ranking, even when m exceeds the population size.
  std::int64_t best_cost = member_cost[0];
  std::vector<double> best_vec = population[0];
  for (int k = 1; k < pop_size; ++k) {
    if (member_cost[k] < best_cost) {
      best_cost = member_cost[k];
      best_vec = population[k];
    }
  }
  for (const Ranking& base : profile.rankings) {
    const std::int64_t c = kemeny_numerator_via_precedence(base, w);
    if (c < best_cost) {
      best_cost = c;
      const std::vector<Item> pos = base.positions();
      best_vec.assign(pos.begin(), pos.end());
    }
  }

  std::vector<double> trial(n);
  int stall = 0;
  for (int gen = 0; gen < config.max_generations && stall < config.stall_limit; ++gen) {
    bool improved = false;
    for (int i = 0; i < pop_size; ++i) {
      int a, b, c;
      do { a = static_cast<int>(rng.next_below(pop_size)); } while (a == i);
      do { b = static_cast<int>(rng.next_below(pop_size)); } while (b == i || b == a);
      do { c = static_cast<int>(rng.next_below(pop_size)); } while (c == i || c == a || c == b);
      const int forced = static_cast<int>(rng.next_below(n));
      for (int x = 0; x < n; ++x) {
        const double mutant = population[a][x] +
                              config.differential_weight *
                                  (population[b][x] - population[c][x]);
        trial[x] = (x == forced || rng.next_double() < config.crossover_rate)
                       ? mutant
                       : population[i][x];
      }
      const std::int64_t cost = kemeny_numerator_via_precedence(argsort_decode(trial), w);
      if (cost < member_cost[i]) {
        population[i] = trial;
        member_cost[i] = cost;
        if (cost < best_cost) {
          best_cost = cost;
          best_vec = trial;
          improved = true;
        }
      }
    }
    stall = improved ? 0 : stall + 1;
  }

  return finish(argsort_decode(best_vec), profile, w, start, "decor");
}

}  // namespace kemeny
