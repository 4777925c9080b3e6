#include "kemeny/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kemeny/error.hpp"
#include "kemeny/rng.hpp"

namespace kemeny {

const char* to_string(GenKind kind) {
  switch (kind) {
    case GenKind::kRandom: return "random";
    case GenKind::kRepeat: return "repeat";
    case GenKind::kJiggling: return "jiggling";
  }
  return "?";
}

GenKind gen_kind_from_string(const std::string& name) {
  if (name == "random") return GenKind::kRandom;
  if (name == "repeat") return GenKind::kRepeat;
  if (name == "jiggling") return GenKind::kJiggling;
  throw InvalidInputError("unknown generator kind: " + name);
}

void GeneratorSpec::validate() const {
  if (n < 2) throw InvalidInputError("generator: n must be >= 2");
  if (m < 1) throw InvalidInputError("generator: m must be >= 1");
  if (repeat_count && (*repeat_count < 1 || *repeat_count > m)) {
    throw InvalidInputError("generator: repeat_count must be in [1, m]");
  }
  if (swap_passes < 1) throw InvalidInputError("generator: swap_passes must be >= 1");
}

namespace {

Ranking uniform_permutation(int n, Rng& rng) {
  Ranking r = Ranking::identity(n);
  rng.shuffle(r.order.begin(), r.order.end());
  return r;
}

}  // namespace

Profile gen_random(const GeneratorSpec& spec) {
  spec.validate();
  if (spec.kind != GenKind::kRandom) throw InvalidInputError("gen_random: wrong kind");
  Rng rng(spec.seed);
  Profile p;
  p.n = spec.n;
  p.rankings.reserve(spec.m);
  for (int k = 0; k < spec.m; ++k) p.rankings.push_back(uniform_permutation(spec.n, rng));
  return p;
}

Profile gen_repeat(const GeneratorSpec& spec, Ranking* reference_out) {
  spec.validate();
  if (spec.kind != GenKind::kRepeat) throw InvalidInputError("gen_repeat: wrong kind");
  Rng rng(spec.seed);
  const Ranking reference = uniform_permutation(spec.n, rng);
  if (reference_out) *reference_out = reference;
  const int copies = spec.repeat_count
                         ? *spec.repeat_count
                         : 1 + static_cast<int>(rng.next_below(spec.m));
  Profile p;
  p.n = spec.n;
  p.rankings.reserve(spec.m);
  for (int k = 0; k < copies; ++k) p.rankings.push_back(reference);
  for (int k = copies; k < spec.m; ++k) {
    p.rankings.push_back(uniform_permutation(spec.n, rng));
  }
  return p;
}

std::vector<double> jiggling_swap_distribution(int n, int p_i, double scale_m) {
  if (n < 2 || p_i < 0 || p_i >= n) {
    throw InvalidInputError("jiggling_swap_distribution: bad position");
  }
  std::vector<double> w(n, 0.0);
  double total = 0.0;
  for (int p_j = 0; p_j < n; ++p_j) {
    if (p_j == p_i) continue;
    w[p_j] = std::exp(scale_m - std::abs(p_j - p_i));
    total += w[p_j];
  }
  for (double& x : w) x /= total;
  return w;
}

Profile gen_jiggling(const GeneratorSpec& spec, Ranking* reference_out) {
  spec.validate();
  if (spec.kind != GenKind::kJiggling) throw InvalidInputError("gen_jiggling: wrong kind");
  Rng rng(spec.seed);
  const int n = spec.n;
  const Ranking reference = uniform_permutation(n, rng);
  if (reference_out) *reference_out = reference;

  // exp(M - d) by distance d; only relative weights matter.
  std::vector<double> expw(n);
  for (int d = 1; d < n; ++d) expw[d] = std::exp(spec.scale_m - d);

  Profile p;
  p.n = n;
  p.rankings.reserve(spec.m);
  std::vector<Item> visit(n);
  std::iota(visit.begin(), visit.end(), 0);

  for (int voter = 0; voter < spec.m; ++voter) {
    Ranking r = reference;
    std::vector<Item> pos = r.positions();
    for (int pass = 0; pass < spec.swap_passes; ++pass) {
      rng.shuffle(visit.begin(), visit.end());
      for (Item x : visit) {
        const int p_i = pos[x];  // current position, re-read after earlier swaps
        double total = 0.0;
        for (int p_j = 0; p_j < n; ++p_j) {
          if (p_j != p_i) total += expw[std::abs(p_j - p_i)];
        }
        double u = rng.next_double() * total;
        int target = p_i == 0 ? 1 : 0;
        for (int p_j = 0; p_j < n; ++p_j) {
          if (p_j == p_i) continue;
          u -= expw[std::abs(p_j - p_i)];
          if (u <= 0.0) {
            target = p_j;
            break;
          }
        }
        const Item other = r.order[target];
        std::swap(r.order[p_i], r.order[target]);
        pos[x] = target;
        pos[other] = p_i;
      }
    }
    p.rankings.push_back(std::move(r));
  }
  return p;
}

Profile generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GenKind::kRandom: return gen_random(spec);
    case GenKind::kRepeat: return gen_repeat(spec);
    case GenKind::kJiggling: return gen_jiggling(spec);
  }
  throw InvalidInputError("generate: unknown kind");
}

Profile rankings_from_metric_table(const MetricTable& table,
                                   const std::vector<SortDirection>& directions) {
  const int n = table.rows();
  const int m = table.cols();
  if (n < 1 || m < 1) throw IngestError("metric table is empty");
  if (static_cast<int>(directions.size()) != m) {
    throw InvalidInputError("expected " + std::to_string(m) +
                            " sort directions, got " +
                            std::to_string(directions.size()));
  }
  Profile p;
  p.n = n;
  p.item_labels = table.row_labels;
  p.rankings.reserve(m);
  for (int c = 0; c < m; ++c) {
    const std::vector<double>& col = table.columns[c];
    if (static_cast<int>(col.size()) != n) {
      throw IngestError("column " + std::to_string(c) + " has " +
                        std::to_string(col.size()) + " values, expected " +
                        std::to_string(n));
    }
    for (int r = 0; r < n; ++r) {
      if (std::isnan(col[r])) {
        throw IngestError("missing value at row " + std::to_string(r) +
                          ", column " + std::to_string(c));
      }
    }
    Ranking rank = Ranking::identity(n);
    const bool asc = directions[c] == SortDirection::kAscending;
    // stable: equal values keep ascending row order
    std::stable_sort(rank.order.begin(), rank.order.end(),
                     [&](Item a, Item b) {
                       return asc ? col[a] < col[b] : col[a] > col[b];
                     });
    p.rankings.push_back(std::move(rank));
  }
  return p;
}

}  // namespace kemeny
