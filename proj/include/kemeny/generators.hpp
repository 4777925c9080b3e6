#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kemeny/ranking.hpp"

namespace kemeny {

enum class GenKind { kRandom, kRepeat, kJiggling };

const char* to_string(GenKind kind);
GenKind gen_kind_from_string(const std::string& name);

// Seeded description of a synthetic profile. Equal specs (including seed)
// generate bit-identical profiles on every platform.
struct GeneratorSpec {
  GenKind kind = GenKind::kRandom;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  // repeat kind: how many rankings copy the reference; when absent, drawn
  // uniformly from {1,...,m}.
  std::optional<int> repeat_count;
  // jiggling kind: the scaling constant in exp(M - |p_j - p_i|). Cancels in
  // the normalized distribution; kept configurable so that can be asserted.
  double scale_m = 1.0;
  int swap_passes = 1;

  void validate() const;  // throws InvalidInputError
};

Profile gen_random(const GeneratorSpec& spec);
// reference_out, when non-null, receives the reference permutation the
// generated rankings copy (repeat) or perturb (jiggling).
Profile gen_repeat(const GeneratorSpec& spec, Ranking* reference_out = nullptr);
Profile gen_jiggling(const GeneratorSpec& spec, Ranking* reference_out = nullptr);

// Dispatch on spec.kind.
Profile generate(const GeneratorSpec& spec);

// Normalized categorical distribution over target positions for an item
// currently at position p_i: P(j) = exp(M - |p_j - p_i|) / sum_k(...), with
// P(p_i) = 0. Exposed so the M-invariance of the sampler can be asserted
// analytically.
std::vector<double> jiggling_swap_distribution(int n, int p_i, double scale_m);

// A parsed numeric metric table: n rows (items) x m columns (metrics).
struct MetricTable {
  std::vector<std::string> row_labels;     // size n
  std::vector<std::string> column_names;   // size m
  std::vector<std::vector<double>> columns;  // m columns of n values

  int rows() const { return columns.empty() ? 0 : static_cast<int>(columns[0].size()); }
  int cols() const { return static_cast<int>(columns.size()); }
};

enum class SortDirection { kAscending, kDescending };

// One base ranking per column: items sorted by column value in the stated
// direction, ties broken by ascending row index (stable).
Profile rankings_from_metric_table(const MetricTable& table,
                                   const std::vector<SortDirection>& directions);

}  // namespace kemeny
