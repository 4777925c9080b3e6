#include "kemeny/stats.hpp"

#include <cmath>
#include <string>

#include "kemeny/error.hpp"

namespace kemeny {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidInputError("incomplete beta: a and b must be positive");
  }
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw InvalidInputError("incomplete beta: x must be in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int df) {
  if (df < 1) throw InvalidInputError("student_t_cdf: df must be >= 1");
  if (std::isnan(t)) return t;
  const double nu = df;
  const double x = nu / (nu + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(nu / 2.0, 0.5, x);
  return t > 0.0 ? 1.0 - tail : tail;
}

PairedTTest paired_t_test_one_sided(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInputError("paired t test: length mismatch (" +
                            std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
  }
  const int k = static_cast<int>(a.size());
  if (k < 2) throw InvalidInputError("paired t test: needs k >= 2 pairs");

  double mean = 0.0;
  for (int i = 0; i < k; ++i) mean += a[i] - b[i];
  mean /= k;
  double ss = 0.0;
  for (int i = 0; i < k; ++i) {
    const double dev = (a[i] - b[i]) - mean;
    ss += dev * dev;
  }
  if (ss == 0.0) {
    throw ZeroVarianceError("paired t test: all differences are equal");
  }
  const double sd = std::sqrt(ss / (k - 1));

  PairedTTest result;
  result.df = k - 1;
  result.t = mean / (sd / std::sqrt(static_cast<double>(k)));
  result.p = student_t_cdf(result.t, result.df);
  return result;
}

}  // namespace kemeny
