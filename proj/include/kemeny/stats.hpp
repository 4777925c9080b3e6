#pragma once

#include <span>

namespace kemeny {

// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
// Continued-fraction evaluation, accurate to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with df degrees of freedom, via the
// incomplete-beta identity.
double student_t_cdf(double t, int df);

struct PairedTTest {
  double t = 0.0;
  double p = 0.0;  // one-sided P(T_{k-1} <= t), alternative "a < b"
  int df = 0;
};

// Paired one-sided t test on d_i = a_i - b_i with sample standard deviation
// (k-1 denominator). Small p means a is significantly smaller than b.
// Throws InvalidInputError on length mismatch or k < 2, ZeroVarianceError
// when all differences are equal (the statistic is undefined; callers apply
// their own degenerate rule).
PairedTTest paired_t_test_one_sided(std::span<const double> a,
                                    std::span<const double> b);

}  // namespace kemeny
