#pragma once

#include <span>

#include "remixsig/errors.hpp"

namespace remixsig {

struct TooFewValues final : Error {
    using Error::Error;
};

/// Both group variances are zero; the t statistic is undefined.
struct ZeroStandardError final : Error {
    using Error::Error;
};

/// Sufficient statistics of one sample: count, mean, and sample variance
/// (n-1 denominator).
struct GroupSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
};

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_two_sided = 1.0;
    double ci_low = 0.0;   // confidence interval on mean_a - mean_b
    double ci_high = 0.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
};

/// Two-pass mean/variance. Throws TooFewValues for fewer than 2 values.
GroupSummary summarize(std::span<const double> values);

/// Welch two-sample t-test with Welch-Satterthwaite degrees of freedom,
/// two-sided p-value, and a confidence interval on the mean difference.
WelchResult welch_test(const GroupSummary& a, const GroupSummary& b, double confidence = 0.95);

WelchResult welch_test(std::span<const double> a, std::span<const double> b,
                       double confidence = 0.95);

/// Regularized incomplete beta I_x(a,b) by continued fraction, with the
/// symmetry switch at x > (a+1)/(a+b+2). Absolute error <= 1e-12 over the
/// tested domain.
double regularized_incomplete_beta(double a, double b, double x);

/// Student-t CDF via x = df/(df + t^2): for t >= 0 it is
/// 1 - I_x(df/2, 1/2)/2, mirrored for t < 0.
double t_cdf(double t, double df);

/// Inverse of t_cdf: bracketed bisection refined with Newton steps;
/// |t_cdf(result, df) - p| <= 1e-12.
double t_quantile(double p, double df);

}  // namespace remixsig
