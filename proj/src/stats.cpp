#include "remixsig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace remixsig {

namespace {

/// Continued fraction for the incomplete beta (Lentz's method), valid for
/// x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        int m2 = 2 * m;
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
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

/// Two-sided survival probability P(|T| >= |t|) for Student-t, computed
/// directly as I_x(df/2, 1/2) with x = df/(df+t^2). Avoids the 1-(1-x)
/// cancellation that t_cdf arithmetic would introduce for tiny p.
double t_two_sided_p(double t, double df) {
    double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

}  // namespace

GroupSummary summarize(std::span<const double> values) {
    if (values.size() < 2) throw TooFewValues("summarize: need at least 2 values");
    double sum = 0.0;
    for (double v : values) sum += v;
    double mean = sum / values.size();
    double ss = 0.0;
    for (double v : values) {
        double d = v - mean;
        ss += d * d;
    }
    GroupSummary g;
    g.n = values.size();
    g.mean = mean;
    g.variance = ss / (values.size() - 1);
    return g;
}

WelchResult welch_test(const GroupSummary& a, const GroupSummary& b, double confidence) {
    if (a.n < 2 || b.n < 2) throw TooFewValues("welch_test: each group needs n >= 2");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw DomainError("welch_test: confidence must lie in (0, 1)");
    double va = a.variance / a.n;
    double vb = b.variance / b.n;
    double se2 = va + vb;
    if (se2 <= 0.0) throw ZeroStandardError("welch_test: both groups have zero variance");
    double se = std::sqrt(se2);
    double diff = a.mean - b.mean;

    WelchResult r;
    r.mean_a = a.mean;
    r.mean_b = b.mean;
    r.t = diff / se;
    r.df = se2 * se2 / (va * va / (a.n - 1) + vb * vb / (b.n - 1));
    r.p_two_sided = t_two_sided_p(r.t, r.df);
    double tq = t_quantile(0.5 * (1.0 + confidence), r.df);
    r.ci_low = diff - tq * se;
    r.ci_high = diff + tq * se;
    return r;
}

WelchResult welch_test(std::span<const double> a, std::span<const double> b, double confidence) {
    return welch_test(summarize(a), summarize(b), confidence);
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("regularized_incomplete_beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("regularized_incomplete_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_cdf(double t, double df) {
    if (!(df > 0.0)) throw DomainError("t_cdf: df must be positive");
    if (t == 0.0) return 0.5;
    double p_tail = 0.5 * t_two_sided_p(t, df);
    return t > 0.0 ? 1.0 - p_tail : p_tail;
}

double t_quantile(double p, double df) {
    if (!(df > 0.0)) throw DomainError("t_quantile: df must be positive");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("t_quantile: p must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    // Reduce to the upper half by symmetry.
    bool flip = p < 0.5;
    double pu = flip ? 1.0 - p : p;

    // Bracket: normal-ish start, then grow until t_cdf(hi) >= pu.
    double lo = 0.0;
    double hi = 2.0;
    while (t_cdf(hi, df) < pu) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    // Bisection to a close bracket, then Newton polish on the smooth CDF.
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (t_cdf(mid, df) < pu)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-9 * std::max(1.0, lo)) break;
    }
    double t = 0.5 * (lo + hi);
    double ln_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                     0.5 * std::log(df * M_PI);
    for (int i = 0; i < 4; ++i) {
        double pdf = std::exp(ln_norm - 0.5 * (df + 1.0) * std::log1p(t * t / df));
        if (pdf <= 0.0) break;
        double step = (t_cdf(t, df) - pu) / pdf;
        t -= step;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(t))) break;
    }
    return flip ? -t : t;
}

}  // namespace remixsig
