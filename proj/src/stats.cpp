#include "haven/stats.hpp"

#include <cmath>
#include <limits>

#include "haven/errors.hpp"

namespace haven {

double mean(std::span<const double> x) {
    if (x.empty()) throw TooShort("mean: empty series");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw TooShort("sample_variance: need at least 2 observations");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) {
        const double d = v - m;
        s += d * d;
    }
    return s / static_cast<double>(n - 1);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DimensionMismatch("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw TooShort("pearson: need at least 2 observations");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        throw DegenerateSeries("pearson: zero-variance series");
    return sxy / std::sqrt(sxx * syy);
}

double sample_skewness(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw TooShort("sample_skewness: need at least 3 observations");
    const double m = mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 <= 0.0) throw DegenerateSeries("sample_skewness: zero variance");
    return m3 / std::pow(m2, 1.5);
}

double sample_kurtosis(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) throw TooShort("sample_kurtosis: need at least 4 observations");
    const double m = mean(x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (m2 <= 0.0) throw DegenerateSeries("sample_kurtosis: zero variance");
    return m4 / (m2 * m2);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_two_sided_p(double t) {
    return 2.0 * normal_cdf(-std::fabs(t));
}

namespace {

// Regularized incomplete gamma P(a,x) by series, Q(a,x) by continued fraction
// (the usual split at x = a + 1).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi_square_upper_tail(double x, int df) {
    if (df < 1) throw InvalidDesign("chi_square_upper_tail: df must be >= 1");
    if (!(x == x)) throw NonFinite("chi_square_upper_tail: NaN statistic");
    if (x <= 0.0) return 1.0;
    if (!std::isfinite(x)) return 0.0;
    const double a = 0.5 * static_cast<double>(df);
    const double xx = 0.5 * x;
    if (xx < a + 1.0) return 1.0 - gamma_p_series(a, xx);
    return gamma_q_contfrac(a, xx);
}

}  // namespace haven
