#pragma once

// Independent oracles for the numerical routines under test. Everything here
// is written as plain direct summation / explicit matrix arithmetic, kept
// deliberately separate from the library's implementation paths.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "haven/date.hpp"
#include "haven/rng.hpp"
#include "haven/series.hpp"

namespace oracle {

constexpr double kTwoPi = 6.283185307179586476925;

// Direct-summation GARCH(1,1) Gaussian log-likelihood.
inline double garch_loglik(double mu, double omega, double alpha, double beta,
                           const std::vector<double>& r, double h1) {
    std::vector<double> h(r.size());
    h[0] = h1;
    for (std::size_t t = 1; t < r.size(); ++t) {
        const double e = r[t - 1] - mu;
        h[t] = omega + alpha * e * e + beta * h[t - 1];
    }
    double ll = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) {
        const double e = r[t] - mu;
        ll += -0.5 * (std::log(kTwoPi) + std::log(h[t]) + e * e / h[t]);
    }
    return ll;
}

// Full 2x2 matrices for the DCC recursion / likelihood oracle.
struct M2 {
    double a11, a12, a21, a22;
};

inline M2 m2_add(M2 x, M2 y) { return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22}; }
inline M2 m2_scale(double s, M2 x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }
inline M2 m2_outer(double u, double v) { return {u * u, u * v, v * u, v * v}; }

inline std::vector<M2> dcc_q_path(double a, double b, M2 q_bar,
                                  const std::vector<double>& phi_a,
                                  const std::vector<double>& phi_b) {
    std::vector<M2> q(phi_a.size());
    q[0] = q_bar;
    for (std::size_t t = 1; t < phi_a.size(); ++t) {
        const M2 news = m2_outer(phi_a[t - 1], phi_b[t - 1]);
        q[t] = m2_add(m2_add(m2_scale(1.0 - a - b, q_bar), m2_scale(a, news)),
                      m2_scale(b, q[t - 1]));
    }
    return q;
}

inline std::vector<double> dcc_rho_path(double a, double b, M2 q_bar,
                                        const std::vector<double>& phi_a,
                                        const std::vector<double>& phi_b) {
    const std::vector<M2> q = dcc_q_path(a, b, q_bar, phi_a, phi_b);
    std::vector<double> rho(q.size());
    for (std::size_t t = 0; t < q.size(); ++t)
        rho[t] = q[t].a12 / std::sqrt(q[t].a11 * q[t].a22);
    return rho;
}

// Correlation part of the Gaussian likelihood evaluated with explicit 2x2
// inverses, term by term.
inline double dcc_loglik(double a, double b, M2 q_bar, const std::vector<double>& phi_a,
                         const std::vector<double>& phi_b) {
    const std::vector<double> rho = dcc_rho_path(a, b, q_bar, phi_a, phi_b);
    double ll = 0.0;
    for (std::size_t t = 0; t < rho.size(); ++t) {
        const double r = rho[t];
        const M2 R{1.0, r, r, 1.0};
        const double det = R.a11 * R.a22 - R.a12 * R.a21;
        const M2 Rinv{R.a22 / det, -R.a12 / det, -R.a21 / det, R.a11 / det};
        const double fa = phi_a[t], fb = phi_b[t];
        const double quad = fa * (Rinv.a11 * fa + Rinv.a12 * fb) +
                            fb * (Rinv.a21 * fa + Rinv.a22 * fb);
        ll += -0.5 * (std::log(det) + quad - (fa * fa + fb * fb));
    }
    return ll;
}

// Closed-form Dickey-Fuller t-ratio with a constant and zero lags:
// dy_t = c + g * y_{t-1} + e_t, t-ratio on g via the two-variable formulas.
inline double df_tstat_constant(const std::vector<double>& y) {
    const std::size_t n = y.size() - 1;  // regression observations
    std::vector<double> dy(n), ylag(n);
    for (std::size_t t = 0; t < n; ++t) {
        dy[t] = y[t + 1] - y[t];
        ylag[t] = y[t];
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        mx += ylag[t];
        my += dy[t];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        sxx += (ylag[t] - mx) * (ylag[t] - mx);
        sxy += (ylag[t] - mx) * (dy[t] - my);
    }
    const double g = sxy / sxx;
    const double c = my - g * mx;
    double rss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double e = dy[t] - c - g * ylag[t];
        rss += e * e;
    }
    const double s2 = rss / static_cast<double>(n - 2);
    const double se = std::sqrt(s2 / sxx);
    return g / se;
}

// Chi-square upper tails in closed form for even df and df = 1.
inline double chi2_upper_df1(double x) { return std::erfc(std::sqrt(x / 2.0)); }
inline double chi2_upper_df2(double x) { return std::exp(-x / 2.0); }
inline double chi2_upper_df4(double x) { return std::exp(-x / 2.0) * (1.0 + x / 2.0); }

// Simple DGP builders used by the Monte Carlo checks.
inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    haven::Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    return x;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    haven::Rng rng(seed);
    std::vector<double> x(n);
    double level = 0.0;
    for (double& v : x) {
        level += rng.normal();
        v = level;
    }
    return x;
}

inline haven::ReturnSeries series_of(const std::vector<double>& values,
                                     const std::string& id = "test",
                                     haven::Date start = haven::Date::from_ymd(2020, 1, 1)) {
    haven::ReturnSeries r;
    r.asset_id = id;
    r.obs.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        r.obs.push_back({start.plus_days(static_cast<int>(i)), values[i]});
    return r;
}

}  // namespace oracle
