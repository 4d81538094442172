#pragma once

#include <cstdint>
#include <span>

#include "haven/series.hpp"

namespace haven {

/// GARCH(1,1) with a constant mean: r_t = mu + e_t, e_t = sqrt(h_t) u_t,
/// h_t = omega + alpha e_{t-1}^2 + beta h_{t-1}, u_t iid standard normal.
struct GarchParams {
    double mu = 0.0;
    double omega = 1.0;  // > 0
    double alpha = 0.0;  // >= 0
    double beta = 0.0;   // >= 0, alpha + beta < 1
};

/// Throws Error when the parameter invariants are violated.
void validate_garch_params(const GarchParams& p);

/// Innovation distribution u_t. Only the Gaussian QML case exists here;
/// the enum pins that contract for call sites and serialized output.
enum class Innovation { Gaussian };

/// How h_1 is seeded before the recursion takes over.
struct VarianceInit {
    enum class Mode { Unconditional, SampleVariance, Fixed } mode = Mode::Unconditional;
    double value = 0.0;

    static VarianceInit unconditional() { return {Mode::Unconditional, 0.0}; }
    static VarianceInit sample_variance() { return {Mode::SampleVariance, 0.0}; }
    static VarianceInit fixed(double h1) { return {Mode::Fixed, h1}; }
};

/// Conditional-variance path for the given parameters (h_t > 0 throughout).
std::vector<double> garch_variance_path(const GarchParams& p, std::span<const double> r,
                                        VarianceInit init = VarianceInit::unconditional());

/// Gaussian log-likelihood sum_t -0.5 [ln(2 pi) + ln h_t + e_t^2 / h_t].
/// Throws NonFinite when the recursion overflows or degenerates.
double garch_loglik(const GarchParams& p, std::span<const double> r,
                    VarianceInit init = VarianceInit::unconditional());

struct GarchFitOptions {
    double tolerance = 1e-8;  // relative log-likelihood change
    int max_iter = 5000;
    int restarts = 3;  // jittered restarts on top of the base start
    std::uint64_t seed = 1;
    Innovation innovation = Innovation::Gaussian;
};

struct GarchFit {
    GarchParams params;
    std::vector<double> h;              // conditional variances, one per return
    std::vector<double> std_residuals;  // (r_t - mu) / sqrt(h_t)
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Quasi-maximum-likelihood fit. h_1 is pinned to the sample variance of the
/// demeaned series. Feasibility is kept by optimizing omega on a log scale
/// and (alpha, beta) through a logistic map onto the simplex interior
/// {alpha, beta >= 0, alpha + beta <= 0.999}; fits landing within 1e-4 of
/// that persistence cap are flagged not converged.
GarchFit fit_garch11(std::span<const double> r, const GarchFitOptions& opts = {});
GarchFit fit_garch11(const ReturnSeries& r, const GarchFitOptions& opts = {});

/// Generate T returns from the model, h_1 = omega / (1 - alpha - beta).
/// Deterministic for a given seed.
ReturnSeries simulate_garch11(const GarchParams& p, std::size_t t_count, std::uint64_t seed,
                              const std::string& asset_id = "sim",
                              Date start_date = Date::from_ymd(2020, 1, 1));

}  // namespace haven
