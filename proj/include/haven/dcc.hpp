#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

#include "haven/garch.hpp"
#include "haven/series.hpp"

namespace haven {

/// DCC(1,1) news (a) and decay (b) coefficients; a, b >= 0, a + b < 1.
struct DccParams {
    double a = 0.0;
    double b = 0.0;
};

void validate_dcc_params(const DccParams& p);

/// Symmetric 2x2 matrix, the shape of every Q in the pairwise recursion.
struct Sym2 {
    double v11 = 1.0;
    double v12 = 0.0;
    double v22 = 1.0;

    [[nodiscard]] bool positive_definite() const {
        return v11 > 0.0 && v22 > 0.0 && v11 * v22 - v12 * v12 > 0.0;
    }
    [[nodiscard]] double correlation() const { return v12 / std::sqrt(v11 * v22); }
};

/// Time-varying correlation between one (asset, index) pair.
struct CorrelationPath {
    std::string asset_id;
    std::string index_id;
    std::vector<Observation> obs;  // value = rho_t in [-1, 1]
};

/// Correlation targeting: unit diagonal, off-diagonal = sample correlation
/// of the standardized residual pair. Throws DegenerateSeries / TooShort.
Sym2 estimate_q_bar(std::span<const double> phi_a, std::span<const double> phi_b);

struct DccRecursion {
    std::vector<Sym2> q_path;
    std::vector<double> rho_path;
};

/// Q_1 = q_bar; Q_t = (1-a-b) q_bar + a phi_{t-1} phi_{t-1}' + b Q_{t-1};
/// rho_t = q12_t / sqrt(q11_t q22_t).
DccRecursion dcc_recursion(const DccParams& p, const Sym2& q_bar,
                           std::span<const double> phi_a, std::span<const double> phi_b);

/// Correlation part of the Gaussian likelihood,
/// sum_t -0.5 [ln|R_t| + phi_t' R_t^-1 phi_t - phi_t' phi_t], with the 2x2
/// closed form |R_t| = 1 - rho_t^2. rho is clamped to +/-0.9999 inside;
/// clamp_count reports how often that fired.
double dcc_loglik(const DccParams& p, const Sym2& q_bar, std::span<const double> phi_a,
                  std::span<const double> phi_b, int* clamp_count = nullptr);

struct DccFitOptions {
    double tolerance = 1e-8;
    int max_iter = 5000;
    int restarts = 3;
    std::uint64_t seed = 1;
};

struct DccFit {
    DccParams params;
    Sym2 q_bar;
    std::vector<Sym2> q_path;
    CorrelationPath rho_path;
    double loglik = 0.0;
    bool converged = false;
    bool degenerate = false;  // |q_bar off-diagonal| at 1: correlation path is pinned
    int iterations = 0;
    int rho_clamps = 0;
};

/// Second-stage fit over the pair's standardized residuals, q_bar held at
/// its targeted value. A perfectly (anti)correlated pair short-circuits to a
/// degenerate fit instead of an optimizer run.
DccFit fit_dcc(const AlignedPair& pair, const GarchFit& garch_a, const GarchFit& garch_b,
               const DccFitOptions& opts = {});

/// Generate a correlated pair of GARCH return series by running the model
/// recursions generatively. Deterministic for a given seed.
std::pair<ReturnSeries, ReturnSeries> simulate_dcc(const GarchParams& garch_a,
                                                   const GarchParams& garch_b,
                                                   const DccParams& dcc, const Sym2& q_bar,
                                                   std::size_t t_count, std::uint64_t seed,
                                                   Date start_date = Date::from_ymd(2020, 1, 1));

}  // namespace haven
