#include "haven/unit_root.hpp"

#include <cmath>
#include <limits>

#include "haven/errors.hpp"
#include "haven/linalg.hpp"

namespace haven {

namespace {

// MacKinnon (2010)-style response-surface coefficients for the tau
// distribution, one variable. Rows: 1%, 5%, 10%. cv = b0 + b1/T + b2/T^2 + b3/T^3.
struct RsRow { double b0, b1, b2, b3; };

constexpr RsRow kTauNone[3] = {
    {-2.56574, -2.2358, -3.627, 0.0},
    {-1.94100, -0.2686, -3.365, 31.223},
    {-1.61682, 0.2656, -2.714, 25.364},
};
constexpr RsRow kTauConst[3] = {
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
};
constexpr RsRow kTauTrend[3] = {
    {-3.95877, -9.0531, -28.428, -134.155},
    {-3.41049, -4.3904, -9.036, -45.374},
    {-3.12705, -2.5856, -3.925, -22.380},
};

int det_terms(DeterministicSpec spec) {
    switch (spec) {
        case DeterministicSpec::None: return 0;
        case DeterministicSpec::Constant: return 1;
        case DeterministicSpec::ConstantTrend: return 2;
    }
    return 1;
}

int schwert_bound(std::size_t n) {
    return static_cast<int>(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25));
}

// Build the ADF regression on observations t = start .. n-1:
// dy_t on [const, trend, y_{t-1}, dy_{t-1} .. dy_{t-p}].
void build_adf_design(std::span<const double> y, int p, int start, DeterministicSpec spec,
                      std::vector<double>& dep, Mat& X) {
    const int n = static_cast<int>(y.size());
    const int rows = n - start;
    const int kd = det_terms(spec);
    const int k = kd + 1 + p;
    dep.assign(rows, 0.0);
    X = Mat(rows, k);
    for (int t = start; t < n; ++t) {
        const int row = t - start;
        dep[row] = y[t] - y[t - 1];
        int c = 0;
        if (spec != DeterministicSpec::None) X(row, c++) = 1.0;
        if (spec == DeterministicSpec::ConstantTrend) X(row, c++) = static_cast<double>(t);
        X(row, c++) = y[t - 1];
        for (int lag = 1; lag <= p; ++lag)
            X(row, c++) = y[t - lag] - y[t - lag - 1];
    }
}

std::optional<double> decide_rejection(double stat, const std::map<double, double>& cv) {
    for (double level : {0.01, 0.05, 0.10})
        if (stat < cv.at(level)) return level;
    return std::nullopt;
}

struct DfRegression {
    double t_stat;       // t-ratio on y_{t-1}
    double rho;          // coefficient on y_{t-1}
    double rho_se;
    double sigma2;       // s^2 = RSS/(n-k)
    std::vector<double> resid;
    int n_obs;
};

DfRegression run_df_regression(std::span<const double> y, int p, int start,
                               DeterministicSpec spec) {
    std::vector<double> dep;
    Mat X;
    build_adf_design(y, p, start, spec, dep, X);
    const OlsSolution ols = ols_solve(dep, X);
    const int kd = det_terms(spec);
    DfRegression out;
    out.rho = ols.coef[kd];
    out.rho_se = ols.se_classical[kd];
    out.t_stat = out.rho / out.rho_se;
    out.sigma2 = ols.sigma2;
    out.resid = ols.resid;
    out.n_obs = static_cast<int>(ols.n);
    return out;
}

}  // namespace

std::map<double, double> mackinnon_critical_values(DeterministicSpec spec, int t_obs) {
    const RsRow* table = kTauConst;
    if (spec == DeterministicSpec::None) table = kTauNone;
    if (spec == DeterministicSpec::ConstantTrend) table = kTauTrend;
    const double t = static_cast<double>(t_obs);
    std::map<double, double> cv;
    const double levels[3] = {0.01, 0.05, 0.10};
    for (int i = 0; i < 3; ++i) {
        const RsRow& r = table[i];
        cv[levels[i]] = r.b0 + r.b1 / t + r.b2 / (t * t) + r.b3 / (t * t * t);
    }
    return cv;
}

UnitRootResult adf_test(std::span<const double> y, DeterministicSpec spec, LagPolicy lag_policy) {
    const int n = static_cast<int>(y.size());
    if (n < 27) throw TooShort("adf_test: series too short");

    int p = 0;
    if (lag_policy.mode == LagPolicy::Mode::Fixed) {
        p = lag_policy.k;
        if (p < 0) throw InvalidDesign("adf_test: negative lag count");
    } else {
        int k_max = lag_policy.k >= 0 ? lag_policy.k : schwert_bound(y.size());
        // Effective sample must keep at least 25 observations and stay taller
        // than the widest candidate design.
        while (k_max > 0 &&
               (n - (k_max + 1) < 25 || n - (k_max + 1) <= det_terms(spec) + 1 + k_max))
            --k_max;
        // AIC comparison over a common sample starting at k_max + 1, then the
        // chosen order is re-estimated on its own full sample.
        double best_aic = std::numeric_limits<double>::infinity();
        int best_p = 0;
        const int start = k_max + 1;
        for (int cand = 0; cand <= k_max; ++cand) {
            std::vector<double> dep;
            Mat X;
            build_adf_design(y, cand, start, spec, dep, X);
            OlsSolution ols;
            try {
                ols = ols_solve(dep, X);
            } catch (const SingularDesign&) {
                continue;
            }
            const double t_obs = static_cast<double>(ols.n);
            const double aic =
                t_obs * std::log(ols.rss / t_obs) + 2.0 * static_cast<double>(ols.k);
            if (aic < best_aic) {
                best_aic = aic;
                best_p = cand;
            }
        }
        if (!std::isfinite(best_aic))
            throw SingularDesign("adf_test: all candidate lag designs singular");
        p = best_p;
    }

    const int start = p + 1;
    if (n - start < 25) throw TooShort("adf_test: fewer than 25 observations after lags");

    const DfRegression reg = run_df_regression(y, p, start, spec);
    UnitRootResult out;
    out.statistic = reg.t_stat;
    out.lags = p;
    out.spec = spec;
    out.critical_values = mackinnon_critical_values(spec, reg.n_obs);
    out.reject_at = decide_rejection(out.statistic, out.critical_values);
    return out;
}

UnitRootResult adf_test(const ReturnSeries& r, DeterministicSpec spec, LagPolicy lag_policy) {
    const std::vector<double> v = r.values();
    return adf_test(std::span<const double>(v), spec, lag_policy);
}

UnitRootResult pp_test(std::span<const double> y, DeterministicSpec spec,
                       BandwidthPolicy bw_policy) {
    const int n = static_cast<int>(y.size());
    if (n < 27) throw TooShort("pp_test: series too short");

    const DfRegression reg = run_df_regression(y, 0, 1, spec);
    const int t_obs = reg.n_obs;

    int m = bw_policy.m;
    if (bw_policy.mode == BandwidthPolicy::Mode::NeweyWestAuto)
        m = static_cast<int>(4.0 * std::pow(static_cast<double>(t_obs) / 100.0, 2.0 / 9.0));
    if (m < 0) throw InvalidDesign("pp_test: negative bandwidth");
    if (m >= t_obs) m = t_obs - 1;

    // Long-run variance of the DF residuals, Bartlett kernel.
    const std::vector<double>& u = reg.resid;
    double gamma0 = 0.0;
    for (double e : u) gamma0 += e * e;
    gamma0 /= static_cast<double>(t_obs);
    double lambda2 = gamma0;
    for (int j = 1; j <= m; ++j) {
        double gj = 0.0;
        for (int t = j; t < t_obs; ++t) gj += u[t] * u[t - j];
        gj /= static_cast<double>(t_obs);
        lambda2 += 2.0 * (1.0 - static_cast<double>(j) / (m + 1.0)) * gj;
    }
    if (!(lambda2 > 0.0)) throw NonFinite("pp_test: non-positive long-run variance");

    // Z_tau: serial-correlation-corrected DF t-ratio.
    const double lambda = std::sqrt(lambda2);
    const double z_tau = std::sqrt(gamma0 / lambda2) * reg.t_stat -
                         (lambda2 - gamma0) * static_cast<double>(t_obs) * reg.rho_se /
                             (2.0 * lambda * reg.sigma2);

    UnitRootResult out;
    out.statistic = z_tau;
    out.lags = m;
    out.spec = spec;
    out.critical_values = mackinnon_critical_values(spec, t_obs);
    out.reject_at = decide_rejection(out.statistic, out.critical_values);
    return out;
}

UnitRootResult pp_test(const ReturnSeries& r, DeterministicSpec spec, BandwidthPolicy bw_policy) {
    const std::vector<double> v = r.values();
    return pp_test(std::span<const double>(v), spec, bw_policy);
}

}  // namespace haven
