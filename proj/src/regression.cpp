#include "haven/regression.hpp"

#include <algorithm>
#include <cmath>

#include "haven/errors.hpp"
#include "haven/stats.hpp"

namespace haven {

int CovidDummy::at(Date d) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d)
        throw WindowOutOfRange("covid dummy: date " + d.to_string() + " not in the calendar");
    return indicator[static_cast<std::size_t>(it - dates.begin())];
}

CovidDummy build_covid_dummy(const std::vector<Date>& dates, Date announcement, int horizon,
                             CovidDummy::DayMode mode) {
    if (dates.empty()) throw WindowOutOfRange("covid dummy: empty calendar");
    if (horizon < 0) throw InvalidDesign("covid dummy: horizon must be >= 0");

    CovidDummy d;
    d.announcement_date = announcement;
    d.horizon = horizon;
    d.mode = mode;
    d.dates = dates;
    d.indicator.assign(dates.size(), 0);

    // First observation on or after the announcement starts the window.
    const auto first = std::lower_bound(dates.begin(), dates.end(), announcement);
    if (first == dates.end())
        throw WindowOutOfRange("covid dummy: sample ends before the announcement date " +
                               announcement.to_string());
    const std::size_t k0 = static_cast<std::size_t>(first - dates.begin());

    if (mode == CovidDummy::DayMode::Trading) {
        const std::size_t want = k0 + static_cast<std::size_t>(horizon);
        const std::size_t k1 = std::min(want, dates.size() - 1);
        d.window_truncated = want > dates.size() - 1;
        for (std::size_t k = k0; k <= k1; ++k) d.indicator[k] = 1;
        d.window_start = dates[k0];
        d.window_end = dates[k1];
    } else {
        const Date last_day = announcement.plus_days(horizon);
        std::size_t k1 = k0;
        for (std::size_t k = k0; k < dates.size() && dates[k] <= last_day; ++k) {
            d.indicator[k] = 1;
            k1 = k;
        }
        d.window_truncated = dates.back() < last_day;
        d.window_start = dates[k0];
        d.window_end = dates[k1];
    }
    return d;
}

std::string significance_stars(double p_value) {
    if (p_value < 0.01) return "***";
    if (p_value < 0.05) return "**";
    if (p_value < 0.10) return "*";
    return "";
}

std::size_t RegressionResult::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw Error("regression result: no coefficient named '" + name + "'");
}

namespace {

RegressionResult from_ols(const OlsSolution& ols, std::vector<std::string> names) {
    RegressionResult r;
    r.names = std::move(names);
    if (r.names.empty())
        for (std::size_t i = 0; i < ols.k; ++i) r.names.push_back("x" + std::to_string(i));
    if (r.names.size() != ols.k)
        throw DimensionMismatch("regression: coefficient name count mismatch");
    r.coef = ols.coef;
    r.std_errors = ols.se_hc1;
    r.classical_std_errors = ols.se_classical;
    r.t_stats.resize(ols.k);
    r.p_values.resize(ols.k);
    for (std::size_t i = 0; i < ols.k; ++i) {
        r.t_stats[i] = ols.coef[i] / ols.se_hc1[i];
        r.p_values[i] = normal_two_sided_p(r.t_stats[i]);
    }
    r.r_squared = ols.r_squared;
    r.n_obs = ols.n;
    return r;
}

double ar1_of_residuals(const std::vector<double>& e) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 1; t < e.size(); ++t) {
        num += e[t] * e[t - 1];
        den += e[t - 1] * e[t - 1];
    }
    if (!(den > 0.0)) return 0.0;
    return std::clamp(num / den, -0.999, 0.999);
}

}  // namespace

RegressionResult ols_fit(std::span<const double> y, const Mat& X,
                         std::vector<std::string> names) {
    return from_ols(ols_solve(y, X), std::move(names));
}

RegressionResult prais_winsten_fit(std::span<const double> y, const Mat& X,
                                   const PraisWinstenOptions& opts,
                                   std::vector<std::string> names) {
    const std::size_t n = X.rows();
    const std::size_t k = X.cols();
    if (y.size() != n) throw DimensionMismatch("prais_winsten_fit: rows(X) != len(y)");
    if (n < 30) throw TooShort("prais_winsten_fit: need at least 30 observations");

    OlsSolution ols = ols_solve(y, X);
    if (opts.max_iter == 0) {
        RegressionResult r = from_ols(ols, std::move(names));
        r.rho_ar1 = 0.0;
        r.iterations = 0;
        return r;
    }

    double rho = 0.0;
    OlsSolution transformed = ols;
    int iter = 0;
    bool settled = false;
    std::vector<double> yt(n);
    Mat Xt(n, k);
    std::vector<double> resid = ols.resid;

    for (; iter < opts.max_iter; ++iter) {
        const double rho_new = ar1_of_residuals(resid);
        const bool done = std::fabs(rho_new - rho) < opts.rho_tol;
        rho = rho_new;

        const double first_scale = std::sqrt(1.0 - rho * rho);
        yt[0] = first_scale * y[0];
        for (std::size_t j = 0; j < k; ++j) Xt(0, j) = first_scale * X(0, j);
        for (std::size_t t = 1; t < n; ++t) {
            yt[t] = y[t] - rho * y[t - 1];
            for (std::size_t j = 0; j < k; ++j) Xt(t, j) = X(t, j) - rho * X(t - 1, j);
        }
        transformed = ols_solve(yt, Xt);

        // rho is re-estimated from original-scale residuals each pass
        for (std::size_t t = 0; t < n; ++t) {
            double fit = 0.0;
            for (std::size_t j = 0; j < k; ++j) fit += X(t, j) * transformed.coef[j];
            resid[t] = y[t] - fit;
        }
        if (done) {
            settled = true;
            ++iter;
            break;
        }
    }
    if (!settled)
        throw NoConvergence("prais_winsten_fit: rho did not settle in " +
                            std::to_string(opts.max_iter) + " iterations");

    RegressionResult r = from_ols(transformed, std::move(names));
    r.rho_ar1 = rho;
    r.iterations = iter;
    return r;
}

RegressionResult safe_haven_regression(const ReturnSeries& asset, const ReturnSeries& index,
                                       const CovidDummy& dummy,
                                       const PraisWinstenOptions& opts) {
    const std::size_t n = asset.obs.size();
    if (n != index.obs.size())
        throw DimensionMismatch("safe_haven_regression: series lengths differ");
    for (std::size_t t = 0; t < n; ++t)
        if (asset.obs[t].date != index.obs[t].date)
            throw DimensionMismatch("safe_haven_regression: series are not aligned");
    if (n < 31) throw TooShort("safe_haven_regression: need at least 31 observations");

    // First observation feeds the lags only.
    const std::size_t rows = n - 1;
    std::vector<double> y(rows);
    Mat X(rows, 5);
    for (std::size_t t = 1; t < n; ++t) {
        const std::size_t row = t - 1;
        y[row] = asset.obs[t].value;
        X(row, 0) = 1.0;
        X(row, 1) = asset.obs[t - 1].value;
        X(row, 2) = index.obs[t].value;
        X(row, 3) = static_cast<double>(dummy.at(asset.obs[t].date)) * index.obs[t].value;
        X(row, 4) = index.obs[t - 1].value;
    }
    return prais_winsten_fit(y, X, opts, {"gamma", "beta1", "beta2", "beta3", "beta4"});
}

}  // namespace haven
