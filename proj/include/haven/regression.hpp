#pragma once

#include <span>
#include <string>
#include <vector>

#include "haven/date.hpp"
#include "haven/linalg.hpp"
#include "haven/series.hpp"

namespace haven {

/// Crisis indicator: 1 on the pandemic announcement observation and the
/// `horizon` following ones (trading mode) or calendar days (calendar mode).
struct CovidDummy {
    Date announcement_date;
    int horizon = 14;
    enum class DayMode { Trading, Calendar } mode = DayMode::Trading;
    std::vector<Date> dates;
    std::vector<int> indicator;   // 0/1, parallel to dates
    bool window_truncated = false;  // sample ended before the window closed
    Date window_start;
    Date window_end;

    [[nodiscard]] int at(Date d) const;  // indicator value on an aligned date
};

/// Throws WindowOutOfRange when every date precedes the announcement. When
/// the announcement is not an observation day the first following one starts
/// the window.
CovidDummy build_covid_dummy(const std::vector<Date>& dates,
                             Date announcement = Date::from_ymd(2020, 3, 11), int horizon = 14,
                             CovidDummy::DayMode mode = CovidDummy::DayMode::Trading);

struct RegressionResult {
    std::vector<std::string> names;
    std::vector<double> coef;
    std::vector<double> std_errors;  // HC1 robust; basis for t, p and stars
    std::vector<double> classical_std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;  // two-sided, normal reference
    double rho_ar1 = 0.0;          // AR(1) error coefficient (0 for plain OLS)
    double r_squared = 0.0;
    std::size_t n_obs = 0;
    int iterations = 0;

    [[nodiscard]] std::size_t index_of(const std::string& name) const;
    [[nodiscard]] double coef_of(const std::string& name) const { return coef[index_of(name)]; }
    [[nodiscard]] double p_of(const std::string& name) const { return p_values[index_of(name)]; }
};

/// "***" below 1%, "**" below 5%, "*" below 10%, else "".
std::string significance_stars(double p_value);

RegressionResult ols_fit(std::span<const double> y, const Mat& X,
                         std::vector<std::string> names = {});

struct PraisWinstenOptions {
    // A lagged dependent variable puts (rho, beta1) on a near-common-factor
    // ridge that the fixed-point iteration walks slowly (several hundred
    // steps on flat draws), so the budget is sized for that case rather
    // than the textbook few-step one. Each step is one OLS solve.
    int max_iter = 1000;    // 0 = plain OLS (identity transform)
    double rho_tol = 1e-6;  // stop when |delta rho| falls below this
};

/// Iterated Prais-Winsten FGLS: estimate the AR(1) residual coefficient,
/// quasi-difference every row (first row scaled by sqrt(1 - rho^2)), refit,
/// repeat to convergence. Standard errors are HC1 on the transformed system.
RegressionResult prais_winsten_fit(std::span<const double> y, const Mat& X,
                                   const PraisWinstenOptions& opts = {},
                                   std::vector<std::string> names = {});

/// Crisis regression for one aligned (asset, index) pair:
/// asset_t = gamma + b1 asset_{t-1} + b2 index_t + b3 d_t index_t
///           + b4 index_{t-1} + e_t,
/// estimated by Prais-Winsten. beta3 is the safe-haven coefficient.
RegressionResult safe_haven_regression(const ReturnSeries& asset, const ReturnSeries& index,
                                       const CovidDummy& dummy,
                                       const PraisWinstenOptions& opts = {});

}  // namespace haven
