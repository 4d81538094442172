#include "haven/lm_tests.hpp"

#include "haven/errors.hpp"
#include "haven/stats.hpp"

namespace haven {

LmTestResult arch_lm_test(std::span<const double> residuals, int q) {
    const int n = static_cast<int>(residuals.size());
    if (q < 1) throw InvalidDesign("arch_lm_test: lag order must be >= 1");
    if (n <= q + 10) throw TooShort("arch_lm_test: series too short for lag order");

    const int rows = n - q;
    std::vector<double> dep(rows);
    Mat X(rows, q + 1);
    for (int t = q; t < n; ++t) {
        const int row = t - q;
        dep[row] = residuals[t] * residuals[t];
        X(row, 0) = 1.0;
        for (int j = 1; j <= q; ++j)
            X(row, j) = residuals[t - j] * residuals[t - j];
    }

    const OlsSolution aux = ols_solve(dep, X);
    LmTestResult out;
    out.statistic = static_cast<double>(rows) * aux.r_squared;
    out.df = q;
    out.lag_order = q;
    out.p_value = chi_square_upper_tail(out.statistic, out.df);
    return out;
}

LmTestResult breusch_pagan_test(std::span<const double> y, const Mat& X) {
    if (X.rows() != y.size())
        throw DimensionMismatch("breusch_pagan_test: rows(X) != len(y)");
    if (X.cols() < 2)
        throw InvalidDesign("breusch_pagan_test: intercept-only design has df = 0");

    const OlsSolution base = ols_solve(y, X);
    std::vector<double> e2(base.resid.size());
    for (std::size_t t = 0; t < e2.size(); ++t) e2[t] = base.resid[t] * base.resid[t];

    const OlsSolution aux = ols_solve(e2, X);
    LmTestResult out;
    out.statistic = static_cast<double>(aux.n) * aux.r_squared;
    out.df = static_cast<int>(X.cols()) - 1;
    out.lag_order = 0;
    out.p_value = chi_square_upper_tail(out.statistic, out.df);
    return out;
}

}  // namespace haven
