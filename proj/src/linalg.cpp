#include "haven/linalg.hpp"

#include <cmath>

#include "haven/errors.hpp"

namespace haven {

namespace {

// In-place Cholesky factor L of a (row-major, k x k). Pivot tolerance is
// relative to the largest diagonal entry so rescaled designs behave the same.
void cholesky(std::vector<double>& a, std::size_t k) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        max_diag = std::max(max_diag, std::fabs(a[i * k + i]));
    const double tol = (max_diag > 0.0 ? max_diag : 1.0) * 1e-12;

    for (std::size_t j = 0; j < k; ++j) {
        double d = a[j * k + j];
        for (std::size_t p = 0; p < j; ++p) d -= a[j * k + p] * a[j * k + p];
        if (!(d > tol))
            throw SingularDesign("design matrix is numerically rank-deficient");
        d = std::sqrt(d);
        a[j * k + j] = d;
        for (std::size_t i = j + 1; i < k; ++i) {
            double s = a[i * k + j];
            for (std::size_t p = 0; p < j; ++p) s -= a[i * k + p] * a[j * k + p];
            a[i * k + j] = s / d;
        }
    }
}

// Solve L L' x = b given the Cholesky factor in a.
void cholesky_solve(const std::vector<double>& a, std::size_t k, std::vector<double>& b) {
    for (std::size_t i = 0; i < k; ++i) {
        double s = b[i];
        for (std::size_t p = 0; p < i; ++p) s -= a[i * k + p] * b[p];
        b[i] = s / a[i * k + i];
    }
    for (std::size_t ii = k; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t p = ii + 1; p < k; ++p) s -= a[p * k + ii] * b[p];
        b[ii] = s / a[ii * k + ii];
    }
}

}  // namespace

std::vector<double> spd_inverse(const std::vector<double>& a, std::size_t k) {
    if (a.size() != k * k) throw DimensionMismatch("spd_inverse: bad size");
    std::vector<double> chol = a;
    cholesky(chol, k);
    std::vector<double> inv(k * k, 0.0);
    std::vector<double> e(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        cholesky_solve(chol, k, e);
        for (std::size_t i = 0; i < k; ++i) inv[i * k + j] = e[i];
    }
    return inv;
}

OlsSolution ols_solve(std::span<const double> y, const Mat& X) {
    const std::size_t n = X.rows();
    const std::size_t k = X.cols();
    if (y.size() != n) throw DimensionMismatch("ols_solve: rows(X) != len(y)");
    if (k == 0 || n == 0) throw InvalidDesign("ols_solve: empty design");
    if (n <= k) throw InvalidDesign("ols_solve: need n > k observations");

    // X'X and X'y
    std::vector<double> xtx(k * k, 0.0);
    std::vector<double> xty(k, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const auto row = X.row(t);
        for (std::size_t i = 0; i < k; ++i) {
            xty[i] += row[i] * y[t];
            for (std::size_t j = i; j < k; ++j) xtx[i * k + j] += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j) xtx[i * k + j] = xtx[j * k + i];

    const std::vector<double> xtx_inv = spd_inverse(xtx, k);

    OlsSolution out;
    out.n = n;
    out.k = k;
    out.coef.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out.coef[i] += xtx_inv[i * k + j] * xty[j];

    out.resid.resize(n);
    double rss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const auto row = X.row(t);
        double fit = 0.0;
        for (std::size_t i = 0; i < k; ++i) fit += row[i] * out.coef[i];
        out.resid[t] = y[t] - fit;
        rss += out.resid[t] * out.resid[t];
    }
    out.rss = rss;
    out.sigma2 = rss / static_cast<double>(n - k);

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double tss = 0.0;
    for (double v : y) tss += (v - ybar) * (v - ybar);
    out.r_squared = tss > 0.0 ? 1.0 - rss / tss : 0.0;

    out.se_classical.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        out.se_classical[i] = std::sqrt(out.sigma2 * xtx_inv[i * k + i]);

    // HC1: (X'X)^-1 X' diag(e^2) X (X'X)^-1 scaled by n/(n-k)
    std::vector<double> meat(k * k, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const auto row = X.row(t);
        const double e2 = out.resid[t] * out.resid[t];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) meat[i * k + j] += e2 * row[i] * row[j];
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j) meat[i * k + j] = meat[j * k + i];

    const double scale = static_cast<double>(n) / static_cast<double>(n - k);
    out.se_hc1.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        double v = 0.0;
        for (std::size_t p = 0; p < k; ++p) {
            double mp = 0.0;
            for (std::size_t q = 0; q < k; ++q) mp += meat[p * k + q] * xtx_inv[q * k + i];
            v += xtx_inv[i * k + p] * mp;
        }
        out.se_hc1[i] = std::sqrt(scale * v);
    }
    return out;
}

}  // namespace haven
