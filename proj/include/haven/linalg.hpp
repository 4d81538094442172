#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace haven {

/// Dense row-major matrix, just big enough for regression designs.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Least-squares solution of y = X b + e with the pieces regressions need.
struct OlsSolution {
    std::vector<double> coef;
    std::vector<double> resid;
    double rss = 0.0;
    double sigma2 = 0.0;          // rss / (n - k)
    double r_squared = 0.0;       // centered
    std::vector<double> se_classical;
    std::vector<double> se_hc1;
    std::size_t n = 0, k = 0;
};

/// Solve by normal equations + Cholesky. Throws SingularDesign on a
/// numerically rank-deficient X, DimensionMismatch on shape errors.
OlsSolution ols_solve(std::span<const double> y, const Mat& X);

/// Cholesky-based inverse of a symmetric positive-definite k x k matrix
/// (row-major). Throws SingularDesign when a pivot collapses.
std::vector<double> spd_inverse(const std::vector<double>& a, std::size_t k);

}  // namespace haven
