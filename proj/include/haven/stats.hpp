#pragma once

#include <span>
#include <vector>

namespace haven {

double mean(std::span<const double> x);

/// Sample variance with the n-1 denominator.
double sample_variance(std::span<const double> x);

/// Pearson correlation of two equal-length spans.
/// Throws DimensionMismatch / TooShort / DegenerateSeries.
double pearson(std::span<const double> x, std::span<const double> y);

double sample_skewness(std::span<const double> x);
double sample_kurtosis(std::span<const double> x);  // non-excess (normal = 3)

/// Standard normal CDF.
double normal_cdf(double x);

/// Two-sided p-value of a t-like statistic against the normal reference.
double normal_two_sided_p(double t);

/// Upper-tail probability P(X > x) for X ~ chi-square(df). df >= 1.
double chi_square_upper_tail(double x, int df);

}  // namespace haven
