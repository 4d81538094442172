#pragma once

#include <string>
#include <vector>

#include "haven/date.hpp"
#include "haven/linalg.hpp"

namespace haven {

struct Observation {
    Date date;
    double value = 0.0;
};

/// Daily price levels. Dates strictly increasing, prices > 0, n >= 2.
struct PriceSeries {
    std::string asset_id;
    std::vector<Observation> obs;
};

/// Daily log returns in percent. Dates strictly increasing.
struct ReturnSeries {
    std::string asset_id;
    std::vector<Observation> obs;

    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::vector<Date> dates() const;
    [[nodiscard]] std::size_t size() const { return obs.size(); }
};

struct DescriptiveStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double std_dev = 0.0;  // n-1 denominator
    std::size_t n_obs = 0;
};

/// Two return series restricted to their common dates (>= 30 of them).
struct AlignedPair {
    ReturnSeries asset;
    ReturnSeries index;
    std::vector<Date> common_dates;
};

/// Throws DuplicateDate / NonPositivePrice / TooShort when the series
/// breaks a PriceSeries invariant. Assumes obs already sorted by date.
void validate_price_series(const PriceSeries& p);
void validate_return_series(const ReturnSeries& r);

/// r_t = 100 * ln(p_t / p_{t-1}), dated at the later observation.
ReturnSeries log_returns(const PriceSeries& p);

/// Intersect the two calendars, dropping observations missing from either
/// side. Throws InsufficientOverlap below 30 common dates.
AlignedPair align(const ReturnSeries& a, const ReturnSeries& b);

DescriptiveStats describe(const ReturnSeries& r);

/// Pearson correlation matrix over all pairs, each pair aligned on its own
/// common dates. Symmetric with an exactly unit diagonal.
Mat static_correlation_matrix(const std::vector<ReturnSeries>& series);

}  // namespace haven
