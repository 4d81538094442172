#include "haven/series.hpp"

#include <algorithm>
#include <cmath>

#include "haven/errors.hpp"
#include "haven/stats.hpp"

namespace haven {

std::vector<double> ReturnSeries::values() const {
    std::vector<double> v;
    v.reserve(obs.size());
    for (const auto& o : obs) v.push_back(o.value);
    return v;
}

std::vector<Date> ReturnSeries::dates() const {
    std::vector<Date> d;
    d.reserve(obs.size());
    for (const auto& o : obs) d.push_back(o.date);
    return d;
}

namespace {

void check_strictly_increasing(const std::vector<Observation>& obs, const std::string& id) {
    for (std::size_t i = 1; i < obs.size(); ++i) {
        if (obs[i].date == obs[i - 1].date)
            throw DuplicateDate(id + ": duplicate date " + obs[i].date.to_string());
        if (obs[i].date < obs[i - 1].date)
            throw Error(id + ": dates not sorted at " + obs[i].date.to_string());
    }
}

}  // namespace

void validate_price_series(const PriceSeries& p) {
    if (p.obs.size() < 2)
        throw TooShort(p.asset_id + ": price series needs at least 2 observations");
    check_strictly_increasing(p.obs, p.asset_id);
    for (const auto& o : p.obs)
        if (!(o.value > 0.0))
            throw NonPositivePrice(p.asset_id + ": non-positive price on " + o.date.to_string());
}

void validate_return_series(const ReturnSeries& r) {
    if (r.obs.empty()) throw TooShort(r.asset_id + ": empty return series");
    check_strictly_increasing(r.obs, r.asset_id);
}

ReturnSeries log_returns(const PriceSeries& p) {
    if (p.obs.size() < 2)
        throw TooShort(p.asset_id + ": need at least 2 prices for returns");
    validate_price_series(p);
    ReturnSeries r;
    r.asset_id = p.asset_id;
    r.obs.reserve(p.obs.size() - 1);
    for (std::size_t i = 1; i < p.obs.size(); ++i)
        r.obs.push_back({p.obs[i].date, 100.0 * std::log(p.obs[i].value / p.obs[i - 1].value)});
    return r;
}

AlignedPair align(const ReturnSeries& a, const ReturnSeries& b) {
    if (a.obs.empty() || b.obs.empty())
        throw TooShort("align: empty input series");
    validate_return_series(a);  // the two-pointer walk needs sorted calendars
    validate_return_series(b);

    AlignedPair out;
    out.asset.asset_id = a.asset_id;
    out.index.asset_id = b.asset_id;

    std::size_t i = 0, j = 0;
    while (i < a.obs.size() && j < b.obs.size()) {
        if (a.obs[i].date < b.obs[j].date) {
            ++i;
        } else if (b.obs[j].date < a.obs[i].date) {
            ++j;
        } else {
            out.asset.obs.push_back(a.obs[i]);
            out.index.obs.push_back(b.obs[j]);
            out.common_dates.push_back(a.obs[i].date);
            ++i;
            ++j;
        }
    }
    if (out.common_dates.size() < 30)
        throw InsufficientOverlap(a.asset_id + "/" + b.asset_id + ": only " +
                                  std::to_string(out.common_dates.size()) +
                                  " common dates (need 30)");
    return out;
}

DescriptiveStats describe(const ReturnSeries& r) {
    if (r.obs.size() < 2)
        throw TooShort(r.asset_id + ": describe needs at least 2 observations");
    const std::vector<double> v = r.values();
    DescriptiveStats s;
    s.n_obs = v.size();
    s.mean = mean(v);
    s.min = *std::min_element(v.begin(), v.end());
    s.max = *std::max_element(v.begin(), v.end());
    s.std_dev = std::sqrt(sample_variance(v));
    return s;
}

Mat static_correlation_matrix(const std::vector<ReturnSeries>& series) {
    const std::size_t m = series.size();
    if (m < 2) throw TooShort("static_correlation_matrix: need at least 2 series");
    Mat corr(m, m, 0.0);
    for (std::size_t i = 0; i < m; ++i) corr(i, i) = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const AlignedPair ap = align(series[i], series[j]);
            const double rho = pearson(ap.asset.values(), ap.index.values());
            corr(i, j) = rho;
            corr(j, i) = rho;
        }
    }
    return corr;
}

}  // namespace haven
