#pragma once

#include <map>
#include <optional>
#include <span>

#include "haven/series.hpp"

namespace haven {

/// Deterministic terms in the test regression.
enum class DeterministicSpec { None, Constant, ConstantTrend };

/// Lag selection for the ADF augmentation.
struct LagPolicy {
    enum class Mode { Fixed, AicMax } mode = Mode::AicMax;
    int k = -1;  // Fixed: the lag count; AicMax: upper bound, -1 = Schwert 12*(T/100)^(1/4)

    static LagPolicy fixed(int lags) { return {Mode::Fixed, lags}; }
    static LagPolicy aic_max(int max_lags = -1) { return {Mode::AicMax, max_lags}; }
};

/// Bandwidth selection for the Phillips-Perron long-run variance.
struct BandwidthPolicy {
    enum class Mode { Fixed, NeweyWestAuto } mode = Mode::NeweyWestAuto;
    int m = -1;

    static BandwidthPolicy fixed(int bw) { return {Mode::Fixed, bw}; }
    static BandwidthPolicy newey_west_auto() { return {Mode::NeweyWestAuto, -1}; }
};

struct UnitRootResult {
    double statistic = 0.0;
    int lags = 0;  // ADF: lags used; PP: Bartlett bandwidth
    std::map<double, double> critical_values;  // level (0.01/0.05/0.10) -> value
    std::optional<double> reject_at;           // strongest level rejected, if any
    DeterministicSpec spec = DeterministicSpec::Constant;
};

/// MacKinnon response-surface critical values for the tau statistic,
/// cv = b0 + b1/T + b2/T^2 + b3/T^3, at the 1% / 5% / 10% levels.
std::map<double, double> mackinnon_critical_values(DeterministicSpec spec, int t_obs);

/// Augmented Dickey-Fuller test. The statistic is the t-ratio on the lagged
/// level in dy_t = [det] + g*y_{t-1} + sum d_i*dy_{t-i} + e_t. Left-tailed:
/// reject when the statistic falls below a critical value.
UnitRootResult adf_test(std::span<const double> y,
                        DeterministicSpec spec = DeterministicSpec::Constant,
                        LagPolicy lag_policy = LagPolicy::aic_max());
UnitRootResult adf_test(const ReturnSeries& r,
                        DeterministicSpec spec = DeterministicSpec::Constant,
                        LagPolicy lag_policy = LagPolicy::aic_max());

/// Phillips-Perron Z_tau test with a Bartlett-kernel long-run variance.
UnitRootResult pp_test(std::span<const double> y,
                       DeterministicSpec spec = DeterministicSpec::Constant,
                       BandwidthPolicy bw_policy = BandwidthPolicy::newey_west_auto());
UnitRootResult pp_test(const ReturnSeries& r,
                       DeterministicSpec spec = DeterministicSpec::Constant,
                       BandwidthPolicy bw_policy = BandwidthPolicy::newey_west_auto());

}  // namespace haven
