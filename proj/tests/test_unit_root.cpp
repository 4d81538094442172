#include <doctest.h>

#include <cmath>

#include "haven/errors.hpp"
#include "haven/garch.hpp"
#include "haven/unit_root.hpp"
#include "test_helpers.hpp"

using namespace haven;

TEST_CASE("adf: fixed(0) matches the closed-form DF t-ratio oracle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::vector<double> y = oracle::random_walk(120, seed);
        const UnitRootResult r =
            adf_test(std::span<const double>(y), DeterministicSpec::Constant,
                     LagPolicy::fixed(0));
        CHECK(r.statistic == doctest::Approx(oracle::df_tstat_constant(y)).epsilon(1e-8));
        CHECK(r.lags == 0);
    }
}

TEST_CASE("adf: statistic invariant to positive rescaling") {
    const std::vector<double> y = oracle::random_walk(200, 3);
    std::vector<double> scaled = y;
    for (double& v : scaled) v *= 37.5;
    const auto a = adf_test(std::span<const double>(y));
    const auto b = adf_test(std::span<const double>(scaled));
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-9));
    CHECK(a.lags == b.lags);
}

TEST_CASE("adf/pp: left-tailed decision rule consistency") {
    for (std::uint64_t seed = 50; seed < 70; ++seed) {
        const std::vector<double> y = oracle::random_walk(150, seed);
        for (const UnitRootResult& r : {adf_test(std::span<const double>(y)),
                                        pp_test(std::span<const double>(y))}) {
            CHECK(r.critical_values.at(0.01) < r.critical_values.at(0.05));
            CHECK(r.critical_values.at(0.05) < r.critical_values.at(0.10));
            if (r.reject_at) {
                CHECK(r.statistic < r.critical_values.at(*r.reject_at));
                // strongest level: no tighter one also rejects
                if (*r.reject_at > 0.011)
                    CHECK(r.statistic >= r.critical_values.at(0.01));
            } else {
                CHECK(r.statistic >= r.critical_values.at(0.10));
            }
        }
    }
}

TEST_CASE("adf: white noise rejected at 1% in at least 99% of replications") {
    int rejected = 0;
    const int reps = 1000;
    for (int i = 0; i < reps; ++i) {
        const std::vector<double> y = oracle::white_noise(500, 1000 + i);
        const auto r = adf_test(std::span<const double>(y), DeterministicSpec::Constant,
                                LagPolicy::fixed(0));
        if (r.reject_at && *r.reject_at <= 0.01) ++rejected;
    }
    CHECK(rejected >= 990);
}

TEST_CASE("adf: random-walk size at the 5% level within [3%, 7%]") {
    int rejected = 0;
    const int reps = 1000;
    for (int i = 0; i < reps; ++i) {
        const std::vector<double> y = oracle::random_walk(500, 5000 + i);
        const auto r = adf_test(std::span<const double>(y), DeterministicSpec::Constant,
                                LagPolicy::fixed(0));
        if (r.reject_at && *r.reject_at <= 0.05) ++rejected;
    }
    CHECK(rejected >= 30);
    CHECK(rejected <= 70);
}

TEST_CASE("pp: white noise rejected at 1% in at least 99% of replications") {
    int rejected = 0;
    const int reps = 1000;
    for (int i = 0; i < reps; ++i) {
        const std::vector<double> y = oracle::white_noise(500, 9000 + i);
        const auto r = pp_test(std::span<const double>(y));
        if (r.reject_at && *r.reject_at <= 0.01) ++rejected;
    }
    CHECK(rejected >= 990);
}

TEST_CASE("pp: random-walk size at the 5% level within [3%, 7%]") {
    int rejected = 0;
    const int reps = 1000;
    for (int i = 0; i < reps; ++i) {
        const std::vector<double> y = oracle::random_walk(500, 13000 + i);
        const auto r = pp_test(std::span<const double>(y));
        if (r.reject_at && *r.reject_at <= 0.05) ++rejected;
    }
    CHECK(rejected >= 30);
    CHECK(rejected <= 70);
}

TEST_CASE("adf and pp agree at the 1% level on GARCH-style return series") {
    // Stand-ins for the eight asset return series: stationary GARCH returns
    // should be called stationary by both tests.
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const ReturnSeries r = simulate_garch11({0.0, 0.1, 0.1, 0.85}, 181, seed);
        const auto a = adf_test(r);
        const auto p = pp_test(r);
        const bool adf_1pct = a.reject_at && *a.reject_at <= 0.01;
        const bool pp_1pct = p.reject_at && *p.reject_at <= 0.01;
        CHECK(adf_1pct == pp_1pct);
        CHECK(adf_1pct);
    }
}

TEST_CASE("adf: aic lag selection stays within the Schwert bound") {
    const std::vector<double> y = oracle::white_noise(300, 77);
    const auto r = adf_test(std::span<const double>(y));
    const int bound = static_cast<int>(12.0 * std::pow(300.0 / 100.0, 0.25));
    CHECK(r.lags >= 0);
    CHECK(r.lags <= bound);
}

TEST_CASE("adf: constant series is a singular design") {
    const std::vector<double> y(60, 2.5);
    CHECK_THROWS_AS(adf_test(std::span<const double>(y), DeterministicSpec::Constant,
                             LagPolicy::fixed(0)),
                    SingularDesign);
}

TEST_CASE("adf/pp: too-short input") {
    const std::vector<double> y = oracle::white_noise(20, 1);
    CHECK_THROWS_AS(adf_test(std::span<const double>(y)), TooShort);
    CHECK_THROWS_AS(pp_test(std::span<const double>(y)), TooShort);
}

TEST_CASE("mackinnon critical values approach the asymptotic constants") {
    const auto cv = mackinnon_critical_values(DeterministicSpec::Constant, 1000000);
    CHECK(cv.at(0.01) == doctest::Approx(-3.43035).epsilon(1e-4));
    CHECK(cv.at(0.05) == doctest::Approx(-2.86154).epsilon(1e-4));
    CHECK(cv.at(0.10) == doctest::Approx(-2.56677).epsilon(1e-4));
}
