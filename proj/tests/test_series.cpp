#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "haven/errors.hpp"
#include "haven/io.hpp"
#include "haven/rng.hpp"
#include "haven/series.hpp"
#include "test_helpers.hpp"

using namespace haven;

namespace {

PriceSeries prices_of(const std::vector<double>& values) {
    PriceSeries p;
    p.asset_id = "px";
    Date d = Date::from_ymd(2020, 1, 1);
    for (std::size_t i = 0; i < values.size(); ++i)
        p.obs.push_back({d.plus_days(static_cast<int>(i)), values[i]});
    return p;
}

struct TempCsv {
    std::string path;
    explicit TempCsv(const std::string& content) {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("haven_test_" + std::to_string(++counter) + "_" +
                 std::to_string(::getpid()) + ".csv"))
                   .string();
        std::ofstream out(path);
        out << content;
    }
    ~TempCsv() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("log returns: identity and hand-computed ratios") {
    const ReturnSeries flat = log_returns(prices_of({100.0, 100.0}));
    REQUIRE(flat.obs.size() == 1);
    CHECK(flat.obs[0].value == doctest::Approx(0.0).epsilon(1e-14));

    const ReturnSeries up = log_returns(prices_of({100.0, 110.0}));
    CHECK(up.obs[0].value == doctest::Approx(100.0 * std::log(1.1)).epsilon(1e-12));

    const ReturnSeries path = log_returns(prices_of({100.0, 110.0, 104.5}));
    REQUIRE(path.obs.size() == 2);
    CHECK(path.obs[0].value == doctest::Approx(9.531017980432486).epsilon(1e-12));
    CHECK(path.obs[1].value == doctest::Approx(-5.129329438755058).epsilon(1e-12));
}

TEST_CASE("log returns: telescoping sum property") {
    Rng rng(99);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> px(40);
        px[0] = 50.0 + 100.0 * rng.uniform();
        for (std::size_t i = 1; i < px.size(); ++i)
            px[i] = px[i - 1] * std::exp(0.05 * rng.normal());
        const ReturnSeries r = log_returns(prices_of(px));
        double sum = 0.0;
        for (const auto& o : r.obs) sum += o.value;
        CHECK(sum == doctest::Approx(100.0 * std::log(px.back() / px.front())).epsilon(1e-10));
    }
}

TEST_CASE("log returns: too short") {
    CHECK_THROWS_AS(log_returns(prices_of({100.0})), TooShort);
}

TEST_CASE("load_series: minimal price file") {
    TempCsv f("date,close\n2020-01-02,100.0\n2020-01-03,110.0\n");
    const LoadedSeries s = load_series(f.path, {"date", "close", ValueKind::Price}, "X");
    REQUIRE(std::holds_alternative<PriceSeries>(s));
    CHECK(std::get<PriceSeries>(s).obs.size() == 2);
}

TEST_CASE("load_series: rows are sorted by date on load") {
    TempCsv f("date,close\n2020-01-03,110.0\n2020-01-02,100.0\n");
    const auto s = load_series(f.path, {"date", "close", ValueKind::Price}, "X");
    const auto& p = std::get<PriceSeries>(s);
    CHECK(p.obs[0].date.to_string() == "2020-01-02");
    CHECK(p.obs[0].value == 100.0);
}

TEST_CASE("load_series: duplicate date rejected") {
    TempCsv f("date,close\n2020-01-02,100.0\n2020-01-02,101.0\n");
    CHECK_THROWS_AS(load_series(f.path, {"date", "close", ValueKind::Price}, "X"),
                    DuplicateDate);
}

TEST_CASE("load_series: malformed row carries the line number") {
    TempCsv f("date,close\n2020-01-02,100.0\n2020-01-03,banana\n");
    try {
        load_series(f.path, {"date", "close", ValueKind::Price}, "X");
        FAIL("expected MalformedRow");
    } catch (const MalformedRow& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("load_series: non-positive price rejected") {
    TempCsv f("date,close\n2020-01-02,100.0\n2020-01-03,-3.0\n");
    CHECK_THROWS_AS(load_series(f.path, {"date", "close", ValueKind::Price}, "X"),
                    NonPositivePrice);
}

TEST_CASE("load_series: 181-row return file") {
    std::string content = "date,ret\n";
    Rng rng(7);
    Date d = Date::from_ymd(2020, 1, 2);
    for (int i = 0; i < 181; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s,%.6f\n", d.plus_days(i).to_string().c_str(),
                      rng.normal());
        content += buf;
    }
    TempCsv f(content);
    const auto s = load_series(f.path, {"date", "ret", ValueKind::Return}, "BTC");
    REQUIRE(std::holds_alternative<ReturnSeries>(s));
    CHECK(std::get<ReturnSeries>(s).obs.size() == 181);
}

TEST_CASE("load_series: missing columns reported as header errors") {
    TempCsv f("date,close\n2020-01-02,100.0\n");
    try {
        load_series(f.path, {"date", "price", ValueKind::Price}, "X");
        FAIL("expected MalformedRow");
    } catch (const MalformedRow& e) {
        CHECK(e.line == 1);
    }
}

TEST_CASE("dates: parse/format round trip, leap rules, arithmetic") {
    const Date leap = Date::parse("2020-02-29");
    CHECK(leap.to_string() == "2020-02-29");
    CHECK_THROWS_AS(Date::parse("2021-02-29"), Error);
    CHECK_THROWS_AS(Date::parse("2020-13-01"), Error);
    CHECK_THROWS_AS(Date::parse("20200101"), Error);
    CHECK(Date::parse("2020-03-11").plus_days(14).to_string() == "2020-03-25");
    CHECK(days_between(Date::parse("2019-12-31"), Date::parse("2020-01-02")) == 2);

    // serial <-> string round trip across a few years including leap days
    Date d = Date::from_ymd(2019, 6, 1);
    for (int i = 0; i < 1000; i += 13) {
        const Date di = d.plus_days(i);
        CHECK(Date::parse(di.to_string()) == di);
    }
}

TEST_CASE("align: identical calendars keep full length") {
    const auto x = oracle::series_of(oracle::white_noise(40, 1));
    const AlignedPair ap = align(x, x);
    CHECK(ap.common_dates.size() == 40);
    CHECK(ap.asset.obs.size() == 40);
    CHECK(ap.index.obs.size() == 40);
}

TEST_CASE("align: 7-day crypto calendar against 5-day index keeps index days") {
    // 10 weeks of daily crypto observations vs. weekday-only index ones.
    ReturnSeries crypto, idx;
    crypto.asset_id = "c";
    idx.asset_id = "i";
    const Date start = Date::from_ymd(2020, 1, 6);  // a Monday
    for (int i = 0; i < 70; ++i) {
        const Date d = start.plus_days(i);
        crypto.obs.push_back({d, 0.1 * i});
        if (i % 7 < 5) idx.obs.push_back({d, -0.1 * i});
    }
    const AlignedPair ap = align(crypto, idx);
    CHECK(ap.common_dates.size() == idx.obs.size());
    for (std::size_t k = 0; k < ap.common_dates.size(); ++k) {
        CHECK(ap.asset.obs[k].date == ap.index.obs[k].date);
    }
}

TEST_CASE("align: disjoint ranges give InsufficientOverlap") {
    const auto a = oracle::series_of(oracle::white_noise(40, 2), "a", Date::from_ymd(2020, 1, 1));
    const auto b = oracle::series_of(oracle::white_noise(40, 3), "b", Date::from_ymd(2021, 1, 1));
    CHECK_THROWS_AS(align(a, b), InsufficientOverlap);
}

TEST_CASE("align: idempotence") {
    ReturnSeries crypto, idx;
    crypto.asset_id = "c";
    idx.asset_id = "i";
    const Date start = Date::from_ymd(2020, 1, 6);
    Rng rng(4);
    for (int i = 0; i < 70; ++i) {
        const Date d = start.plus_days(i);
        crypto.obs.push_back({d, rng.normal()});
        if (i % 7 < 5) idx.obs.push_back({d, rng.normal()});
    }
    const AlignedPair once = align(crypto, idx);
    const AlignedPair twice = align(once.asset, once.index);
    REQUIRE(twice.common_dates.size() == once.common_dates.size());
    for (std::size_t k = 0; k < once.common_dates.size(); ++k) {
        CHECK(twice.asset.obs[k].value == once.asset.obs[k].value);
        CHECK(twice.index.obs[k].value == once.index.obs[k].value);
    }
}

TEST_CASE("describe: constant, symmetric and paper-shaped inputs") {
    const DescriptiveStats c = describe(oracle::series_of({1.0, 1.0, 1.0}));
    CHECK(c.mean == doctest::Approx(1.0));
    CHECK(c.std_dev == doctest::Approx(0.0));

    const DescriptiveStats pm = describe(oracle::series_of({-1.0, 1.0}));
    CHECK(pm.mean == doctest::Approx(0.0));
    CHECK(pm.std_dev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(pm.min == -1.0);
    CHECK(pm.max == 1.0);
    CHECK(pm.n_obs == 2);
}

TEST_CASE("describe: concatenation keeps mean/min/max") {
    const std::vector<double> base = oracle::white_noise(50, 11);
    std::vector<double> tripled;
    for (int k = 0; k < 3; ++k) tripled.insert(tripled.end(), base.begin(), base.end());
    const DescriptiveStats one = describe(oracle::series_of(base));
    const DescriptiveStats three = describe(oracle::series_of(tripled));
    CHECK(three.mean == doctest::Approx(one.mean).epsilon(1e-12));
    CHECK(three.min == one.min);
    CHECK(three.max == one.max);
}

TEST_CASE("describe: too short") {
    CHECK_THROWS_AS(describe(oracle::series_of({1.0})), TooShort);
}

TEST_CASE("static correlation: identical, opposite and hand-computed pairs") {
    const auto x = oracle::series_of(oracle::white_noise(40, 21), "x");
    auto neg = x;
    neg.asset_id = "neg";
    for (auto& o : neg.obs) o.value = -o.value;

    const Mat same = static_correlation_matrix({x, x});
    CHECK(same(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(same(0, 0) == 1.0);

    const Mat opp = static_correlation_matrix({x, neg});
    CHECK(opp(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));

    // x=[1,2,3], y=[2,4,7]: the Pearson formula by hand gives
    // sxy=5, sxx=2, syy=114/9.
    std::vector<double> xs{1.0, 2.0, 3.0}, ys{2.0, 4.0, 7.0};
    std::vector<double> padded_x = xs, padded_y = ys;
    // static_correlation_matrix needs >= 30 common dates; repeat the pattern
    // (Pearson is invariant to replicating the point cloud).
    for (int k = 0; k < 12; ++k) {
        padded_x.insert(padded_x.end(), xs.begin(), xs.end());
        padded_y.insert(padded_y.end(), ys.begin(), ys.end());
    }
    const Mat m = static_correlation_matrix(
        {oracle::series_of(padded_x, "x"), oracle::series_of(padded_y, "y")});
    const double expected = 5.0 / std::sqrt(2.0 * (114.0 / 9.0));
    CHECK(m(0, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.9934).epsilon(1e-4));
}

TEST_CASE("static correlation: symmetric with unit diagonal on random input") {
    std::vector<ReturnSeries> series;
    for (int k = 0; k < 4; ++k)
        series.push_back(oracle::series_of(oracle::white_noise(60, 100 + k),
                                           "s" + std::to_string(k)));
    const Mat m = static_correlation_matrix(series);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m(i, i) == 1.0);
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(m(i, j) == m(j, i));  // exactly symmetric by construction
            CHECK(std::fabs(m(i, j)) <= 1.0 + 1e-12);
        }
    }
}
