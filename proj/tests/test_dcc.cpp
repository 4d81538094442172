#include <doctest.h>

#include <cmath>
#include <limits>

#include "haven/dcc.hpp"
#include "haven/errors.hpp"
#include "haven/stats.hpp"
#include "test_helpers.hpp"

using namespace haven;

namespace {

AlignedPair aligned_pair_of(const ReturnSeries& a, const ReturnSeries& b) {
    AlignedPair p;
    p.asset = a;
    p.index = b;
    p.common_dates = a.dates();
    return p;
}

// Recover the true u_t from a simulated series by re-running the GARCH
// variance recursion with the known parameters.
std::vector<double> true_std_residuals(const GarchParams& p, const ReturnSeries& r) {
    const std::vector<double> v = r.values();
    const std::vector<double> h = garch_variance_path(p, v);
    std::vector<double> u(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) u[t] = (v[t] - p.mu) / std::sqrt(h[t]);
    return u;
}

}  // namespace

TEST_CASE("estimate_q_bar: identical, opposite and independent residuals") {
    const std::vector<double> x = oracle::white_noise(200, 1);
    std::vector<double> neg = x;
    for (double& v : neg) v = -v;

    CHECK(estimate_q_bar(x, x).v12 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(estimate_q_bar(x, neg).v12 == doctest::Approx(-1.0).epsilon(1e-12));

    const std::vector<double> a = oracle::white_noise(5000, 2);
    const std::vector<double> b = oracle::white_noise(5000, 3);
    CHECK(std::fabs(estimate_q_bar(a, b).v12) < 0.05);

    const Sym2 q = estimate_q_bar(a, b);
    CHECK(q.v11 == 1.0);
    CHECK(q.v22 == 1.0);
}

TEST_CASE("estimate_q_bar: degenerate and short inputs") {
    const std::vector<double> flat(100, 1.0);
    const std::vector<double> x = oracle::white_noise(100, 4);
    CHECK_THROWS_AS(estimate_q_bar(flat, x), DegenerateSeries);
    const std::vector<double> tiny = oracle::white_noise(10, 5);
    CHECK_THROWS_AS(estimate_q_bar(tiny, tiny), TooShort);
}

TEST_CASE("dcc_recursion: a=b=0 collapses to the constant q_bar path") {
    const std::vector<double> pa = oracle::white_noise(100, 6);
    const std::vector<double> pb = oracle::white_noise(100, 7);
    const Sym2 q_bar{1.0, 0.42, 1.0};
    const DccRecursion rec = dcc_recursion({0.0, 0.0}, q_bar, pa, pb);
    for (double rho : rec.rho_path) CHECK(rho == 0.42);  // exact CCC reduction
}

TEST_CASE("dcc_recursion: equal residual streams pin rho at one") {
    const std::vector<double> pa = oracle::white_noise(100, 8);
    const DccRecursion rec = dcc_recursion({0.05, 0.9}, {1.0, 1.0, 1.0}, pa, pa);
    for (double rho : rec.rho_path) CHECK(rho == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dcc_recursion: matches the explicit matrix-arithmetic oracle") {
    Rng rng(99);
    for (int rep = 0; rep < 25; ++rep) {
        const double a = 0.2 * rng.uniform();
        const double b = (0.95 - a) * rng.uniform();
        const double q12 = 1.6 * rng.uniform() - 0.8;
        const std::vector<double> pa = oracle::white_noise(150, 500 + rep);
        const std::vector<double> pb = oracle::white_noise(150, 700 + rep);
        const Sym2 q_bar{1.0, q12, 1.0};

        const DccRecursion rec = dcc_recursion({a, b}, q_bar, pa, pb);
        const auto oq = oracle::dcc_q_path(a, b, {1.0, q12, q12, 1.0}, pa, pb);
        const auto orho = oracle::dcc_rho_path(a, b, {1.0, q12, q12, 1.0}, pa, pb);
        for (std::size_t t = 0; t < pa.size(); ++t) {
            CHECK(rec.q_path[t].v11 == doctest::Approx(oq[t].a11).epsilon(1e-12));
            CHECK(rec.q_path[t].v12 == doctest::Approx(oq[t].a12).epsilon(1e-12));
            CHECK(rec.q_path[t].v22 == doctest::Approx(oq[t].a22).epsilon(1e-12));
            CHECK(rec.rho_path[t] == doctest::Approx(orho[t]).epsilon(1e-12));
            CHECK(rec.q_path[t].positive_definite());
            CHECK(std::fabs(rec.rho_path[t]) <= 1.0);
        }
    }
}

TEST_CASE("dcc_loglik: identity q_bar with a=b=0 is exactly zero") {
    const std::vector<double> pa = oracle::white_noise(80, 10);
    const std::vector<double> pb = oracle::white_noise(80, 11);
    CHECK(dcc_loglik({0.0, 0.0}, {1.0, 0.0, 1.0}, pa, pb) == 0.0);
}

TEST_CASE("dcc_loglik: two-observation hand case evaluated termwise") {
    const std::vector<double> pa{1.0, -1.0};
    const std::vector<double> pb{1.0, 1.0};
    const double rho = 0.5;
    // term t: -0.5 [ln(1-rho^2) + (fa^2 - 2 rho fa fb + fb^2)/(1-rho^2) - (fa^2+fb^2)]
    const double det = 1.0 - rho * rho;
    const double t1 = -0.5 * (std::log(det) + (1.0 - 2.0 * rho + 1.0) / det - 2.0);
    const double t2 = -0.5 * (std::log(det) + (1.0 + 2.0 * rho + 1.0) / det - 2.0);
    const double got = dcc_loglik({0.0, 0.0}, {1.0, rho, 1.0}, pa, pb);
    CHECK(got == doctest::Approx(t1 + t2).epsilon(1e-12));
    CHECK(got == doctest::Approx(oracle::dcc_loglik(0.0, 0.0, {1.0, rho, rho, 1.0}, pa, pb))
                     .epsilon(1e-12));
}

TEST_CASE("dcc_loglik: non-finite residuals raise NonFinite") {
    std::vector<double> pa = oracle::white_noise(50, 12);
    const std::vector<double> pb = oracle::white_noise(50, 13);
    pa[10] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(dcc_loglik({0.05, 0.9}, {1.0, 0.2, 1.0}, pa, pb), NonFinite);
}

TEST_CASE("dcc_loglik: matches the oracle on random instances") {
    Rng rng(123);
    for (int rep = 0; rep < 100; ++rep) {
        const double a = 0.25 * rng.uniform();
        const double b = (0.97 - a) * rng.uniform();
        const double q12 = 1.8 * rng.uniform() - 0.9;
        const std::vector<double> pa = oracle::white_noise(120, 2000 + rep);
        const std::vector<double> pb = oracle::white_noise(120, 3000 + rep);
        const double got = dcc_loglik({a, b}, {1.0, q12, 1.0}, pa, pb);
        const double want = oracle::dcc_loglik(a, b, {1.0, q12, q12, 1.0}, pa, pb);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("simulate_dcc: independent case and deterministic replay") {
    const GarchParams g{0.0, 0.1, 0.1, 0.85};
    const auto [ra, rb] = simulate_dcc(g, g, {0.0, 0.0}, {1.0, 0.0, 1.0}, 5000, 42);
    CHECK(std::fabs(pearson(ra.values(), rb.values())) < 0.05);

    const auto [rc, rd] = simulate_dcc(g, g, {0.0, 0.0}, {1.0, 0.0, 1.0}, 5000, 42);
    for (std::size_t t = 0; t < rc.obs.size(); ++t) {
        CHECK(rc.obs[t].value == ra.obs[t].value);
        CHECK(rd.obs[t].value == rb.obs[t].value);
    }
}

TEST_CASE("simulate_dcc: constant-correlation case reproduces q_bar") {
    const GarchParams g{0.0, 0.1, 0.1, 0.85};
    const auto [ra, rb] = simulate_dcc(g, g, {0.0, 0.0}, {1.0, 0.9, 1.0}, 5000, 77);
    const std::vector<double> ua = true_std_residuals(g, ra);
    const std::vector<double> ub = true_std_residuals(g, rb);
    CHECK(pearson(ua, ub) == doctest::Approx(0.9).epsilon(0.055));
}

TEST_CASE("simulate_dcc: long-run mean of the correlation path reverts to q_bar") {
    const GarchParams g{0.0, 0.1, 0.1, 0.85};
    const DccParams d{0.05, 0.90};  // a+b = 0.95
    const double q12 = 0.5;
    const auto [ra, rb] = simulate_dcc(g, g, d, {1.0, q12, 1.0}, 10000, 2020);
    const std::vector<double> ua = true_std_residuals(g, ra);
    const std::vector<double> ub = true_std_residuals(g, rb);
    const DccRecursion rec = dcc_recursion(d, {1.0, q12, 1.0}, ua, ub);
    CHECK(mean(rec.rho_path) == doctest::Approx(q12).epsilon(0.1));
}

TEST_CASE("fit_dcc: recovery smoke run") {
    const GarchParams g{0.0, 0.1, 0.1, 0.85};
    const DccParams truth{0.05, 0.90};
    int ok_a = 0, ok_b = 0;
    const int reps = 15;
    for (int i = 0; i < reps; ++i) {
        const auto [ra, rb] = simulate_dcc(g, g, truth, {1.0, 0.5, 1.0}, 2000, 9000 + i);
        const AlignedPair pair = aligned_pair_of(ra, rb);
        GarchFitOptions gopts;
        gopts.seed = 100 + i;
        const GarchFit fa = fit_garch11(pair.asset, gopts);
        gopts.seed = 200 + i;
        const GarchFit fb = fit_garch11(pair.index, gopts);
        DccFitOptions dopts;
        dopts.seed = 300 + i;
        const DccFit fit = fit_dcc(pair, fa, fb, dopts);
        CHECK(fit.converged);
        if (std::fabs(fit.params.a - truth.a) <= 0.04) ++ok_a;
        if (std::fabs(fit.params.b - truth.b) <= 0.08) ++ok_b;
        // fitted point must beat the CCC corner it nests
        CHECK(fit.loglik >=
              dcc_loglik({0.0, 0.0}, fit.q_bar, fa.std_residuals, fb.std_residuals) - 1e-9);
    }
    CHECK(ok_a >= 12);
    CHECK(ok_b >= 12);
}

TEST_CASE("fit_dcc: independent series give a small mean absolute correlation") {
    const GarchParams g{0.0, 0.1, 0.1, 0.85};
    int ok = 0;
    const int reps = 10;
    for (int i = 0; i < reps; ++i) {
        const auto [ra, rb] = simulate_dcc(g, g, {0.0, 0.0}, {1.0, 0.0, 1.0}, 2000, 40 + i);
        const AlignedPair pair = aligned_pair_of(ra, rb);
        const GarchFit fa = fit_garch11(pair.asset);
        const GarchFit fb = fit_garch11(pair.index);
        const DccFit fit = fit_dcc(pair, fa, fb);
        double mean_abs = 0.0;
        for (const auto& o : fit.rho_path.obs) mean_abs += std::fabs(o.value);
        mean_abs /= static_cast<double>(fit.rho_path.obs.size());
        if (mean_abs < 0.1) ++ok;
    }
    CHECK(ok >= 9);
}

TEST_CASE("fit_dcc: identical residual streams flagged degenerate") {
    const GarchParams g{0.0, 0.1, 0.1, 0.85};
    const ReturnSeries r = simulate_garch11(g, 400, 5);
    const AlignedPair pair = aligned_pair_of(r, r);
    const GarchFit f = fit_garch11(pair.asset);
    const DccFit fit = fit_dcc(pair, f, f);
    CHECK(fit.degenerate);
    CHECK_FALSE(fit.converged);
    for (const auto& o : fit.rho_path.obs)
        CHECK(o.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-stage pipeline: rho path invariant to rescaling one series") {
    const GarchParams g{0.0, 0.1, 0.1, 0.85};
    const auto [ra, rb] = simulate_dcc(g, g, {0.05, 0.90}, {1.0, 0.5, 1.0}, 800, 66);
    ReturnSeries ra_scaled = ra;
    for (auto& o : ra_scaled.obs) o.value *= 50.0;

    const AlignedPair base = aligned_pair_of(ra, rb);
    const AlignedPair scaled = aligned_pair_of(ra_scaled, rb);
    GarchFitOptions gopts;
    gopts.seed = 3;
    const DccFit fit_base =
        fit_dcc(base, fit_garch11(base.asset, gopts), fit_garch11(base.index, gopts));
    const DccFit fit_scaled =
        fit_dcc(scaled, fit_garch11(scaled.asset, gopts), fit_garch11(scaled.index, gopts));
    REQUIRE(fit_base.rho_path.obs.size() == fit_scaled.rho_path.obs.size());
    for (std::size_t t = 0; t < fit_base.rho_path.obs.size(); ++t)
        CHECK(fit_scaled.rho_path.obs[t].value ==
              doctest::Approx(fit_base.rho_path.obs[t].value).epsilon(1e-3));
}
