#include <doctest.h>

#include <cmath>

#include "haven/optimize.hpp"

using namespace haven;

TEST_CASE("nelder-mead: quadratic bowl") {
    auto f = [](const std::vector<double>& x) {
        return (x[0] - 1.5) * (x[0] - 1.5) + 4.0 * (x[1] + 0.5) * (x[1] + 0.5);
    };
    const NelderMeadResult r = nelder_mead(f, {0.0, 0.0}, {0.5, 0.5}, 2000, 1e-12);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(-0.5).epsilon(1e-4));
    CHECK(r.fmin == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("nelder-mead: rosenbrock valley") {
    auto f = [](const std::vector<double>& x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0}, {0.2, 0.2}, 5000, 1e-14);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("nelder-mead: iteration cap reports non-convergence") {
    auto f = [](const std::vector<double>& x) { return x[0] * x[0]; };
    const NelderMeadResult r = nelder_mead(f, {100.0}, {1.0}, 3, 1e-15);
    CHECK_FALSE(r.converged);
}

TEST_CASE("newton polish: drives the gradient flat from a rough start") {
    auto f = [](const std::vector<double>& x) {
        return std::pow(x[0] - 2.0, 2) + 0.5 * std::pow(x[1] - 1.0, 4) +
               std::pow(x[1] - 1.0, 2) + 0.3 * (x[0] - 2.0) * (x[1] - 1.0);
    };
    auto feasible = [](const std::vector<double>&) { return true; };
    const PolishResult r = newton_polish(f, {2.3, 0.4}, {1e-5, 1e-5}, feasible, 50, 1e-7);
    CHECK(r.grad_inf_norm < 1e-7);
    CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("newton polish: never leaves the feasible set") {
    // minimum of the unconstrained problem sits outside x0 >= 1
    auto f = [](const std::vector<double>& x) { return x[0] * x[0]; };
    auto feasible = [](const std::vector<double>& x) { return x[0] >= 1.0; };
    const PolishResult r = newton_polish(f, {2.0}, {1e-5}, feasible, 50, 1e-9);
    CHECK(r.x[0] >= 1.0);
    CHECK(r.fmin <= 4.0);  // improved on the start
}
