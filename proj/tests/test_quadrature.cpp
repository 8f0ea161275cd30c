#include <cmath>

#include "doctest.h"
#include "pvdist/quadrature.hpp"
#include "pvdist/specfun.hpp"

using namespace pvdist;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("quadrature") {

TEST_CASE("polynomial and trigonometric integrals in one dimension") {
    const auto sq = quad::integrate_1d([](double x) { return x * x; }, 0.0, 1.0, 1e-13);
    CHECK(sq.converged);
    CHECK(sq.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const auto sn = quad::integrate_1d([](double x) { return std::sin(x); }, 0.0, kPi, 1e-13);
    CHECK(sn.converged);
    CHECK(sn.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gaussian integral over a long interval") {
    const auto g = quad::integrate_1d([](double x) { return std::exp(-x * x); },
                                      0.0, 10.0, 1e-13);
    CHECK(g.converged);
    CHECK(g.value == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("empty interval integrates to zero") {
    const auto z = quad::integrate_1d([](double x) { return x; }, 2.0, 2.0, 1e-12);
    CHECK(z.converged);
    CHECK(z.value == 0.0);
    const auto neg = quad::integrate_1d([](double x) { return x; }, 3.0, 1.0, 1e-12);
    CHECK(neg.value == 0.0);
}

TEST_CASE("reported error bound covers the true error") {
    const auto r = quad::integrate_1d([](double x) { return std::cos(3.0 * x); },
                                      0.0, 2.0, 1e-11);
    CHECK(r.converged);
    const double truth = std::sin(6.0) / 3.0;
    CHECK(std::fabs(r.value - truth) <= std::max(r.error, 1e-12) + 1e-13);
}

TEST_CASE("separable product over the unit square") {
    const auto xy = quad::integrate_2d([](double x, double y) { return x * y; },
                                       0.0, 1.0, 0.0, 1.0, 1e-13);
    CHECK(xy.converged);
    CHECK(xy.value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("two-dimensional exponential with known value") {
    // integral over [0,1]^2 of e^(x+y) = (e-1)^2.
    const auto r = quad::integrate_2d([](double x, double y) { return std::exp(x + y); },
                                      0.0, 1.0, 0.0, 1.0, 1e-12);
    CHECK(r.converged);
    const double e1 = std::exp(1.0) - 1.0;
    CHECK(r.value == doctest::Approx(e1 * e1).epsilon(1e-11));
}

TEST_CASE("separable product over the unit cube") {
    const auto xyz = quad::integrate_3d(
        [](double x, double y, double z) { return x * y * z; },
        0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1e-12);
    CHECK(xyz.converged);
    CHECK(xyz.value == doctest::Approx(0.125).epsilon(1e-11));
}

TEST_CASE("non-convergence is reported, not hidden") {
    // A deliberately hostile oscillation with a tiny doubling budget.
    const auto r = quad::integrate_1d([](double x) { return std::sin(1e7 * x * x); },
                                      0.0, 1.0, 1e-14, 2, 2);
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS(quad::require(r, "hostile oscillation"), NumericalError);
}

TEST_CASE("require unwraps converged results") {
    const auto r = quad::integrate_1d([](double x) { return x; }, 0.0, 2.0, 1e-12);
    CHECK(quad::require(r, "linear") == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gauss rule nodes are symmetric and weights sum to two") {
    for (int n : {4, 8, 16}) {
        const quad::Rule& rule = quad::gauss_rule(n);
        REQUIRE(rule.x.size() == static_cast<std::size_t>(n));
        double wsum = 0.0;
        for (std::size_t i = 0; i < rule.w.size(); ++i) {
            wsum += rule.w[i];
            CHECK(rule.x[i] == doctest::Approx(-rule.x[rule.x.size() - 1 - i]).epsilon(1e-13));
        }
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-13));
    }
}

}  // TEST_SUITE
