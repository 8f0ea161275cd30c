#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pvdist/geometry.hpp"
#include "pvdist/quadrature.hpp"
#include "pvdist/rng.hpp"
#include "pvdist/specfun.hpp"

using namespace pvdist;

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm_of(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

PolarPoint random_polar(RngStream& rng, int d, double rmax) {
    PolarPoint p;
    p.radius = rng.uniform(0.0, rmax);
    if (d == 1) {
        if (rng.uniform01() < 0.5) p.angles.push_back(kPi);
        return p;
    }
    for (int j = 0; j < d - 2; ++j) p.angles.push_back(rng.uniform(0.0, kPi));
    p.angles.push_back(rng.uniform(0.0, 2.0 * kPi));
    return p;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("one-dimensional polar points carry a sign") {
    PolarPoint plus{0.7, {}};
    const auto xp = polar_to_cartesian(plus, 1);
    REQUIRE(xp.size() == 1);
    CHECK(xp[0] == doctest::Approx(0.7).epsilon(1e-15));

    PolarPoint minus{0.7, {kPi}};
    const auto xm = polar_to_cartesian(minus, 1);
    CHECK(xm[0] == doctest::Approx(-0.7).epsilon(1e-12));

    const PolarPoint back = cartesian_to_polar(std::vector<double>{-0.3});
    CHECK(back.radius == doctest::Approx(0.3).epsilon(1e-15));
    REQUIRE(back.angles.size() == 1);
    CHECK(back.angles[0] == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("polar round trip preserves points") {
    RngStream rng(5150);
    for (int d : {2, 3, 5, 7}) {
        for (int it = 0; it < 50; ++it) {
            const PolarPoint p = random_polar(rng, d, 3.0);
            const auto x = polar_to_cartesian(p, d);
            REQUIRE(x.size() == static_cast<std::size_t>(d));
            CHECK(norm_of(x) == doctest::Approx(p.radius).epsilon(1e-11));
            const PolarPoint q = cartesian_to_polar(x);
            const auto y = polar_to_cartesian(q, d);
            for (int t = 0; t < d; ++t)
                CHECK(std::fabs(x[static_cast<std::size_t>(t)] -
                                y[static_cast<std::size_t>(t)]) <= 1e-11 * (1.0 + p.radius));
        }
    }
}

TEST_CASE("polar conversion rejects mismatched angle counts") {
    CHECK_THROWS_AS(polar_to_cartesian(PolarPoint{1.0, {0.5}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(polar_to_cartesian(PolarPoint{1.0, {0.5, 0.5}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(polar_to_cartesian(PolarPoint{-1.0, {}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(cartesian_to_polar(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("pair distance matches the Cartesian norm") {
    // Antipodal unit vectors are distance 2 apart.
    PolarPoint a{1.0, {0.0}};
    PolarPoint b{1.0, {kPi}};
    CHECK(pair_distance(a, b, 2) == doctest::Approx(2.0).epsilon(1e-12));

    RngStream rng(6021023);
    for (int d : {1, 2, 3, 5}) {
        for (int it = 0; it < 40; ++it) {
            const PolarPoint p = random_polar(rng, d, 2.5);
            const PolarPoint q = random_polar(rng, d, 2.5);
            const auto xp = polar_to_cartesian(p, d);
            const auto xq = polar_to_cartesian(q, d);
            double s = 0.0;
            for (int t = 0; t < d; ++t) {
                const double dx = xp[static_cast<std::size_t>(t)] - xq[static_cast<std::size_t>(t)];
                s += dx * dx;
            }
            CHECK(pair_distance(p, q, d) == doctest::Approx(std::sqrt(s)).epsilon(1e-10));
        }
    }
}

TEST_CASE("normalized sine-power integral endpoints and symmetry") {
    for (int d = 1; d <= 8; ++d) {
        CHECK(normalized_sin_power_integral(d, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(normalized_sin_power_integral(d, kPi) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(normalized_sin_power_integral(d, 0.5 * kPi) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("normalized sine-power integral closed forms in low dimension") {
    // d = 1: (1 - cos psi) / 2.   d = 2: (psi - sin psi cos psi) / pi.
    for (double psi : {0.3, 0.8, 1.9, 2.7}) {
        CHECK(normalized_sin_power_integral(1, psi) ==
              doctest::Approx(0.5 * (1.0 - std::cos(psi))).epsilon(1e-12));
        CHECK(normalized_sin_power_integral(2, psi) ==
              doctest::Approx((psi - std::sin(psi) * std::cos(psi)) / kPi).epsilon(1e-12));
    }
}

TEST_CASE("normalized sine-power integral against direct quadrature") {
    for (int d : {3, 4, 6}) {
        const double alpha = dim_constants(d).alpha_d;
        for (double psi : {0.6, 1.1, 2.3}) {
            const auto oracle = quad::integrate_1d(
                [&](double t) { return alpha * std::pow(std::sin(t), d); }, 0.0, psi, 1e-12);
            REQUIRE(oracle.converged);
            CHECK(normalized_sin_power_integral(d, psi) ==
                  doctest::Approx(oracle.value).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(normalized_sin_power_integral(2, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(normalized_sin_power_integral(2, kPi + 0.1), std::invalid_argument);
}

TEST_CASE("cap surface area closed values") {
    // Circle of radius 2, chord at distance 1: arc length 2 R arccos(1/2) = 4 pi / 3.
    CHECK(cap_surface_area(2, 2.0, 1.0) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
    // Sphere cap area 2 pi R h with h = R - t.
    CHECK(cap_surface_area(3, 1.0, 0.5) == doctest::Approx(kPi).epsilon(1e-12));
    // Degenerate and hemispherical cases.
    for (int d : {2, 3, 5}) {
        const DimConstants c = dim_constants(d);
        CHECK(cap_surface_area(d, 1.7, 1.7) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(cap_surface_area(d, 1.7, 0.0) ==
              doctest::Approx(0.5 * c.chi_d * std::pow(1.7, d - 1)).epsilon(1e-12));
    }
}

TEST_CASE("cap surface area decreases as the base moves outward") {
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 0.0; t <= 1.0; t += 0.05) {
        const double v = cap_surface_area(4, 1.0, t);
        CHECK(v < prev + 1e-15);
        prev = v;
    }
    CHECK_THROWS_AS(cap_surface_area(1, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(cap_surface_area(2, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(cap_surface_area(2, 1.0, -0.5), std::invalid_argument);
}

TEST_CASE("ball cap volume closed values and quadrature oracle") {
    // Disk segment: R^2 arccos(t/R) - t sqrt(R^2 - t^2).
    const double seg = 4.0 * std::acos(0.5) - std::sqrt(3.0);
    CHECK(ball_cap_volume(2, 2.0, 1.0) == doctest::Approx(seg).epsilon(1e-12));
    const auto oracle = quad::integrate_1d(
        [](double x) { return 2.0 * std::sqrt(std::max(0.0, 4.0 - x * x)); }, 1.0, 2.0, 1e-10);
    REQUIRE(oracle.converged);
    CHECK(ball_cap_volume(2, 2.0, 1.0) == doctest::Approx(oracle.value).epsilon(1e-8));

    // Sphere cap: pi h^2 (3R - h) / 3 with h = R - t.
    const double h = 0.7;
    CHECK(ball_cap_volume(3, 1.0, 0.3) ==
          doctest::Approx(kPi * h * h * (3.0 - h) / 3.0).epsilon(1e-12));

    // Line segment cap: length R - t.
    CHECK(ball_cap_volume(1, 2.0, 0.6) == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("ball cap volume covers both signs of the base distance") {
    for (int d : {1, 2, 3, 6}) {
        const double full = dim_constants(d).kappa_d * std::pow(1.3, d);
        CHECK(ball_cap_volume(d, 1.3, 0.0) == doctest::Approx(0.5 * full).epsilon(1e-12));
        CHECK(ball_cap_volume(d, 1.3, 1.3) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(ball_cap_volume(d, 1.3, -1.3) == doctest::Approx(full).epsilon(1e-12));
        for (double t : {0.2, 0.77, 1.1}) {
            CHECK(ball_cap_volume(d, 1.3, -t) ==
                  doctest::Approx(full - ball_cap_volume(d, 1.3, t)).epsilon(1e-11));
        }
    }
    CHECK_THROWS_AS(ball_cap_volume(2, 1.0, 1.01), std::invalid_argument);
    CHECK_THROWS_AS(ball_cap_volume(2, 1.0, -1.01), std::invalid_argument);
}

TEST_CASE("split angles solve the two-ball equations") {
    const TwoBallGeometry g = psi_split(1.0, 2.0, 0.5 * kPi);
    CHECK(g.psi1 == doctest::Approx(std::atan(2.0)).epsilon(1e-10));
    CHECK(g.psi2 == doctest::Approx(0.5 * kPi - std::atan(2.0)).epsilon(1e-10));

    const TwoBallGeometry eq = psi_split(1.4, 1.4, 0.9);
    CHECK(eq.psi1 == doctest::Approx(0.5 * (kPi - 0.9)).epsilon(1e-10));
    CHECK(eq.psi2 == doctest::Approx(eq.psi1).epsilon(1e-10));

    const TwoBallGeometry opp = psi_split(0.8, 1.7, kPi);
    CHECK(std::fabs(opp.psi1) <= 1e-10);
    CHECK(std::fabs(opp.psi2) <= 1e-10);

    RngStream rng(777);
    for (int it = 0; it < 200; ++it) {
        const double v1 = rng.uniform(0.05, 3.0);
        const double v2 = rng.uniform(0.05, 3.0);
        const double u = rng.uniform(0.0, kPi);
        const TwoBallGeometry s = psi_split(v1, v2, u);
        CHECK(s.psi1 + s.psi2 == doctest::Approx(kPi - u).epsilon(1e-9));
        CHECK(v1 * std::sin(s.psi1) == doctest::Approx(v2 * std::sin(s.psi2)).epsilon(5e-9));
    }
    CHECK_THROWS_AS(psi_split(0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(psi_split(1.0, 1.0, -0.2), std::invalid_argument);
}

TEST_CASE("two-ball union volume degenerate cases") {
    for (int d : {1, 2, 3, 5}) {
        const double kappa = dim_constants(d).kappa_d;
        // One ball absent: the union is the other ball.
        CHECK(union_volume(0.0, 1.3, 1.1, d) ==
              doctest::Approx(kappa * std::pow(1.3, d)).epsilon(1e-11));
        // Opposite rays: tangent at the origin, volumes add.
        CHECK(union_volume(0.9, 1.6, kPi, d) ==
              doctest::Approx(kappa * (std::pow(0.9, d) + std::pow(1.6, d))).epsilon(1e-11));
        // Same ray: the smaller ball is swallowed by the larger.
        CHECK(union_volume(0.9, 1.6, 0.0, d) ==
              doctest::Approx(kappa * std::pow(1.6, d)).epsilon(1e-9));
    }
}

TEST_CASE("two-ball union volume perpendicular unit case") {
    const double expected = 1.5 * kPi + 1.0;
    CHECK(union_volume(1.0, 1.0, 0.5 * kPi, 2) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(union_volume_lens(1.0, 1.0, 0.5 * kPi, 2) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("two methods for the union volume agree on a random grid") {
    RngStream rng(424242);
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 5);
        const double v1 = rng.uniform(0.1, 3.0);
        const double v2 = rng.uniform(0.1, 3.0);
        const double u = rng.uniform(0.05, kPi - 0.05);
        const double a = union_volume(v1, v2, u, d);
        const double b = union_volume_lens(v1, v2, u, d);
        worst = std::max(worst, std::fabs(a - b) / std::max(1.0, std::fabs(a)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("union volume bounds and monotonicity in the angle") {
    RngStream rng(515253);
    for (int it = 0; it < 100; ++it) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 4);
        const double kappa = dim_constants(d).kappa_d;
        const double v1 = rng.uniform(0.1, 2.5);
        const double v2 = rng.uniform(0.1, 2.5);
        const double u = rng.uniform(0.0, kPi);
        const double vol = union_volume(v1, v2, u, d);
        const double lo = kappa * std::max(std::pow(v1, d), std::pow(v2, d));
        const double hi = kappa * (std::pow(v1, d) + std::pow(v2, d));
        CHECK(vol >= lo - 1e-10);
        CHECK(vol <= hi + 1e-10);
    }
    double prev = 0.0;
    for (double u = 0.0; u <= kPi + 1e-9; u += kPi / 16.0) {
        const double vol = union_volume(1.0, 1.3, std::min(u, kPi), 3);
        CHECK(vol >= prev - 1e-10);
        prev = vol;
    }
}

TEST_CASE("union volume agrees with Monte Carlo hit testing") {
    // Smoke-scale version of the hit-test cross-check (the full-strength run
    // lives in the acceptance gate).
    RngStream rng(31337);
    struct Case { double v1, v2, u; int d; };
    for (const Case& c : {Case{1.0, 1.0, 0.5 * kPi, 2}, Case{0.6, 1.4, 1.0, 3},
                          Case{1.2, 0.8, 2.4, 2}}) {
        const double analytic = union_volume(c.v1, c.v2, c.u, c.d);
        // Centers at distance v from the origin along each ray; sample an
        // enclosing ball around the midpoint of the two centers.
        std::vector<double> c1(static_cast<std::size_t>(c.d), 0.0);
        std::vector<double> c2(static_cast<std::size_t>(c.d), 0.0);
        c1[0] = c.v1;
        c2[0] = c.v2 * std::cos(c.u);
        c2[1] = c.v2 * std::sin(c.u);
        std::vector<double> mid(static_cast<std::size_t>(c.d), 0.0);
        for (int t = 0; t < c.d; ++t)
            mid[static_cast<std::size_t>(t)] =
                0.5 * (c1[static_cast<std::size_t>(t)] + c2[static_cast<std::size_t>(t)]);
        double half2 = 0.0;
        for (int t = 0; t < c.d; ++t) {
            const double dx = c1[static_cast<std::size_t>(t)] - mid[static_cast<std::size_t>(t)];
            half2 += dx * dx;
        }
        const double renc = std::sqrt(half2) + std::max(c.v1, c.v2);
        const double venc = dim_constants(c.d).kappa_d * std::pow(renc, c.d);
        const long n = 150000;
        long hits = 0;
        for (long i = 0; i < n; ++i) {
            const auto y = rng.uniform_in_ball(c.d, renc);
            double d1 = 0.0, d2 = 0.0;
            for (int t = 0; t < c.d; ++t) {
                const double yt = y[static_cast<std::size_t>(t)] + mid[static_cast<std::size_t>(t)];
                d1 += (yt - c1[static_cast<std::size_t>(t)]) * (yt - c1[static_cast<std::size_t>(t)]);
                d2 += (yt - c2[static_cast<std::size_t>(t)]) * (yt - c2[static_cast<std::size_t>(t)]);
            }
            if (d1 <= c.v1 * c.v1 || d2 <= c.v2 * c.v2) ++hits;
        }
        const double phat = static_cast<double>(hits) / static_cast<double>(n);
        const double est = phat * venc;
        const double sigma = venc * std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
        CHECK(std::fabs(est - analytic) <= 4.0 * sigma);
    }
}

}  // TEST_SUITE
