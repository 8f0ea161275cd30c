#include "pvdist/typical1d.hpp"

#include <cmath>
#include <stdexcept>

#include "pvdist/quadrature.hpp"
#include "pvdist/specfun.hpp"

namespace pvdist {

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("typical line cell: lambda must be > 0");
}

}  // namespace

double joint_pdf_ordered(const OrderedGaps& g, double lambda) {
    check_lambda(lambda);
    if (g.r1 < 0.0 || g.r2 < 0.0)
        throw std::invalid_argument("joint_pdf_ordered: gaps must be >= 0");
    if (g.r1 > g.r2)
        return 0.0;
    return 8.0 * lambda * lambda * std::exp(-2.0 * lambda * (g.r1 + g.r2));
}

double cond_cdf_1d(double r, const OrderedGaps& g) {
    if (r < 0.0 || g.r1 < 0.0 || g.r2 < g.r1)
        throw std::invalid_argument("cond_cdf_1d: need 0 <= r and 0 <= r1 <= r2");
    const double span = g.r1 + g.r2;
    if (span == 0.0)
        return r > 0.0 ? 1.0 : 0.0;
    if (r <= g.r1)
        return 2.0 * r / span;
    if (r <= g.r2)
        return (r + g.r1) / span;
    return 1.0;
}

double typical1d_cdf(double r, double lambda) {
    check_lambda(lambda);
    if (r < 0.0)
        throw std::invalid_argument("typical1d_cdf: r must be >= 0");
    if (r == 0.0)
        return 0.0;
    const double z = 2.0 * lambda * r;
    return -std::expm1(-z) + z * std::exp(-z) - z * z * exp_integral_e1(z);
}

double typical1d_pdf(double r, double lambda) {
    check_lambda(lambda);
    if (r < 0.0)
        throw std::invalid_argument("typical1d_pdf: r must be >= 0");
    if (r == 0.0)
        return 4.0 * lambda;
    const double z = 2.0 * lambda * r;
    return 4.0 * lambda * std::exp(-z) - 8.0 * lambda * lambda * r * exp_integral_e1(z);
}

double typical1d_mean(double lambda) {
    check_lambda(lambda);
    // Survival function decays like e^{-2 lambda r}; truncate where it is
    // below 1e-18 and integrate the tail-free remainder.
    const double upper = 22.0 / lambda;
    const auto survival = [lambda](double r) { return 1.0 - typical1d_cdf(r, lambda); };
    return quad::require(quad::integrate_1d(survival, 0.0, upper, 1e-10),
                         "typical line-cell mean");
}

double deconditioned_piece_both_gaps_below(double r, double lambda) {
    check_lambda(lambda);
    const double z = 2.0 * lambda * r;
    return 1.0 + std::exp(-2.0 * z) - 2.0 * std::exp(-z);
}

double deconditioned_cdf_quadrature(double r, double lambda) {
    check_lambda(lambda);
    if (!(r > 0.0))
        throw std::invalid_argument("deconditioned_cdf_quadrature: r must be > 0");
    // Exponential weight exp(-2 lambda (r1+r2)) is below 1e-17 of its peak
    // once either gap exceeds the region minimum by 20/lambda.
    const double upper = r + 20.0 / lambda;
    const double l2 = 8.0 * lambda * lambda;

    // Both gaps below r: conditional value 1. The symmetric integrand over
    // the ordered wedge equals half the square integral.
    const auto f_below = [&](double r1, double r2) {
        return 0.5 * l2 * std::exp(-2.0 * lambda * (r1 + r2));
    };
    const double int1 = quad::require(
        quad::integrate_2d(f_below, 0.0, r, 0.0, r, 1e-9),
        "deconditioned piece: both gaps below");

    // Near gap below r, far gap above: conditional value (r + r1)/(r1 + r2).
    const auto f_straddle = [&](double r1, double r2) {
        return l2 * std::exp(-2.0 * lambda * (r1 + r2)) * (r + r1) / (r1 + r2);
    };
    const double int2 = quad::require(
        quad::integrate_2d(f_straddle, 0.0, r, r, upper, 1e-9),
        "deconditioned piece: straddling");

    // Both gaps above r: conditional value 2r/(r1 + r2); symmetric, so again
    // half the square integral.
    const auto f_above = [&](double r1, double r2) {
        return 0.5 * l2 * std::exp(-2.0 * lambda * (r1 + r2)) * 2.0 * r / (r1 + r2);
    };
    const double int3 = quad::require(
        quad::integrate_2d(f_above, r, upper, r, upper, 1e-9),
        "deconditioned piece: both gaps above");

    return int1 + int2 + int3;
}

}  // namespace pvdist
