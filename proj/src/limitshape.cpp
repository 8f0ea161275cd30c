#include "pvdist/limitshape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pvdist/quadrature.hpp"
#include "pvdist/specfun.hpp"

namespace pvdist {

namespace {

/// Cancellation-safe 1 - R^2/(R+eps)^2 = eps (2R + eps) / (R+eps)^2.
double cap_argument(double R, double eps) {
    const double outer = R + eps;
    // Mathematically in [0, 1]; rounding can push the quotient just past 1
    // when eps dominates R, and the beta evaluations reject arguments outside.
    return std::min(eps * (2.0 * R + eps) / (outer * outer), 1.0);
}

/// Below this the leading power series replaces the beta evaluations.
constexpr double kSeriesThreshold = 1e-12;

}  // namespace

void validate(const InballCondition& c) {
    if (c.d < 2)
        throw std::invalid_argument("InballCondition: requires d >= 2");
    if (!(c.R > 0.0) || !(c.eps > 0.0))
        throw std::invalid_argument("InballCondition: R and eps must be > 0");
    if (c.lambda < 0.0)
        throw std::invalid_argument("InballCondition: lambda must be >= 0");
}

double annulus_radius_cdf(double l, const InballCondition& c) {
    validate(c);
    if (l < c.R || l > c.R + c.eps)
        throw std::invalid_argument("annulus_radius_cdf: l outside [R, R+eps]");
    const double rd = std::pow(c.R, c.d);
    return (std::pow(l, c.d) - rd) / (std::pow(c.R + c.eps, c.d) - rd);
}

double cap0_hit_probability(const InballCondition& c) {
    validate(c);
    const double x = cap_argument(c.R, c.eps);
    return 0.5 * reg_inc_beta(x, 0.5 * (c.d - 1.0), 0.5);
}

double cap_coverage_integral(const InballCondition& c) {
    validate(c);
    const double a = 0.5 * (c.d - 1.0);
    const double x = cap_argument(c.R, c.eps);
    const double outer_d = std::pow(c.R + c.eps, c.d);
    const double rd = std::pow(c.R, c.d);
    if (x < kSeriesThreshold) {
        // Leading order of both beta terms: x^a / (a B(a, 1/2)) each, leaving
        // the annulus volume factor.
        return std::pow(x, a) * (outer_d - rd) / (a * beta(a, 0.5));
    }
    const double b_half = beta(a, 0.5);
    const double b_big = beta(a, 0.5 * (c.d + 1.0));
    const double term1 = outer_d * reg_inc_beta(x, a, 0.5 * (c.d + 1.0)) * b_big / b_half;
    const double term2 = rd * reg_inc_beta(x, a, 0.5);
    return term1 - term2;
}

double cap_hit_probability(const InballCondition& c) {
    validate(c);
    const double denom = 2.0 * (std::pow(c.R + c.eps, c.d) - std::pow(c.R, c.d));
    return cap_coverage_integral(c) / denom;
}

double cap_hit_probability_quadrature(const InballCondition& c) {
    validate(c);
    const double outer = c.R + c.eps;
    const double a = 0.5 * (c.d - 1.0);
    // Integrate over u = sqrt(1 - (l/outer)^2) instead of l directly: the cap
    // fraction vanishes like a half power of (outer - l) at the outer radius,
    // which starves the quadrature; in u the integrand is smooth,
    //   l = outer sqrt(1 - u^2),  dl = -outer u (1 - u^2)^(-1/2) du,
    //   integrand = (d/2) outer^d I_{u^2}(a, 1/2) u (1 - u^2)^{(d-2)/2}.
    const double u_max = std::sqrt(cap_argument(c.R, c.eps));
    const auto f = [&](double u) {
        const double one_minus = std::max(1.0 - u * u, 0.0);
        return 0.5 * c.d * std::pow(outer, c.d) *
               reg_inc_beta(std::min(u * u, 1.0), a, 0.5) * u *
               std::pow(one_minus, 0.5 * (c.d - 2.0));
    };
    const double integral = quad::require(
        quad::integrate_1d(f, 0.0, u_max, 1e-11), "cap probability integral");
    return integral / (std::pow(outer, c.d) - std::pow(c.R, c.d));
}

double q_probability(const InballCondition& c) {
    validate(c);
    const double kd = dim_constants(c.d).kappa_d;
    const double h = cap_coverage_integral(c);
    const double p0 = cap0_hit_probability(c);
    const double q = 1.0 - (1.0 - p0) * std::exp(-0.5 * c.lambda * kd * h);
    return std::min(std::max(q, 0.0), 1.0);
}

SlopeReport h_growth_diagnostic(int d, double eps, const std::vector<double>& r_grid) {
    if (r_grid.size() < 2)
        throw std::invalid_argument("h_growth_diagnostic: need at least two radii");
    for (std::size_t i = 1; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > r_grid[i - 1]))
            throw std::invalid_argument("h_growth_diagnostic: radii must increase");
    }
    SlopeReport rep;
    rep.r_grid = r_grid;
    rep.h_values.reserve(r_grid.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const double R : r_grid) {
        InballCondition c;
        c.R = R;
        c.eps = eps;
        c.d = d;
        c.lambda = 0.0;
        const double h = cap_coverage_integral(c);
        if (!(h > 0.0))
            throw NumericalError("h_growth_diagnostic: nonpositive h; precision lost");
        rep.h_values.push_back(h);
        const double x = std::log(R);
        const double y = std::log(h);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(r_grid.size());
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

}  // namespace pvdist
