#pragma once

#include <vector>

namespace pvdist {

/// Conditioning data for the large-inball analysis: the typical cell's
/// inradius equals R (one process point touches the inball), and the
/// remaining nearby points lie in an annulus of width eps around it.
/// Requires d >= 2 (the cap areas degenerate on the line).
struct InballCondition {
    double R = 0.0;
    double eps = 0.0;
    int d = 0;
    double lambda = 0.0;  // may be 0: no annulus points, only the touching one
};

void validate(const InballCondition& c);

/// CDF of the base distance of an annulus point: (l^d - R^d) / ((R+eps)^d - R^d).
double annulus_radius_cdf(double l, const InballCondition& c);

/// Probability that a uniform point of the sphere of radius R+eps falls in
/// the cap cut by the inball-touching point at base distance R:
/// half the regularized incomplete beta at 1 - R^2/(R+eps)^2.
double cap0_hit_probability(const InballCondition& c);

/// Probability that the uniform sphere point falls in the cap of one
/// annulus point (base distance averaged over the annulus law); closed form
/// via incomplete beta functions.
double cap_hit_probability(const InballCondition& c);

/// The same probability by direct 1-D quadrature of the averaging integral;
/// verification oracle for the closed form (agreement to 1e-8).
double cap_hit_probability_quadrature(const InballCondition& c);

/// The growth function h(R, eps): 2 * ((R+eps)^d - R^d) * cap_hit_probability,
/// in closed form. Drives the exponent of q_probability.
double cap_coverage_integral(const InballCondition& c);

/// Probability that a uniform point of the sphere of radius R+eps is covered
/// by at least one cap: 1 - (1 - p0) * exp(-lambda kappa_d h / 2).
double q_probability(const InballCondition& c);

/// Least-squares slope of log h versus log R over the grid, with the h
/// values retained for reporting. Errors if any h fails to be positive.
struct SlopeReport {
    double slope = 0.0;
    std::vector<double> r_grid;
    std::vector<double> h_values;
};

SlopeReport h_growth_diagnostic(int d, double eps, const std::vector<double>& r_grid);

}  // namespace pvdist
