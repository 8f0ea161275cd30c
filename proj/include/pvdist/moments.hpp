#pragma once

#include <utility>
#include <vector>

#include "pvdist/model.hpp"

namespace pvdist {

/// Volume-moment results with the quadrature metadata needed to reproduce
/// and audit them.
struct MomentReport {
    int d = 0;
    double lambda = 0.0;
    double ev2 = 0.0;       // second moment of the typical-cell volume
    double var_v = 0.0;     // its variance (ev2 - 1/lambda^2)
    double rho = 0.0;       // correction factor 1 + lambda^2 * var_v
    int nodes = 0;          // Gauss nodes per panel in the final pass
    double truncation_radius = 0.0;
    double error_estimate = 0.0;
};

/// Second moment of the typical-cell volume. For d >= 2: triple quadrature
/// of the two-point survival kernel exp(-lambda * union_volume) with the
/// radial ranges truncated where the single-ball weight drops below 1e-16;
/// d = 1 uses the closed form 3/(2 lambda^2) (the cell length is a sum of
/// two independent exponentials, and the angular kernel degenerates).
double second_moment_cell_volume(const ModelParams& m, double tol);

/// Same computation with metadata attached.
MomentReport second_moment_report(const ModelParams& m, double tol);

/// Two-point kernel integral over a radial rectangle:
/// 4 pi C_{d,2} Int_0^pi Int_{a1}^{b1} Int_{a2}^{b2}
///   exp(-lambda U(v1,v2,u)) (v1 v2)^(d-1) (sin u)^(d-2) dv2 dv1 du.
/// The building block of every second-moment quantity here; requires d >= 2.
double pair_kernel_integral(const ModelParams& m, double a1, double b1, double a2,
                            double b2, double tol);

/// First and second moments of the volume of (cell intersect ball of radius
/// r): m1 in closed form (1/lambda)(1 - exp(-lambda kappa_d r^d)), m2 by the
/// kernel integral over [0, r]^2 (closed form at d = 1).
std::pair<double, double> intersection_moments(double r, const ModelParams& m, double tol);

/// Covariance of the volume of (cell intersect ball of radius r) with the
/// full cell volume: half the cell-volume variance, a closed-form
/// exponential term, plus the [0,r]^2 kernel integral minus the [r,inf)^2
/// one (the latter reduced to already-computed rectangles). Closed form at
/// d = 1; tends to 0 at r = 0 and to the cell-volume variance as r grows.
double covariance_ball_cell(double r, const ModelParams& m, double tol);

/// The sequence covariance_ball_cell(r)/r^d over the given radii; decreasing
/// toward 0 as r -> 0 expresses that the covariance vanishes at r = 0 faster
/// than r^d (its d-th derivative at 0 is zero).
std::vector<double> covariance_vanishing_rate(const ModelParams& m,
                                              const std::vector<double>& radii, double tol);

/// Correction factor 1 + lambda^2 * Var[cell volume]; scale-free in lambda
/// (cross-checked internally at a second intensity).
double correction_factor(const ModelParams& m, double tol);

/// Approximate typical-cell distance CDF: 1 - exp(-rho lambda kappa_d r^d).
double approx_typical_cdf(double r, const ModelParams& m, double rho_val);

/// Moments of the approximate law: Gamma(1+n/d) / (rho lambda kappa_d)^(n/d).
double approx_typical_moment(int n, const ModelParams& m, double rho_val);

}  // namespace pvdist
