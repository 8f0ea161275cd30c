#pragma once

#include "pvdist/model.hpp"

namespace pvdist {

/// Distribution function of the distance from the origin to a uniformly
/// random point of the Voronoi cell containing the origin (the 0-cell),
/// when cells are generated by a homogeneous Poisson process of intensity
/// lambda: F(r) = 1 - exp(-lambda * kappa_d * r^d).
///
/// Throws std::invalid_argument for r < 0.
double contact_cdf(double r, const ModelParams& m);

/// Density of contact_cdf: d * lambda * kappa_d * r^(d-1) * exp(-lambda * kappa_d * r^d).
double contact_pdf(double r, const ModelParams& m);

/// Inverse of contact_cdf on p in [0, 1): closed-form
/// r = (-log(1-p) / (lambda * kappa_d))^(1/d). Rejects p outside [0, 1).
double contact_quantile(double p, const ModelParams& m);

/// n-th moment of the 0-cell distance:
/// Gamma(1 + n/d) / (lambda * kappa_d)^(n/d). Rejects n < 1.
double zerocell_moment(int n, const ModelParams& m);

}  // namespace pvdist
