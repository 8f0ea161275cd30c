#pragma once

#include <vector>

namespace pvdist {

/// A point in d-space given by its distance from the origin and d-1 angular
/// coordinates. Convention: the first Cartesian coordinate is
/// radius * cos(angles[0]); each following coordinate picks up one more sine
/// factor; the last coordinate is radius * prod(sin(angles[j])). The first
/// d-2 angles lie in [0, pi], the last in [0, 2*pi).
///
/// In one dimension the parameterization degenerates: a PolarPoint with no
/// angles maps to the nonnegative coordinate (+radius), and a single angle in
/// {0, pi} is accepted as a sign (cos of it). That extension is what lets
/// one-dimensional domain configurations carry points on both sides of the
/// origin.
struct PolarPoint {
    double radius = 0.0;
    std::vector<double> angles;
};

/// Hyperspherical embedding into d Cartesian coordinates. Rejects a point
/// whose angle count does not match d (see PolarPoint for the d = 1 rule).
std::vector<double> polar_to_cartesian(const PolarPoint& p, int d);

/// Inverse of polar_to_cartesian via the atan2 chain; the zero vector maps to
/// radius 0 with all angles 0.
PolarPoint cartesian_to_polar(const std::vector<double>& x);

/// Euclidean distance between two points given in polar form.
double pair_distance(const PolarPoint& y, const PolarPoint& x, int d);

/// Integral of alpha_d * sin(t)^d over [0, psi], normalized so the value at
/// psi = pi is 1. Evaluated through the regularized incomplete beta rather
/// than quadrature. psi in [0, pi].
double normalized_sin_power_integral(int d, double psi);

/// Surface area of the spherical cap of the sphere of radius ball_radius cut
/// off by a hyperplane at distance cap_base_distance from the center:
/// (1/2) * chi_d * ball_radius^(d-1) * I_{1-(t/R)^2}((d-1)/2, 1/2).
/// Requires d >= 2 and cap_base_distance in [0, ball_radius].
double cap_surface_area(int d, double ball_radius, double cap_base_distance);

/// Volume of the cap of a ball of radius ball_radius cut off by a hyperplane
/// at signed distance cap_base_distance from the center. Nonnegative base
/// distance selects the minor cap; a negative value selects the complementary
/// major cap. |cap_base_distance| must not exceed ball_radius.
double ball_cap_volume(int d, double ball_radius, double cap_base_distance);

/// The split angles of the two-ball union geometry: balls of radii v1, v2
/// through the origin whose centers subtend angle u at the origin.
struct TwoBallGeometry {
    double v1 = 0.0;
    double v2 = 0.0;
    double u = 0.0;
    double psi1 = 0.0;
    double psi2 = 0.0;
};

/// Solves psi1 + psi2 = pi - u with v1 * sin(psi1) = v2 * sin(psi2) by
/// bisection on [0, pi - u] to 1e-12. Requires v1 + v2 > 0 and u in [0, pi].
TwoBallGeometry psi_split(double v1, double v2, double u);

/// Volume of the union of two balls of radii v1 and v2, each passing through
/// the origin, centers subtending angle u at the origin. Split-angle method:
/// kappa_d (v1^d + v2^d) minus the two normalized sine-power integrals.
double union_volume(double v1, double v2, double u, int d);

/// Same union volume by inclusion-exclusion with the lens (two-cap) volume
/// from the center distance sqrt(v1^2 + v2^2 - 2 v1 v2 cos u). Used as the
/// independent cross-check of union_volume.
double union_volume_lens(double v1, double v2, double u, int d);

}  // namespace pvdist
