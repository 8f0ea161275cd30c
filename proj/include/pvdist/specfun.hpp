#pragma once

#include <stdexcept>

namespace pvdist {

/// Raised when an iterative numerical routine fails to converge or a computed
/// quantity degenerates (distinct from argument-domain violations, which raise
/// std::invalid_argument).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dimension-dependent constants of d-space.
///
/// kappa_d: volume of the unit ball.
/// chi_d:   surface area of the unit sphere, d * kappa_d.
/// alpha_d: Gamma(d/2+1) / (Gamma(1/2) * Gamma((d+1)/2)), the normalizer that
///          makes alpha_d * sin^d integrate to 1 over [0, pi].
/// c_d2:    (d!/(2(d-2)!)) * kappa_d * kappa_{d-1} / (kappa_2 * kappa_1),
///          defined for d >= 2 only (NaN at d = 1).
struct DimConstants {
    int d;
    double kappa_d;
    double chi_d;
    double alpha_d;
    double c_d2;
};

/// Computes the constants above. Rejects d < 1.
DimConstants dim_constants(int d);

/// Natural log of the gamma function for x > 0.
double log_gamma(double x);

/// Complete beta function B(a, b), a > 0, b > 0.
double beta(double a, double b);

/// Regularized incomplete beta I_z(a, b) = B_z(a, b) / B(a, b).
/// Continued-fraction evaluation with the symmetry switch at
/// z > (a+1)/(a+b+2). Rejects z outside [0, 1] and nonpositive a or b.
double reg_inc_beta(double z, double a, double b);

/// Unnormalized incomplete beta B_z(a, b) = integral of t^(a-1)(1-t)^(b-1)
/// over [0, z]. Same argument domain as reg_inc_beta.
double inc_beta(double z, double a, double b);

/// Exponential integral E1(z) = integral of t^(-1) e^(-t) over [z, inf).
/// Series for z <= 1, continued fraction for z > 1. Rejects z <= 0.
double exp_integral_e1(double z);

}  // namespace pvdist
