#pragma once

namespace pvdist {

/// Ordered half-gaps around a line cell: r1 is the distance from the cell's
/// nucleus to the nearer cell boundary, r2 to the farther one (0 <= r1 <= r2).
struct OrderedGaps {
    double r1 = 0.0;
    double r2 = 0.0;
};

/// Joint density of the ordered half-gaps for intensity lambda:
/// 8 * lambda^2 * exp(-2*lambda*(r1+r2)) on {0 <= r1 <= r2}, 0 off-support.
double joint_pdf_ordered(const OrderedGaps& g, double lambda);

/// Distribution of the nucleus-to-uniform-point distance conditioned on the
/// half-gaps: 2r/(r1+r2) for r in [0, r1], (r+r1)/(r1+r2) for r in (r1, r2],
/// 1 beyond. The degenerate cell r1 = r2 = 0 yields 1 for r > 0 and 0 at r=0.
double cond_cdf_1d(double r, const OrderedGaps& g);

/// Closed-form distribution of the distance from the nucleus of the typical
/// line cell to a uniform point of that cell, at intensity lambda:
/// 1 - e^{-2 lambda r} + 2 lambda r e^{-2 lambda r} - 4 lambda^2 r^2 E1(2 lambda r),
/// with the removable limit 0 at r = 0.
double typical1d_cdf(double r, double lambda);

/// Density of typical1d_cdf: 4 lambda e^{-2 lambda r} - 8 lambda^2 r E1(2 lambda r)
/// for r > 0 (limit value 4 lambda at r = 0).
double typical1d_pdf(double r, double lambda);

/// Mean of the typical line-cell distance, by integrating the survival
/// function of typical1d_cdf numerically.
double typical1d_mean(double lambda);

/// Independent re-derivation of typical1d_cdf by integrating the conditional
/// distribution against the half-gap density with 2-D adaptive quadrature,
/// split into the three regions (both gaps below r, straddling, both above).
/// Used as the verification oracle for the closed form.
double deconditioned_cdf_quadrature(double r, double lambda);

/// The closed form of the first region's integral (both half-gaps below r):
/// 1 + exp(-4 lambda r) - 2 exp(-2 lambda r).
double deconditioned_piece_both_gaps_below(double r, double lambda);

}  // namespace pvdist
