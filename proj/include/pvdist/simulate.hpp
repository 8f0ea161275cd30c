#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pvdist/model.hpp"
#include "pvdist/rng.hpp"

namespace pvdist {

/// A realization of a homogeneous Poisson process restricted to an
/// origin-centered ball window.
struct PppSample {
    int d = 0;
    double intensity = 0.0;
    double window_radius = 0.0;
    std::vector<std::vector<double>> points;  // Cartesian coordinates.
};

/// Draws a Poisson point count with mean intensity * kappa_d * W^d and that
/// many i.i.d. uniform points in the window ball.
PppSample sample_ppp(const ModelParams& m, double window_radius, RngStream& stream);

/// Extends a window realization to a larger radius by adding an independent
/// annulus population. The restriction of the extended process to the old
/// window is unchanged, so the extension never conditions or biases the
/// configuration (unlike redrawing from scratch).
void extend_ppp(PppSample& ppp, double new_radius, RngStream& stream);

/// True iff no process point is strictly closer to y than the origin is.
/// Requires 2*||y|| <= window_radius so that points beyond the window are
/// provably irrelevant; throws std::invalid_argument otherwise.
bool in_typical_cell(const std::vector<double>& y, const PppSample& ppp);

/// Sorted sample values with step-function evaluation.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> samples);
    double at(double x) const;                 // proportion of samples <= x
    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

  private:
    std::vector<double> sorted_;
};

/// Kolmogorov-Smirnov statistic: sup over the sample points of the distance
/// between the empirical step function and the reference CDF, including both
/// one-sided gaps at each jump.
double ks_statistic(const EmpiricalCdf& samples, const std::function<double(double)>& cdf);

/// Distances from the nucleus (origin) to uniformly random points of the
/// typical cell, one accepted point per independently simulated cell.
/// Sample i is drawn from a substream of (seed, i), so results are
/// reproducible and independent of the worker layout.
std::vector<double> sample_typical_distance(const ModelParams& m, long n, std::uint64_t seed);

/// One draw of the distance in the cell that contains the origin.
struct ZeroCellDraw {
    double distance = 0.0;      // nucleus to uniform point of its cell
    double nucleus_norm = 0.0;  // distance of the nucleus from the origin
};

/// Cell-containing-the-origin sampler: nucleus = process point nearest the
/// origin; a uniform point of that nucleus's cell is rejection-sampled and
/// its distance to the nucleus recorded.
std::vector<ZeroCellDraw> sample_zerocell_distance(const ModelParams& m, long n,
                                                   std::uint64_t seed);

/// Per-cell farthest accepted probe distance from the nucleus, over n
/// simulated typical cells (512 probes per cell).
std::vector<double> farthest_point_samples(const ModelParams& m, long n, std::uint64_t seed);

/// Empirical q-quantile (over n simulated cells) of the farthest accepted
/// probe distance from the nucleus; calibrates the conditioning radius used
/// by the exact typical-cell method.
double farthest_point_quantile(const ModelParams& m, double q, long n, std::uint64_t seed);

}  // namespace pvdist
