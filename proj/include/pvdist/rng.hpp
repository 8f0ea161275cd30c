#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pvdist {

/// Counter-based 64-bit mixer used for seeding and substream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic pseudo-random stream (xoshiro256++ core) with explicit
/// seeding so that results are reproducible across platforms and worker
/// layouts. Each logical task derives its own stream via substream(), which
/// decorrelates (root seed, task index) pairs through splitmix64.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    /// Stream for task `index` under `root`; streams for distinct indices are
    /// statistically independent and never depend on evaluation order.
    static RngStream substream(std::uint64_t root, std::uint64_t index);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01();

    /// Uniform on [a, b).
    double uniform(double a, double b);

    /// Standard normal deviate (Box-Muller; one spare cached).
    double gaussian();

    /// Poisson draw by CDF inversion anchored at the mode; exact for any
    /// mean >= 0 with O(sqrt(mean)) expected work.
    long poisson(double mean);

    /// Uniform direction on the unit sphere in R^d (d >= 1), as Cartesian
    /// coordinates.
    std::vector<double> sphere_direction(int d);

    /// Uniform point in the origin-centered ball of the given radius.
    std::vector<double> uniform_in_ball(int d, double radius);

  private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Runs fn(i) for i in [0, n) across `workers` threads (workers <= 0 means
/// use the PVDIST_WORKERS environment variable, defaulting to 1). Work is
/// split into fixed-size chunks whose layout does not depend on the worker
/// count, so any per-index output is bit-identical for any worker count.
void parallel_for(long n, const std::function<void(long)>& fn, int workers = 0);

/// Resolved worker count: PVDIST_WORKERS if set and positive, else 1.
int default_workers();

}  // namespace pvdist
