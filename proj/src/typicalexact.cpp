#include "pvdist/typicalexact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pvdist/simulate.hpp"
#include "pvdist/specfun.hpp"

namespace pvdist {

namespace {

constexpr long kGridIntervals = 2048;
constexpr int kMaxConfigRetries = 8;

double poisson_pmf(int k, double mean) {
    return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

/// A configuration pre-processed for fast probe testing: process points at
/// twice each configuration radius, sorted by configuration radius so the
/// scan can stop as soon as radii exceed the probe's norm.
struct PreparedConfig {
    int d = 0;
    std::vector<double> radii;    // configuration radii l_i, ascending
    std::vector<double> scatter;  // flattened Cartesian points at 2*l_i
};

PreparedConfig prepare(const DomainConfiguration& cfg, int d) {
    PreparedConfig p;
    p.d = d;
    const std::size_t k = cfg.points.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&cfg](std::size_t a, std::size_t b) {
        return cfg.points[a].radius < cfg.points[b].radius;
    });
    p.radii.reserve(k);
    p.scatter.reserve(k * static_cast<std::size_t>(d));
    for (const std::size_t idx : order) {
        PolarPoint scatter = cfg.points[idx];
        scatter.radius *= 2.0;
        const std::vector<double> x = polar_to_cartesian(scatter, d);
        p.radii.push_back(cfg.points[idx].radius);
        p.scatter.insert(p.scatter.end(), x.begin(), x.end());
    }
    return p;
}

/// True iff the probe (Cartesian, with norm `r`) passes every indicator.
bool probe_passes(const PreparedConfig& p, const double* y, double r) {
    const double r2 = r * r;
    const std::size_t d = static_cast<std::size_t>(p.d);
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        if (p.radii[i] > r)
            break;  // sorted: every later indicator passes automatically
        const double* x = p.scatter.data() + i * d;
        double dd = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = y[c] - x[c];
            dd += diff * diff;
        }
        if (dd <= r2)
            return false;
    }
    return true;
}

/// Draws `count` probes uniform in the ball of radius `radius` and returns
/// the norms of those passing all indicators.
std::vector<double> passing_probe_radii(const PreparedConfig& p, double radius,
                                        long count, RngStream& stream) {
    std::vector<double> passing;
    passing.reserve(static_cast<std::size_t>(count) / 2);
    std::vector<double> y(static_cast<std::size_t>(p.d));
    for (long i = 0; i < count; ++i) {
        const std::vector<double> dir = stream.sphere_direction(p.d);
        const double r = radius * std::pow(stream.uniform01(), 1.0 / p.d);
        for (std::size_t c = 0; c < y.size(); ++c)
            y[c] = r * dir[c];
        if (probe_passes(p, y.data(), r))
            passing.push_back(r);
    }
    return passing;
}

/// Central Poisson window [k_lo, k_hi] holding at least 1 - tail_tol mass
/// (each side trimmed by at most tail_tol/2), optionally capped by k_cap.
void poisson_window(double mean, double tail_tol, int k_cap, int& k_lo, int& k_hi,
                    std::vector<double>& pmf) {
    const int hard_hi = static_cast<int>(mean + 12.0 * std::sqrt(mean + 1.0) + 60.0);
    std::vector<double> all(static_cast<std::size_t>(hard_hi) + 1);
    for (int k = 0; k <= hard_hi; ++k)
        all[static_cast<std::size_t>(k)] = poisson_pmf(k, mean);
    double cum = 0.0;
    k_lo = 0;
    for (int k = 0; k <= hard_hi; ++k) {
        if (cum + all[static_cast<std::size_t>(k)] > tail_tol / 2.0) {
            k_lo = k;
            break;
        }
        cum += all[static_cast<std::size_t>(k)];
    }
    double upper_cum = 0.0;
    k_hi = hard_hi;
    for (int k = hard_hi; k >= k_lo; --k) {
        if (upper_cum + all[static_cast<std::size_t>(k)] > tail_tol / 2.0) {
            k_hi = k;
            break;
        }
        upper_cum += all[static_cast<std::size_t>(k)];
    }
    if (k_cap > 0)
        k_hi = std::min(k_hi, k_cap);
    if (k_hi < k_lo)
        k_hi = k_lo;
    pmf.assign(all.begin() + k_lo, all.begin() + k_hi + 1);
}

}  // namespace

void validate(const McBudget& b) {
    if (b.outer_configs < 1 || b.inner_points < 1)
        throw std::invalid_argument("McBudget: outer_configs and inner_points must be >= 1");
    if (b.k_max < 0)
        throw std::invalid_argument("McBudget: k_max must be >= 0 (0 = automatic)");
    if (!(b.tail_tol > 0.0 && b.tail_tol < 1.0))
        throw std::invalid_argument("McBudget: tail_tol must lie in (0, 1)");
}

DomainConfiguration sample_domain_config(const ModelParams& m, double ell, int k,
                                         RngStream& stream) {
    validate(m);
    if (!(ell > 0.0))
        throw std::invalid_argument("sample_domain_config: ell must be > 0");
    if (k < 0)
        throw std::invalid_argument("sample_domain_config: k must be >= 0");
    DomainConfiguration cfg;
    cfg.ell = ell;
    cfg.points.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        std::vector<double> x = stream.uniform_in_ball(m.d, ell);
        cfg.points.push_back(cartesian_to_polar(x));
    }
    return cfg;
}

int cell_indicator(const PolarPoint& y, const PolarPoint& cfg_point, int d) {
    const double r = y.radius;
    if (cfg_point.radius > r)
        return 1;
    PolarPoint scatter = cfg_point;
    scatter.radius *= 2.0;
    return pair_distance(y, scatter, d) > r ? 1 : 0;
}

VolumeEstimate cell_ball_intersection_volume(double z, const DomainConfiguration& cfg,
                                             int d, long inner_points, RngStream& stream) {
    if (!(z >= 0.0 && z <= cfg.ell))
        throw std::invalid_argument("cell_ball_intersection_volume: need 0 <= z <= ell");
    if (inner_points < 1)
        throw std::invalid_argument("cell_ball_intersection_volume: need inner_points >= 1");
    const double ball = dim_constants(d).kappa_d * std::pow(z, d);
    if (z == 0.0)
        return {0.0, 0.0};
    const PreparedConfig p = prepare(cfg, d);
    const long hits = static_cast<long>(passing_probe_radii(p, z, inner_points, stream).size());
    const double frac = static_cast<double>(hits) / static_cast<double>(inner_points);
    VolumeEstimate est;
    est.value = ball * frac;
    est.std_error = ball * std::sqrt(std::max(frac * (1.0 - frac), 0.0) /
                                     static_cast<double>(inner_points));
    return est;
}

CdfEstimate conditional_cdf(double z, int k, const ModelParams& m, double ell,
                            const McBudget& b) {
    validate(m);
    validate(b);
    if (!(ell > 0.0))
        throw std::invalid_argument("conditional_cdf: ell must be > 0");
    if (!(z >= 0.0 && z <= ell))
        throw std::invalid_argument("conditional_cdf: need 0 <= z <= ell");
    if (k < 0)
        throw std::invalid_argument("conditional_cdf: k must be >= 0");
    CdfEstimate est;
    if (k == 0) {
        est.value = std::pow(z / ell, m.d);
        return est;
    }
    double sum = 0.0;
    double sum2 = 0.0;
    const std::uint64_t root = b.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k));
    for (long c = 0; c < b.outer_configs; ++c) {
        std::vector<double> radii;
        for (int attempt = 0;; ++attempt) {
            if (attempt > kMaxConfigRetries)
                throw NumericalError("conditional_cdf: no probe landed in the cell");
            RngStream stream = RngStream::substream(
                root + static_cast<std::uint64_t>(attempt) * 0xA24BAED4963EE407ULL,
                static_cast<std::uint64_t>(c));
            const DomainConfiguration cfg = sample_domain_config(m, ell, k, stream);
            radii = passing_probe_radii(prepare(cfg, m.d), ell, b.inner_points, stream);
            if (!radii.empty())
                break;
            est.retried = true;
        }
        const double hits = static_cast<double>(
            std::count_if(radii.begin(), radii.end(), [z](double t) { return t <= z; }));
        const double f = hits / static_cast<double>(radii.size());
        sum += f;
        sum2 += f * f;
    }
    const double n = static_cast<double>(b.outer_configs);
    est.value = sum / n;
    if (b.outer_configs > 1) {
        const double var = std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    } else {
        est.std_error = 0.5;
    }
    return est;
}

TypicalExactEvaluator::TypicalExactEvaluator(const ModelParams& m, double ell,
                                             const McBudget& b)
    : m_(m), ell_(ell), budget_(b) {
    validate(m_);
    validate(budget_);
    if (!(ell_ > 0.0))
        throw std::invalid_argument("TypicalExactEvaluator: ell must be > 0");

    const double mean =
        m_.lambda * dim_constants(m_.d).kappa_d * std::pow(2.0 * ell_, m_.d);
    int k_lo = 0;
    std::vector<double> pmf;
    poisson_window(mean, budget_.tail_tol, budget_.k_max, k_lo, k_max_, pmf);
    tail_mass_ = 1.0 - std::accumulate(pmf.begin(), pmf.end(), 0.0);

    const std::size_t grid_n = kGridIntervals + 1;
    grid_f_.assign(grid_n, 0.0);
    std::vector<double> grid_var(grid_n, 0.0);
    const double h = ell_ / static_cast<double>(kGridIntervals);

    // Allot outer configurations across the point-count mixture in
    // proportion to each count's probability (minimum one per level), which
    // matches plain mixture sampling in expectation at fixed total cost.
    const double pmf_sum = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    std::vector<long> allot(pmf.size(), 0);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        const int k = k_lo + static_cast<int>(i);
        if (k == 0)
            continue;  // analytic level, no sampling needed
        allot[i] = std::max<long>(
            1, std::lround(static_cast<double>(budget_.outer_configs) * pmf[i] / pmf_sum));
    }

    double mean_acc = 0.0;
    double mean_var_acc = 0.0;

    // Per-level accumulators, filled by a deterministic parallel loop over
    // globally indexed configurations.
    std::vector<long> offsets(pmf.size() + 1, 0);
    for (std::size_t i = 0; i < pmf.size(); ++i)
        offsets[i + 1] = offsets[i] + allot[i];
    const long total_configs = offsets.back();

    // Per-level running sums; configurations are sampled in parallel batches
    // (bounding memory at any budget) and folded in ascending global index
    // order, so the result is independent of the worker layout.
    const std::size_t n_levels = pmf.size();
    std::vector<std::vector<double>> level_fsum(n_levels);
    std::vector<std::vector<double>> level_fsum2(n_levels);
    std::vector<double> level_msum(n_levels, 0.0);
    std::vector<double> level_msum2(n_levels, 0.0);
    for (std::size_t i = 0; i < n_levels; ++i) {
        if (allot[i] > 0) {
            level_fsum[i].assign(grid_n, 0.0);
            level_fsum2[i].assign(grid_n, 0.0);
        }
    }

    const long batch_cap = 2048;
    std::vector<std::vector<double>> cfg_f;
    std::vector<double> cfg_mean;
    std::vector<int> cfg_retried;
    for (long start = 0; start < total_configs; start += batch_cap) {
        const long batch_n = std::min(batch_cap, total_configs - start);
        cfg_f.assign(static_cast<std::size_t>(batch_n), {});
        cfg_mean.assign(static_cast<std::size_t>(batch_n), 0.0);
        cfg_retried.assign(static_cast<std::size_t>(batch_n), 0);

        parallel_for(batch_n, [&](long b) {
            const long g = start + b;
            const std::size_t level = static_cast<std::size_t>(
                std::upper_bound(offsets.begin(), offsets.end(), g) - offsets.begin() - 1);
            const int k = k_lo + static_cast<int>(level);
            std::vector<double> radii;
            int retried = 0;
            for (int attempt = 0;; ++attempt) {
                if (attempt > kMaxConfigRetries)
                    throw NumericalError(
                        "typical-cell exact method: no probe landed in the cell");
                RngStream stream = RngStream::substream(
                    budget_.seed + static_cast<std::uint64_t>(attempt) * 0xA24BAED4963EE407ULL,
                    static_cast<std::uint64_t>(g));
                const DomainConfiguration cfg = sample_domain_config(m_, ell_, k, stream);
                radii =
                    passing_probe_radii(prepare(cfg, m_.d), ell_, budget_.inner_points, stream);
                if (!radii.empty())
                    break;
                retried = 1;
            }
            cfg_retried[static_cast<std::size_t>(b)] = retried;

            // Exact per-configuration step CDF restricted to the grid, plus
            // the exact conditional mean (= average passing radius).
            std::vector<double> counts(grid_n, 0.0);
            double sum_r = 0.0;
            for (const double t : radii) {
                const std::size_t bin = std::min<std::size_t>(
                    grid_n - 1, static_cast<std::size_t>(std::ceil(t / h)));
                counts[bin] += 1.0;
                sum_r += t;
            }
            const double inv_m = 1.0 / static_cast<double>(radii.size());
            double cum = 0.0;
            for (std::size_t j = 0; j < grid_n; ++j) {
                cum += counts[j];
                counts[j] = cum * inv_m;
            }
            cfg_f[static_cast<std::size_t>(b)] = std::move(counts);
            cfg_mean[static_cast<std::size_t>(b)] = sum_r * inv_m;
        });

        for (long b = 0; b < batch_n; ++b) {
            const long g = start + b;
            retries_ += cfg_retried[static_cast<std::size_t>(b)];
            const std::size_t level = static_cast<std::size_t>(
                std::upper_bound(offsets.begin(), offsets.end(), g) - offsets.begin() - 1);
            const auto& f = cfg_f[static_cast<std::size_t>(b)];
            auto& fs = level_fsum[level];
            auto& fs2 = level_fsum2[level];
            for (std::size_t j = 0; j < grid_n; ++j) {
                fs[j] += f[j];
                fs2[j] += f[j] * f[j];
            }
            const double cm = cfg_mean[static_cast<std::size_t>(b)];
            level_msum[level] += cm;
            level_msum2[level] += cm * cm;
        }
    }

    for (std::size_t level = 0; level < n_levels; ++level) {
        const int k = k_lo + static_cast<int>(level);
        const double w = pmf[level];
        if (k == 0) {
            for (std::size_t j = 0; j < grid_n; ++j) {
                const double z = static_cast<double>(j) * h;
                grid_f_[j] += w * std::pow(z / ell_, m_.d);
            }
            mean_acc += w * ell_ * static_cast<double>(m_.d) / (m_.d + 1.0);
            continue;
        }
        const long n = allot[level];
        if (n == 0)
            continue;
        const double dn = static_cast<double>(n);
        const double msum = level_msum[level];
        const double msum2 = level_msum2[level];
        const auto& fsum = level_fsum[level];
        const auto& fsum2 = level_fsum2[level];
        for (std::size_t j = 0; j < grid_n; ++j) {
            grid_f_[j] += w * fsum[j] / dn;
            const double var =
                n > 1 ? std::max(0.0, (fsum2[j] - fsum[j] * fsum[j] / dn) / (dn - 1.0))
                      : 0.25;
            grid_var[j] += w * w * var / dn;
        }
        mean_acc += w * msum / dn;
        const double mvar =
            n > 1 ? std::max(0.0, (msum2 - msum * msum / dn) / (dn - 1.0)) : 0.25 * ell_ * ell_;
        mean_var_acc += w * w * mvar / dn;
    }

    grid_se_.resize(grid_n);
    for (std::size_t j = 0; j < grid_n; ++j)
        grid_se_[j] = std::sqrt(grid_var[j]) + tail_mass_;
    mean_ = mean_acc;
    mean_se_ = std::sqrt(mean_var_acc) + tail_mass_ * ell_;
}

double TypicalExactEvaluator::cdf(double z) const {
    if (!(z >= 0.0 && z <= ell_ * (1.0 + 1e-12)))
        throw std::invalid_argument("TypicalExactEvaluator::cdf: need 0 <= z <= ell");
    const double h = ell_ / static_cast<double>(kGridIntervals);
    const double pos = std::min(z / h, static_cast<double>(kGridIntervals));
    const std::size_t j = static_cast<std::size_t>(std::floor(pos));
    if (j >= grid_f_.size() - 1)
        return grid_f_.back();
    const double w = pos - static_cast<double>(j);
    return grid_f_[j] * (1.0 - w) + grid_f_[j + 1] * w;
}

double TypicalExactEvaluator::std_error(double z) const {
    const double h = ell_ / static_cast<double>(kGridIntervals);
    const std::size_t j = std::min<std::size_t>(
        grid_se_.size() - 1, static_cast<std::size_t>(std::lround(z / h)));
    return grid_se_[j];
}

double TypicalExactEvaluator::mean() const {
    return mean_;
}

void TypicalExactEvaluator::check_ell(long cells) {
    const std::vector<double> far =
        farthest_point_samples(m_, cells, budget_.seed ^ 0xE11C4EC7ull);
    long escaped = 0;
    for (const double f : far)
        escaped += (f > ell_) ? 1 : 0;
    escape_fraction_ = static_cast<double>(escaped) / static_cast<double>(far.size());
}

double typical_cdf_exact(double z, const ModelParams& m, double ell, const McBudget& b) {
    const TypicalExactEvaluator eval(m, ell, b);
    return eval.cdf(z);
}

double typical_mean_exact(const ModelParams& m, double ell, const McBudget& b) {
    const TypicalExactEvaluator eval(m, ell, b);
    return eval.mean();
}

double default_conditioning_radius(const ModelParams& m, std::uint64_t seed) {
    validate(m);
    const double scale = std::pow(m.lambda, -1.0 / m.d);
    if (m.d == 2)
        return 1.6 * scale;
    ModelParams unit;
    unit.d = m.d;
    unit.lambda = 1.0;
    return scale * farthest_point_quantile(unit, 0.99, 800, seed);
}

}  // namespace pvdist
