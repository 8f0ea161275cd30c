#include "pvdist/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pvdist/specfun.hpp"

namespace pvdist {

namespace {

constexpr int kMaxWindowExpansions = 30;

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (const double c : x)
        s += c * c;
    return s;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

/// Number of shell probes per containment round: complete for d = 1 (only
/// two directions exist), growing with dimension otherwise.
int shell_probe_count(int d) {
    if (d == 1)
        return 2;
    const double n = 32.0 * std::pow(2.0, d);
    return static_cast<int>(std::min(n, 4096.0));
}

/// Window realization with points indexed by distance from a focus point,
/// supporting the sorted-prefix membership scan.
class FocusedWindow {
  public:
    FocusedWindow(const ModelParams& m, RngStream& stream)
        : m_(m), stream_(stream) {
        const double kd = dim_constants(m.d).kappa_d;
        base_radius_ = 4.0 * std::pow(m.lambda * kd, -1.0 / m.d);
        ppp_ = sample_ppp(m, base_radius_, stream);
    }

    const PppSample& ppp() const { return ppp_; }
    double window_radius() const { return ppp_.window_radius; }

    void extend_once() {
        if (++expansions_ > kMaxWindowExpansions)
            throw NumericalError(
                "cell sampler: window expanded " +
                std::to_string(kMaxWindowExpansions) +
                " times without containing the cell (window radius " +
                std::to_string(ppp_.window_radius) + ")");
        extend_ppp(ppp_, 2.0 * ppp_.window_radius, stream_);
        focused_ = false;
    }

    void ensure_window(double needed) {
        while (ppp_.window_radius < needed)
            extend_once();
    }

    void ensure_points(std::size_t count) {
        while (ppp_.points.size() < count)
            extend_once();
    }

    /// Re-anchors the sorted index on the given focus point (Cartesian).
    void focus(const std::vector<double>& focus_point, std::size_t skip_index) {
        focus_point_ = focus_point;
        skip_ = skip_index;
        rebuild();
    }

    /// True iff no indexed point (other than the skipped one) lies strictly
    /// closer to y than `radius` = |y - focus|. Caller must have ensured the
    /// window margin for (y, radius).
    bool no_point_within(const std::vector<double>& y, double radius) {
        if (!focused_)
            rebuild();
        const double r2 = radius * radius;
        const double cutoff = 2.0 * radius;
        for (std::size_t i = 0; i < order_.size(); ++i) {
            if (focus_dist_[i] >= cutoff)
                break;
            if (dist2(y, ppp_.points[order_[i]]) < r2)
                return false;
        }
        return true;
    }

  private:
    void rebuild() {
        const std::size_t n = ppp_.points.size();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::vector<double> dist(n);
        for (std::size_t i = 0; i < n; ++i)
            dist[i] = std::sqrt(dist2(ppp_.points[i], focus_point_));
        if (skip_ < n)
            dist[skip_] = std::numeric_limits<double>::infinity();
        std::sort(order_.begin(), order_.end(),
                  [&dist](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
        // Points at infinite distance (the skipped nucleus) sort last; drop them.
        while (!order_.empty() && !std::isfinite(dist[order_.back()]))
            order_.pop_back();
        focus_dist_.resize(order_.size());
        for (std::size_t i = 0; i < order_.size(); ++i)
            focus_dist_[i] = dist[order_[i]];
        focused_ = true;
    }

    ModelParams m_;
    RngStream& stream_;
    double base_radius_ = 0.0;
    PppSample ppp_;
    std::vector<double> focus_point_;
    std::size_t skip_ = static_cast<std::size_t>(-1);
    std::vector<std::size_t> order_;
    std::vector<double> focus_dist_;
    bool focused_ = false;
    int expansions_ = 0;
};

/// Grows a bounding radius around the focus until a full round of shell
/// probes finds no cell point on the bounding sphere. Cell membership at
/// radius rho needs window margin margin_for(rho); the cell is convex and
/// contains the focus, so an empty shell implies containment up to the
/// angular resolution of the probe round.
double grow_bounding_radius(FocusedWindow& win, const std::vector<double>& focus,
                            double start, int d, RngStream& stream,
                            const std::function<double(double)>& margin_for) {
    const int probes = shell_probe_count(d);
    double rho = start;
    std::vector<double> y(static_cast<std::size_t>(d));
    for (int round = 0;; ++round) {
        if (round > 200)
            throw NumericalError("cell sampler: bounding radius failed to stabilize");
        win.ensure_window(margin_for(rho));
        bool escaped = false;
        for (int p = 0; p < probes && !escaped; ++p) {
            std::vector<double> omega;
            if (d == 1) {
                omega = {p == 0 ? 1.0 : -1.0};
            } else if (p < 2 * d) {
                omega.assign(static_cast<std::size_t>(d), 0.0);
                omega[static_cast<std::size_t>(p / 2)] = (p % 2 == 0) ? 1.0 : -1.0;
            } else {
                omega = stream.sphere_direction(d);
            }
            for (int i = 0; i < d; ++i)
                y[static_cast<std::size_t>(i)] = focus[static_cast<std::size_t>(i)] + rho * omega[static_cast<std::size_t>(i)];
            if (win.no_point_within(y, rho))
                escaped = true;
        }
        if (!escaped)
            return rho;
        rho *= 1.3;
    }
}

}  // namespace

PppSample sample_ppp(const ModelParams& m, double window_radius, RngStream& stream) {
    validate(m);
    if (!(window_radius > 0.0))
        throw std::invalid_argument("sample_ppp: window radius must be > 0");
    PppSample s;
    s.d = m.d;
    s.intensity = m.lambda;
    s.window_radius = window_radius;
    const double mean = m.lambda * dim_constants(m.d).kappa_d * std::pow(window_radius, m.d);
    const long count = stream.poisson(mean);
    s.points.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        s.points.push_back(stream.uniform_in_ball(m.d, window_radius));
    return s;
}

void extend_ppp(PppSample& ppp, double new_radius, RngStream& stream) {
    if (!(new_radius > ppp.window_radius))
        throw std::invalid_argument("extend_ppp: new radius must exceed the current one");
    const double kd = dim_constants(ppp.d).kappa_d;
    const double old_pow = std::pow(ppp.window_radius, ppp.d);
    const double new_pow = std::pow(new_radius, ppp.d);
    const long count = stream.poisson(ppp.intensity * kd * (new_pow - old_pow));
    for (long i = 0; i < count; ++i) {
        // Radius density proportional to r^(d-1) on the annulus.
        const double u = stream.uniform01();
        const double r = std::pow(old_pow + u * (new_pow - old_pow), 1.0 / ppp.d);
        std::vector<double> x = stream.sphere_direction(ppp.d);
        for (auto& c : x)
            c *= r;
        ppp.points.push_back(std::move(x));
    }
    ppp.window_radius = new_radius;
}

bool in_typical_cell(const std::vector<double>& y, const PppSample& ppp) {
    if (static_cast<int>(y.size()) != ppp.d)
        throw std::invalid_argument("in_typical_cell: dimension mismatch");
    const double r2 = norm2(y);
    if (2.0 * std::sqrt(r2) > ppp.window_radius)
        throw std::invalid_argument(
            "in_typical_cell: 2*||y|| exceeds the window radius; enlarge the window");
    for (const auto& x : ppp.points) {
        if (dist2(y, x) < r2)
            return false;
    }
    return true;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty())
        throw std::invalid_argument("EmpiricalCdf: need at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::at(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ks_statistic(const EmpiricalCdf& samples, const std::function<double(double)>& cdf) {
    const auto& xs = samples.sorted();
    const double n = static_cast<double>(xs.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        // Right gap at the jump uses the reference's value there; the left
        // gap must use its left limit, so that a right-continuous step
        // reference (e.g. the sample's own empirical CDF) compares exactly.
        const double f = cdf(xs[i]);
        const double f_left = cdf(std::nextafter(xs[i], -std::numeric_limits<double>::infinity()));
        sup = std::max(sup, f_left - static_cast<double>(i) / n);
        sup = std::max(sup, static_cast<double>(i + 1) / n - f);
    }
    return sup;
}

namespace {

/// One typical-cell draw: returns the accepted point's distance from the
/// origin nucleus; optionally also collects `cloud` accepted probes and
/// reports their max distance.
double draw_typical_cell(const ModelParams& m, RngStream& stream, int cloud,
                         double* cloud_max) {
    FocusedWindow win(m, stream);
    win.ensure_points(1);
    const std::vector<double> origin(static_cast<std::size_t>(m.d), 0.0);

    // Nearest process point bounds the inradius from below (cell radial
    // function >= D/2); start the bounding search there.
    double nearest2 = std::numeric_limits<double>::infinity();
    for (const auto& x : win.ppp().points)
        nearest2 = std::min(nearest2, norm2(x));
    const double start = std::sqrt(nearest2);

    win.focus(origin, static_cast<std::size_t>(-1));
    const auto margin = [](double rho) { return 2.0 * rho; };
    const double rho = grow_bounding_radius(win, origin, start, m.d, stream, margin);

    double result = -1.0;
    double far2 = 0.0;
    int accepted = 0;
    const int want = 1 + std::max(0, cloud);
    for (long guard = 0; accepted < want; ++guard) {
        if (guard > 4000000L)
            throw NumericalError("typical-cell sampler: rejection loop stalled");
        const std::vector<double> y = stream.uniform_in_ball(m.d, rho);
        const double yn2 = norm2(y);
        if (!win.no_point_within(y, std::sqrt(yn2)))
            continue;
        if (accepted == 0)
            result = std::sqrt(yn2);
        far2 = std::max(far2, yn2);
        ++accepted;
    }
    if (cloud_max != nullptr)
        *cloud_max = std::sqrt(far2);
    return result;
}

}  // namespace

std::vector<double> sample_typical_distance(const ModelParams& m, long n, std::uint64_t seed) {
    validate(m);
    if (n < 1)
        throw std::invalid_argument("sample_typical_distance: n must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    parallel_for(n, [&](long i) {
        RngStream stream = RngStream::substream(seed, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = draw_typical_cell(m, stream, 0, nullptr);
    });
    return out;
}

std::vector<ZeroCellDraw> sample_zerocell_distance(const ModelParams& m, long n,
                                                   std::uint64_t seed) {
    validate(m);
    if (n < 1)
        throw std::invalid_argument("sample_zerocell_distance: n must be >= 1");
    std::vector<ZeroCellDraw> out(static_cast<std::size_t>(n));
    parallel_for(n, [&](long i) {
        RngStream stream = RngStream::substream(seed ^ 0x5A170C3E11ull, static_cast<std::uint64_t>(i));
        FocusedWindow win(m, stream);
        win.ensure_points(2);

        // Nucleus: the process point nearest the origin.
        const auto& pts = win.ppp().points;
        std::size_t nucleus = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const double d2 = norm2(pts[j]);
            if (d2 < best) {
                best = d2;
                nucleus = j;
            }
        }
        const std::vector<double> x0 = pts[nucleus];
        const double x0_norm = std::sqrt(best);

        win.focus(x0, nucleus);
        double start2 = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j != nucleus)
                start2 = std::min(start2, dist2(pts[j], x0));
        }
        const auto margin = [x0_norm](double rho) { return x0_norm + 2.0 * rho; };
        const double rho =
            grow_bounding_radius(win, x0, std::sqrt(start2), m.d, stream, margin);

        ZeroCellDraw draw;
        draw.nucleus_norm = x0_norm;
        std::vector<double> y(static_cast<std::size_t>(m.d));
        for (long guard = 0;; ++guard) {
            if (guard > 4000000L)
                throw NumericalError("0-cell sampler: rejection loop stalled");
            const std::vector<double> off = stream.uniform_in_ball(m.d, rho);
            double off2 = 0.0;
            for (int c = 0; c < m.d; ++c) {
                y[static_cast<std::size_t>(c)] = x0[static_cast<std::size_t>(c)] + off[static_cast<std::size_t>(c)];
                off2 += off[static_cast<std::size_t>(c)] * off[static_cast<std::size_t>(c)];
            }
            if (win.no_point_within(y, std::sqrt(off2))) {
                draw.distance = std::sqrt(off2);
                break;
            }
        }
        out[static_cast<std::size_t>(i)] = draw;
    });
    return out;
}

std::vector<double> farthest_point_samples(const ModelParams& m, long n, std::uint64_t seed) {
    validate(m);
    if (n < 1)
        throw std::invalid_argument("farthest_point_samples: n must be >= 1");
    std::vector<double> far(static_cast<std::size_t>(n));
    parallel_for(n, [&](long i) {
        RngStream stream = RngStream::substream(seed ^ 0xFA27E57ull, static_cast<std::uint64_t>(i));
        double fmax = 0.0;
        draw_typical_cell(m, stream, 512, &fmax);
        far[static_cast<std::size_t>(i)] = fmax;
    });
    return far;
}

double farthest_point_quantile(const ModelParams& m, double q, long n, std::uint64_t seed) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("farthest_point_quantile: q must lie in (0, 1)");
    std::vector<double> far = farthest_point_samples(m, n, seed);
    std::sort(far.begin(), far.end());
    const double idx = q * (static_cast<double>(n) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = std::min(lo + 1, static_cast<std::size_t>(n - 1));
    const double w = idx - std::floor(idx);
    return far[lo] * (1.0 - w) + far[hi] * w;
}

}  // namespace pvdist
