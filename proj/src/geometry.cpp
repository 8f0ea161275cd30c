#include "pvdist/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "pvdist/specfun.hpp"

namespace pvdist {

namespace {

void check_angle_count(const PolarPoint& p, int d) {
    if (d < 1)
        throw std::invalid_argument("polar point: dimension must be >= 1");
    const std::size_t n = p.angles.size();
    if (d == 1) {
        if (n > 1)
            throw std::invalid_argument("polar point: d = 1 takes at most one sign angle");
        return;
    }
    if (n != static_cast<std::size_t>(d - 1))
        throw std::invalid_argument("polar point: angle count does not match dimension");
}

double clamp01(double z) {
    if (z < 0.0) return 0.0;
    if (z > 1.0) return 1.0;
    return z;
}

}  // namespace

std::vector<double> polar_to_cartesian(const PolarPoint& p, int d) {
    check_angle_count(p, d);
    if (p.radius < 0.0)
        throw std::invalid_argument("polar point: radius must be >= 0");
    std::vector<double> x(static_cast<std::size_t>(d));
    if (d == 1) {
        x[0] = p.angles.empty() ? p.radius : p.radius * std::cos(p.angles[0]);
        return x;
    }
    double sines = p.radius;
    for (int i = 0; i < d - 1; ++i) {
        x[i] = sines * std::cos(p.angles[i]);
        sines *= std::sin(p.angles[i]);
    }
    x[d - 1] = sines;
    return x;
}

PolarPoint cartesian_to_polar(const std::vector<double>& x) {
    const int d = static_cast<int>(x.size());
    if (d < 1)
        throw std::invalid_argument("cartesian_to_polar: empty vector");
    PolarPoint p;
    if (d == 1) {
        p.radius = std::fabs(x[0]);
        if (x[0] < 0.0)
            p.angles.push_back(M_PI);
        return p;
    }
    // Tail norms: tail[i] = sqrt(x_i^2 + ... + x_{d-1}^2).
    std::vector<double> tail(static_cast<std::size_t>(d) + 1, 0.0);
    for (int i = d - 1; i >= 0; --i)
        tail[i] = std::hypot(x[i], tail[i + 1]);
    p.radius = tail[0];
    p.angles.resize(static_cast<std::size_t>(d - 1));
    for (int i = 0; i < d - 2; ++i)
        p.angles[i] = std::atan2(tail[i + 1], x[i]);
    double last = std::atan2(x[d - 1], x[d - 2]);
    if (last < 0.0)
        last += 2.0 * M_PI;
    p.angles[d - 2] = last;
    return p;
}

double pair_distance(const PolarPoint& y, const PolarPoint& x, int d) {
    const std::vector<double> a = polar_to_cartesian(y, d);
    const std::vector<double> b = polar_to_cartesian(x, d);
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return std::sqrt(s);
}

double normalized_sin_power_integral(int d, double psi) {
    if (d < 1)
        throw std::invalid_argument("normalized_sin_power_integral: dimension must be >= 1");
    if (psi < -1e-12 || psi > M_PI + 1e-12)
        throw std::invalid_argument("normalized_sin_power_integral: psi must lie in [0, pi]");
    psi = std::min(std::max(psi, 0.0), M_PI);
    const double a = 0.5 * (d + 1.0);
    const double b = 0.5;
    if (psi <= 0.5 * M_PI) {
        const double s = std::sin(psi);
        return 0.5 * reg_inc_beta(clamp01(s * s), a, b);
    }
    const double s = std::sin(M_PI - psi);
    return 1.0 - 0.5 * reg_inc_beta(clamp01(s * s), a, b);
}

double cap_surface_area(int d, double ball_radius, double cap_base_distance) {
    if (d < 2)
        throw std::invalid_argument("cap_surface_area: requires d >= 2");
    if (!(ball_radius > 0.0))
        throw std::invalid_argument("cap_surface_area: ball radius must be > 0");
    if (cap_base_distance < 0.0 || cap_base_distance > ball_radius)
        throw std::invalid_argument("cap_surface_area: base distance outside [0, radius]");
    const DimConstants c = dim_constants(d);
    const double t = cap_base_distance / ball_radius;
    const double z = clamp01((1.0 - t) * (1.0 + t));
    return 0.5 * c.chi_d * std::pow(ball_radius, d - 1) *
           reg_inc_beta(z, 0.5 * (d - 1.0), 0.5);
}

double ball_cap_volume(int d, double ball_radius, double cap_base_distance) {
    if (d < 1)
        throw std::invalid_argument("ball_cap_volume: dimension must be >= 1");
    if (!(ball_radius > 0.0))
        throw std::invalid_argument("ball_cap_volume: ball radius must be > 0");
    const double t = std::fabs(cap_base_distance);
    if (t > ball_radius)
        throw std::invalid_argument("ball_cap_volume: base distance exceeds radius");
    const DimConstants c = dim_constants(d);
    const double ball = c.kappa_d * std::pow(ball_radius, d);
    const double frac = t / ball_radius;
    const double z = clamp01((1.0 - frac) * (1.0 + frac));
    const double minor = 0.5 * ball * reg_inc_beta(z, 0.5 * (d + 1.0), 0.5);
    return cap_base_distance >= 0.0 ? minor : ball - minor;
}

TwoBallGeometry psi_split(double v1, double v2, double u) {
    if (v1 < 0.0 || v2 < 0.0)
        throw std::invalid_argument("psi_split: radii must be >= 0");
    if (!(v1 + v2 > 0.0))
        throw std::invalid_argument("psi_split: at least one radius must be positive");
    if (u < -1e-12 || u > M_PI + 1e-12)
        throw std::invalid_argument("psi_split: u must lie in [0, pi]");
    u = std::min(std::max(u, 0.0), M_PI);

    TwoBallGeometry g;
    g.v1 = v1;
    g.v2 = v2;
    g.u = u;
    const double c = M_PI - u;
    if (c == 0.0)
        return g;

    const auto f = [&](double psi) { return v1 * std::sin(psi) - v2 * std::sin(c - psi); };
    double lo = 0.0;
    double hi = c;
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) {
        g.psi1 = lo;
        g.psi2 = c;
        return g;
    }
    if (fhi == 0.0) {
        g.psi1 = hi;
        g.psi2 = 0.0;
        return g;
    }
    if (flo > 0.0 || fhi < 0.0)
        throw NumericalError("psi_split: endpoints do not bracket a root");
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        if (fm < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    g.psi1 = 0.5 * (lo + hi);
    g.psi2 = c - g.psi1;
    return g;
}

double union_volume(double v1, double v2, double u, int d) {
    if (d < 1)
        throw std::invalid_argument("union_volume: dimension must be >= 1");
    if (v1 < 0.0 || v2 < 0.0)
        throw std::invalid_argument("union_volume: radii must be >= 0");
    const DimConstants c = dim_constants(d);
    if (v1 == 0.0 && v2 == 0.0)
        return 0.0;
    if (v1 == 0.0)
        return c.kappa_d * std::pow(v2, d);
    if (v2 == 0.0)
        return c.kappa_d * std::pow(v1, d);
    if (u == 0.0)  // collinear: the smaller ball nests inside the larger
        return c.kappa_d * std::pow(std::max(v1, v2), d);
    const TwoBallGeometry g = psi_split(v1, v2, u);
    const double b1 = c.kappa_d * std::pow(v1, d);
    const double b2 = c.kappa_d * std::pow(v2, d);
    return b1 + b2 - b1 * normalized_sin_power_integral(d, g.psi1) -
           b2 * normalized_sin_power_integral(d, g.psi2);
}

double union_volume_lens(double v1, double v2, double u, int d) {
    if (d < 1)
        throw std::invalid_argument("union_volume_lens: dimension must be >= 1");
    if (v1 < 0.0 || v2 < 0.0)
        throw std::invalid_argument("union_volume_lens: radii must be >= 0");
    if (u < -1e-12 || u > M_PI + 1e-12)
        throw std::invalid_argument("union_volume_lens: u must lie in [0, pi]");
    const DimConstants c = dim_constants(d);
    const double b1 = c.kappa_d * std::pow(v1, d);
    const double b2 = c.kappa_d * std::pow(v2, d);
    if (v1 == 0.0 || v2 == 0.0)
        return b1 + b2;

    const double delta2 = v1 * v1 + v2 * v2 - 2.0 * v1 * v2 * std::cos(u);
    const double delta = std::sqrt(std::max(delta2, 0.0));
    const double vmin = std::min(v1, v2);
    double lens = 0.0;
    if (delta >= v1 + v2) {
        lens = 0.0;
    } else if (delta <= std::fabs(v1 - v2)) {
        lens = c.kappa_d * std::pow(vmin, d);
    } else {
        const double t1 = (delta2 + v1 * v1 - v2 * v2) / (2.0 * delta);
        const double t2 = delta - t1;
        lens = ball_cap_volume(d, v1, t1) + ball_cap_volume(d, v2, t2);
    }
    return b1 + b2 - lens;
}

}  // namespace pvdist
