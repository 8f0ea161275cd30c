#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pvdist/specfun.hpp"

namespace pvdist::quad {

/// Gauss-Legendre rule on [-1, 1]: paired nodes and weights.
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Returns the n-point Gauss-Legendre rule, computed once and cached.
const Rule& gauss_rule(int n);

/// Estimate and self-reported accuracy of a quadrature. `error` is the change
/// at the last panel doubling; `converged` is false when the doubling budget
/// ran out before the tolerance was met.
struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

namespace detail {

inline bool accept(double cur, double prev, double tol, double* err) {
    *err = std::fabs(cur - prev);
    return *err <= tol * std::max(1.0, std::fabs(cur));
}

}  // namespace detail

/// Composite n-node Gauss-Legendre over [a, b] split into `panels` equal panels.
template <class F>
double composite_1d(F&& f, double a, double b, int panels, const Rule& rule) {
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.x.size(); ++i)
            sum += rule.w[i] * f(mid + 0.5 * h * rule.x[i]);
    }
    return 0.5 * h * sum;
}

/// Integrates f over [a, b], doubling the panel count until successive
/// estimates agree to tol (relative to max(1, |value|)).
template <class F>
QuadResult integrate_1d(F&& f, double a, double b, double tol, int nodes = 16,
                        int max_doublings = 14) {
    if (b <= a) return {0.0, 0.0, true};
    const Rule& rule = gauss_rule(nodes);
    int panels = 1;
    double prev = composite_1d(f, a, b, panels, rule);
    for (int level = 0; level < max_doublings; ++level) {
        panels *= 2;
        const double cur = composite_1d(f, a, b, panels, rule);
        double err = 0.0;
        if (detail::accept(cur, prev, tol, &err))
            return {cur, err, true};
        prev = cur;
    }
    return {prev, std::fabs(prev) * tol * 10.0, false};
}

template <class F>
double composite_2d(F&& f, double ax, double bx, double ay, double by, int panels,
                    const Rule& rule) {
    const double hx = (bx - ax) / panels;
    const double hy = (by - ay) / panels;
    const std::size_t n = rule.x.size();
    double sum = 0.0;
    for (int px = 0; px < panels; ++px) {
        const double cx = ax + (px + 0.5) * hx;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = cx + 0.5 * hx * rule.x[i];
            double row = 0.0;
            for (int py = 0; py < panels; ++py) {
                const double cy = ay + (py + 0.5) * hy;
                for (std::size_t j = 0; j < n; ++j)
                    row += rule.w[j] * f(x, cy + 0.5 * hy * rule.x[j]);
            }
            sum += rule.w[i] * row;
        }
    }
    return 0.25 * hx * hy * sum;
}

template <class F>
QuadResult integrate_2d(F&& f, double ax, double bx, double ay, double by, double tol,
                        int nodes = 16, int max_doublings = 8) {
    if (bx <= ax || by <= ay) return {0.0, 0.0, true};
    const Rule& rule = gauss_rule(nodes);
    int panels = 1;
    double prev = composite_2d(f, ax, bx, ay, by, panels, rule);
    for (int level = 0; level < max_doublings; ++level) {
        panels *= 2;
        const double cur = composite_2d(f, ax, bx, ay, by, panels, rule);
        double err = 0.0;
        if (detail::accept(cur, prev, tol, &err))
            return {cur, err, true};
        prev = cur;
    }
    return {prev, std::fabs(prev) * tol * 10.0, false};
}

template <class F>
double composite_3d(F&& f, double ax, double bx, double ay, double by, double az, double bz,
                    int panels, const Rule& rule) {
    const double hx = (bx - ax) / panels;
    const double hy = (by - ay) / panels;
    const double hz = (bz - az) / panels;
    const std::size_t n = rule.x.size();
    double sum = 0.0;
    for (int px = 0; px < panels; ++px) {
        const double cx = ax + (px + 0.5) * hx;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = cx + 0.5 * hx * rule.x[i];
            double plane = 0.0;
            for (int py = 0; py < panels; ++py) {
                const double cy = ay + (py + 0.5) * hy;
                for (std::size_t j = 0; j < n; ++j) {
                    const double y = cy + 0.5 * hy * rule.x[j];
                    double row = 0.0;
                    for (int pz = 0; pz < panels; ++pz) {
                        const double cz = az + (pz + 0.5) * hz;
                        for (std::size_t k = 0; k < n; ++k)
                            row += rule.w[k] * f(x, y, cz + 0.5 * hz * rule.x[k]);
                    }
                    plane += rule.w[j] * row;
                }
            }
            sum += rule.w[i] * plane;
        }
    }
    return 0.125 * hx * hy * hz * sum;
}

template <class F>
QuadResult integrate_3d(F&& f, double ax, double bx, double ay, double by, double az, double bz,
                        double tol, int nodes = 12, int max_doublings = 5) {
    if (bx <= ax || by <= ay || bz <= az) return {0.0, 0.0, true};
    const Rule& rule = gauss_rule(nodes);
    int panels = 1;
    double prev = composite_3d(f, ax, bx, ay, by, az, bz, panels, rule);
    for (int level = 0; level < max_doublings; ++level) {
        panels *= 2;
        const double cur = composite_3d(f, ax, bx, ay, by, az, bz, panels, rule);
        double err = 0.0;
        if (detail::accept(cur, prev, tol, &err))
            return {cur, err, true};
        prev = cur;
    }
    return {prev, std::fabs(prev) * tol * 10.0, false};
}

/// Unwraps a QuadResult, throwing NumericalError when unconverged.
inline double require(const QuadResult& q, const char* what) {
    if (!q.converged)
        throw NumericalError(std::string("quadrature did not converge: ") + what);
    return q.value;
}

}  // namespace pvdist::quad
