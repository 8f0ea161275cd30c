#include "pvdist/quadrature.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace pvdist::quad {

namespace {

// Nodes are the roots of the Legendre polynomial P_n, found by Newton
// iteration from the Chebyshev-based initial guess; weights follow from the
// derivative at the root.
Rule build_rule(int n) {
    Rule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.w[i] = w;
        rule.x[n - 1 - i] = x;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const Rule& gauss_rule(int n) {
    if (n < 2 || n > 256)
        throw std::invalid_argument("gauss_rule: node count out of range");
    static std::map<int, Rule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

}  // namespace pvdist::quad
