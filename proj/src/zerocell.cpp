#include "pvdist/zerocell.hpp"

#include <cmath>
#include <stdexcept>

#include "pvdist/specfun.hpp"

namespace pvdist {

namespace {

double rate(const ModelParams& m) {
    validate(m);
    return m.lambda * dim_constants(m.d).kappa_d;
}

}  // namespace

double contact_cdf(double r, const ModelParams& m) {
    const double a = rate(m);
    if (r < 0.0)
        throw std::invalid_argument("contact_cdf: r must be >= 0");
    return -std::expm1(-a * std::pow(r, m.d));
}

double contact_pdf(double r, const ModelParams& m) {
    const double a = rate(m);
    if (r < 0.0)
        throw std::invalid_argument("contact_pdf: r must be >= 0");
    return m.d * a * std::pow(r, m.d - 1) * std::exp(-a * std::pow(r, m.d));
}

double contact_quantile(double p, const ModelParams& m) {
    const double a = rate(m);
    if (p < 0.0 || p >= 1.0)
        throw std::invalid_argument("contact_quantile: p must lie in [0, 1)");
    return std::pow(-std::log1p(-p) / a, 1.0 / m.d);
}

double zerocell_moment(int n, const ModelParams& m) {
    const double a = rate(m);
    if (n < 1)
        throw std::invalid_argument("zerocell_moment: n must be >= 1");
    const double nd = static_cast<double>(n) / m.d;
    return std::exp(log_gamma(1.0 + nd)) / std::pow(a, nd);
}

}  // namespace pvdist
