#include "pvdist/specfun.hpp"

#include <cmath>
#include <limits>

namespace pvdist {

double log_gamma(double x) {
    if (!(x > 0.0))
        throw std::invalid_argument("log_gamma: argument must be > 0");
    return std::lgamma(x);
}

double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("beta: parameters must be > 0");
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

DimConstants dim_constants(int d) {
    if (d < 1)
        throw std::invalid_argument("dim_constants: dimension must be >= 1");
    const double dd = static_cast<double>(d);
    const double kappa = std::exp(0.5 * dd * std::log(M_PI) - log_gamma(0.5 * dd + 1.0));
    const double chi = dd * kappa;
    const double alpha =
        std::exp(log_gamma(0.5 * dd + 1.0) - log_gamma(0.5) - log_gamma(0.5 * (dd + 1.0)));
    double c_d2 = std::numeric_limits<double>::quiet_NaN();
    if (d >= 2) {
        const double kappa_prev =
            std::exp(0.5 * (dd - 1.0) * std::log(M_PI) - log_gamma(0.5 * (dd - 1.0) + 1.0));
        const double kappa2 = M_PI;
        const double kappa1 = 2.0;
        const double pairs = std::exp(log_gamma(dd + 1.0) - log_gamma(dd - 1.0)) / 2.0;
        c_d2 = pairs * kappa * kappa_prev / (kappa2 * kappa1);
    }
    return DimConstants{d, kappa, chi, alpha, c_d2};
}

namespace {

// Lentz's continued fraction for the incomplete beta, convergent for
// z < (a+1)/(a+b+2); the caller applies the symmetry switch.
double beta_cont_fraction(double z, double a, double b) {
    constexpr int max_iter = 300;
    constexpr double eps = 1e-16;
    const double tiny = std::numeric_limits<double>::min() / eps;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * z / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * z / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            return h;
    }
    throw NumericalError("reg_inc_beta: continued fraction did not converge");
}

void check_beta_args(double z, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete beta: parameters must be > 0");
    if (!(z >= 0.0) || !(z <= 1.0))
        throw std::invalid_argument("incomplete beta: z must lie in [0, 1]");
}

}  // namespace

double reg_inc_beta(double z, double a, double b) {
    check_beta_args(z, a, b);
    if (z == 0.0) return 0.0;
    if (z == 1.0) return 1.0;
    const double lbt = log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(z) +
                       b * std::log1p(-z);
    const double bt = std::exp(lbt);
    if (z < (a + 1.0) / (a + b + 2.0))
        return bt * beta_cont_fraction(z, a, b) / a;
    return 1.0 - bt * beta_cont_fraction(1.0 - z, b, a) / b;
}

double inc_beta(double z, double a, double b) {
    return reg_inc_beta(z, a, b) * beta(a, b);
}

double exp_integral_e1(double z) {
    if (!(z > 0.0))
        throw std::invalid_argument("exp_integral_e1: argument must be > 0");
    constexpr double euler_gamma = 0.57721566490153286060651209;
    if (z <= 1.0) {
        // E1(z) = -gamma - ln z + sum_{k>=1} (-1)^{k+1} z^k / (k * k!)
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= -z / k;
            const double add = -term / k;
            sum += add;
            if (std::fabs(add) < 1e-18 * std::fabs(sum))
                break;
        }
        return -euler_gamma - std::log(z) + sum;
    }
    // Modified Lentz continued fraction:
    // E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(...))))
    constexpr int max_iter = 200;
    const double tiny = 1e-300;
    double b0 = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b0;
    double h = d;
    for (int i = 1; i <= max_iter; ++i) {
        const double an = -static_cast<double>(i) * i;
        b0 += 2.0;
        d = an * d + b0;
        if (std::fabs(d) < tiny) d = tiny;
        c = b0 + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return h * std::exp(-z);
    }
    throw NumericalError("exp_integral_e1: continued fraction did not converge");
}

}  // namespace pvdist
