#include "pvdist/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pvdist/geometry.hpp"
#include "pvdist/limitshape.hpp"
#include "pvdist/model.hpp"
#include "pvdist/quadrature.hpp"
#include "pvdist/rng.hpp"
#include "pvdist/simulate.hpp"
#include "pvdist/specfun.hpp"
#include "pvdist/typical1d.hpp"
#include "pvdist/zerocell.hpp"

namespace pvdist::acceptance {
namespace {

// Validation targets: the reference table of the correction factor and of
// the mean/variance of the typical-cell distance at unit intensity,
// d = 1..10, plus the stated tolerances.
constexpr double kRhoRow[10] = {1.500, 1.285, 1.171, 1.128, 1.079,
                                1.062, 1.043, 1.032, 1.029, 1.018};
constexpr double kMeanApproxRow[10] = {0.333, 0.442, 0.524, 0.591, 0.648,
                                       0.698, 0.745, 0.789, 0.829, 0.862};
constexpr double kVarApproxRow[10] = {0.111, 0.053, 0.036, 0.028, 0.022,
                                      0.018, 0.015, 0.013, 0.012, 0.011};

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

// Collects sub-check lines and the running verdict for one criterion.
struct Checker {
    bool pass = true;
    std::ostringstream out;

    void line(bool ok, const std::string& text) {
        pass = pass && ok;
        out << "    [" << (ok ? " ok " : "FAIL") << "] " << text << "\n";
    }
    void note(const std::string& text) { out << "    [note] " << text << "\n"; }
};

double sample_mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// ---------------------------------------------------------------------------
// 1. Correction-factor table, d = 1..10, quadrature only.
CriterionResult crit_correction_factor_table(Context& ctx) {
    Checker c;
    const auto t0 = std::chrono::steady_clock::now();
    for (int d = 1; d <= 10; ++d) {
        const double rho = ctx.report(d).rho;
        const bool ok = std::abs(rho - kRhoRow[d - 1]) <= 0.02;
        c.line(ok, "rho[d=" + std::to_string(d) + "] = " + fmt(rho) + " vs " +
                       fmt(kRhoRow[d - 1], 4) + " (tol 0.02)");
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.line(secs < 600.0, "runtime " + fmt(secs, 3) + " s (< 600 s)");
    return {"correction-factor-table", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 2. Approximate mean/variance rows via the corrected closed-form law.
CriterionResult crit_approx_moment_rows(Context& ctx) {
    Checker c;
    for (int d = 1; d <= 10; ++d) {
        ModelParams m;
        m.d = d;
        const double rho = ctx.report(d).rho;
        const double e1 = approx_typical_moment(1, m, rho);
        const double e2 = approx_typical_moment(2, m, rho);
        const double var = e2 - e1 * e1;
        c.line(std::abs(e1 - kMeanApproxRow[d - 1]) <= 0.005,
               "approx mean[d=" + std::to_string(d) + "] = " + fmt(e1) + " vs " +
                   fmt(kMeanApproxRow[d - 1], 4) + " (tol 0.005)");
        c.line(std::abs(var - kVarApproxRow[d - 1]) <= 0.005,
               "approx var[d=" + std::to_string(d) + "] = " + fmt(var) + " vs " +
                   fmt(kVarApproxRow[d - 1], 4) + " (tol 0.005)");
    }
    return {"approx-moment-rows", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 3. Exact mean rows at desk scale: d=1 closed form, d=2 exact method and
//    simulation, d=3 simulation.
CriterionResult crit_exact_moment_rows(Context& ctx) {
    Checker c;
    const double mean1 = typical1d_mean(1.0);
    c.line(std::abs(mean1 - 0.305) <= 0.002,
           "d=1 closed-form mean = " + fmt(mean1) + " vs 0.305 (tol 0.002)");

    TypicalExactEvaluator& ev = ctx.evaluator_d2();
    const double mean2e = ev.mean();
    c.line(std::abs(mean2e - 0.445) <= 0.01,
           "d=2 exact-method mean (ell=1.6) = " + fmt(mean2e) + " vs 0.445 (tol 0.01)");
    c.note("d=2 exact-method mean std error = " + fmt(ev.mean_std_error(), 3));

    const double mean2s = sample_mean(ctx.typical_samples(2));
    c.line(std::abs(mean2s - 0.445) <= 0.01,
           "d=2 simulated mean (n=1e5) = " + fmt(mean2s) + " vs 0.445 (tol 0.01)");

    const double mean3s = sample_mean(ctx.typical_samples(3));
    c.line(std::abs(mean3s - 0.529) <= 0.01,
           "d=3 simulated mean (n=1e5) = " + fmt(mean3s) + " vs 0.529 (tol 0.01)");
    return {"exact-moment-rows", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 4. Mean distance in the cell containing the origin, d=2: 1/2 exactly in
//    closed form and within 0.005 by simulation.
CriterionResult crit_zerocell_mean_anchor(Context& ctx) {
    Checker c;
    ModelParams m;
    m.d = 2;
    const double closed = zerocell_moment(1, m);
    c.line(std::abs(closed - 0.5) <= 1e-12,
           "closed-form mean = " + fmt(closed, 15) + " (|.-0.5| <= 1e-12)");
    const double sim = sample_mean(ctx.zerocell_samples(2));
    c.line(std::abs(sim - 0.5) <= 0.005,
           "simulated mean (n=1e5) = " + fmt(sim) + " vs 0.500 (tol 0.005)");
    return {"zerocell-mean-anchor", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 5. Simulated laws match the closed/exact curves: KS statistics and the
//    d=2 sup-norm gap against the exact-method curve.
CriterionResult crit_distribution_equivalence(Context& ctx) {
    Checker c;
    for (int d = 1; d <= 3; ++d) {
        ModelParams m;
        m.d = d;
        const EmpiricalCdf ecdf(ctx.zerocell_samples(d));
        const double ks = ks_statistic(ecdf, [&](double r) { return contact_cdf(r, m); });
        c.line(ks < ctx.tol.ks, "origin-cell KS[d=" + std::to_string(d) + "] = " + fmt(ks) +
                                    " (< " + fmt(ctx.tol.ks) + ")");
    }
    {
        const EmpiricalCdf ecdf(ctx.typical_samples(1));
        const double ks = ks_statistic(ecdf, [](double r) { return typical1d_cdf(r, 1.0); });
        c.line(ks < ctx.tol.ks,
               "typical-cell KS[d=1] = " + fmt(ks) + " (< " + fmt(ctx.tol.ks) + ")");
    }
    {
        TypicalExactEvaluator& ev = ctx.evaluator_d2();
        const EmpiricalCdf ecdf(ctx.typical_samples(2));
        const auto& s = ecdf.sorted();
        const double n = static_cast<double>(s.size());
        double sup = 0.0;
        for (std::size_t i = 0; i < s.size() && s[i] <= 1.6; ++i) {
            const double f = ev.cdf(s[i]);
            sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
            sup = std::max(sup, std::abs(f - static_cast<double>(i + 1) / n));
        }
        sup = std::max(sup, std::abs(ev.cdf(1.6) - ecdf.at(1.6)));
        c.line(sup < 0.02,
               "d=2 sup gap, exact-method curve vs ECDF on [0,1.6] = " + fmt(sup) + " (< 0.02)");
    }
    return {"distribution-equivalence", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 6. The d=1 closed form agrees with direct quadrature of its derivation,
//    and the first deconditioning piece matches its closed form.
CriterionResult crit_line_cell_deconditioning(Context&) {
    Checker c;
    for (const double r : {0.1, 0.5, 1.0, 2.0}) {
        const double closed = typical1d_cdf(r, 1.0);
        const double quad = deconditioned_cdf_quadrature(r, 1.0);
        c.line(std::abs(closed - quad) <= 1e-6,
               "cdf(r=" + fmt(r, 3) + "): closed " + fmt(closed, 10) + ", quadrature " +
                   fmt(quad, 10) + " (tol 1e-6)");
    }
    for (const double r : {0.1, 0.5, 1.0, 2.0}) {
        const double closed = deconditioned_piece_both_gaps_below(r, 1.0);
        // Ordered region {0 <= r1 <= r2 <= r} mapped to the unit square via
        // r1 = t * r2 (Jacobian r2), keeping the integrand smooth.
        const quad::QuadResult q = quad::integrate_2d(
            [](double t, double r2) { return 8.0 * std::exp(-2.0 * (t * r2 + r2)) * r2; }, 0.0,
            1.0, 0.0, r, 1e-13);
        c.line(q.converged && std::abs(closed - q.value) <= 1e-12,
               "first piece(r=" + fmt(r, 3) + "): closed " + fmt(closed, 14) + ", quadrature " +
                   fmt(q.value, 14) + " (tol 1e-12)");
    }
    return {"line-cell-deconditioning", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 7. Annulus cap-hit probability: closed form vs direct quadrature on a
//    random (d, R, eps) grid.
CriterionResult crit_annulus_cap_probability(Context&) {
    Checker c;
    RngStream rng(20260707);
    double worst = 0.0;
    std::string worst_case = "none";
    for (int i = 0; i < 100; ++i) {
        InballCondition cond;
        cond.d = 2 + static_cast<int>(rng.uniform01() * 9.0);
        cond.d = std::min(cond.d, 10);
        cond.R = std::exp(rng.uniform(std::log(0.05), std::log(100.0)));
        cond.eps = std::exp(rng.uniform(std::log(0.001), std::log(5.0)));
        cond.lambda = 1.0;
        const double closed = cap_hit_probability(cond);
        const double quad = cap_hit_probability_quadrature(cond);
        const double diff = std::abs(closed - quad);
        if (diff > worst) {
            worst = diff;
            worst_case = "d=" + std::to_string(cond.d) + " R=" + fmt(cond.R, 4) +
                         " eps=" + fmt(cond.eps, 4);
        }
    }
    c.line(worst <= 1e-8,
           "worst |closed - quadrature| over 100 random cases = " + fmt(worst, 3) + " at " +
               worst_case + " (tol 1e-8)");
    return {"annulus-cap-probability", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 8. Two-ball union volume: the angular-split evaluation vs the lens
//    evaluation on 10^3 random cases, and Monte Carlo hit-testing on 20.
CriterionResult crit_two_ball_union_volume(Context&) {
    Checker c;
    RngStream rng(20260808);
    double worst_rel = 0.0;
    std::string worst_case = "none";
    for (int i = 0; i < 1000; ++i) {
        const int d = 2 + static_cast<int>(rng.uniform01() * 7.0);
        const double v1 = rng.uniform(0.05, 3.0);
        const double v2 = rng.uniform(0.05, 3.0);
        const double u = rng.uniform(1e-4, M_PI - 1e-4);
        const double a = union_volume(v1, v2, u, d);
        const double b = union_volume_lens(v1, v2, u, d);
        const double rel = std::abs(a - b) / std::max(a, b);
        if (rel > worst_rel) {
            worst_rel = rel;
            worst_case = "d=" + std::to_string(d) + " v1=" + fmt(v1, 4) + " v2=" + fmt(v2, 4) +
                         " u=" + fmt(u, 4);
        }
    }
    c.line(worst_rel <= 1e-6, "worst relative gap over 1000 random cases = " +
                                  fmt(worst_rel, 3) + " at " + worst_case + " (tol 1e-6)");

    for (int j = 0; j < 20; ++j) {
        const int d = 2 + j % 3;
        const double v1 = rng.uniform(0.2, 2.0);
        const double v2 = rng.uniform(0.2, 2.0);
        const double u = rng.uniform(0.1, M_PI - 0.1);
        // Ball centers in the plane spanned by the first two axes.
        std::vector<double> c1(static_cast<std::size_t>(d), 0.0);
        std::vector<double> c2(static_cast<std::size_t>(d), 0.0);
        c1[0] = v1;
        c2[0] = v2 * std::cos(u);
        c2[1] = v2 * std::sin(u);
        std::vector<double> mid(static_cast<std::size_t>(d), 0.0);
        for (int t = 0; t < d; ++t)
            mid[static_cast<std::size_t>(t)] =
                0.5 * (c1[static_cast<std::size_t>(t)] + c2[static_cast<std::size_t>(t)]);
        double half = 0.0;
        for (int t = 0; t < d; ++t) {
            const double dx =
                c1[static_cast<std::size_t>(t)] - mid[static_cast<std::size_t>(t)];
            half += dx * dx;
        }
        half = std::sqrt(half);
        const double renc = std::max(half + v1, half + v2);
        const double venc = dim_constants(d).kappa_d * std::pow(renc, d);
        const long n = 1000000;
        long hits = 0;
        for (long i = 0; i < n; ++i) {
            const std::vector<double> y = rng.uniform_in_ball(d, renc);
            double d1 = 0.0;
            double d2 = 0.0;
            for (int t = 0; t < d; ++t) {
                const double yt =
                    y[static_cast<std::size_t>(t)] + mid[static_cast<std::size_t>(t)];
                const double a1 = yt - c1[static_cast<std::size_t>(t)];
                const double a2 = yt - c2[static_cast<std::size_t>(t)];
                d1 += a1 * a1;
                d2 += a2 * a2;
            }
            if (d1 <= v1 * v1 || d2 <= v2 * v2)
                ++hits;
        }
        const double phat = static_cast<double>(hits) / static_cast<double>(n);
        const double est = phat * venc;
        const double sigma =
            venc * std::sqrt(std::max(phat * (1.0 - phat), 1e-12) / static_cast<double>(n));
        const double analytic = union_volume(v1, v2, u, d);
        c.line(std::abs(est - analytic) <= 3.0 * sigma,
               "MC case " + std::to_string(j) + " (d=" + std::to_string(d) +
                   "): |MC - analytic| = " + fmt(std::abs(est - analytic), 3) + " vs 3 sigma = " +
                   fmt(3.0 * sigma, 3));
    }
    return {"two-ball-union-volume", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 9. Ball-cell covariance end behavior: zero at r=0, the cell-volume
//    variance for large r, and a vanishing rate Cov/r^d decreasing to 0.
CriterionResult crit_covariance_limits(Context&) {
    Checker c;
    const double tol = 1e-7;
    for (const int d : {1, 2}) {
        ModelParams m;
        m.d = d;
        const double var = second_moment_cell_volume(m, tol) - 1.0;
        const double c0 = covariance_ball_cell(0.0, m, tol);
        c.line(std::abs(c0) <= 1e-6 * var, "d=" + std::to_string(d) + ": |Cov(0)| = " +
                                               fmt(std::abs(c0), 3) + " <= 1e-6 * Var = " +
                                               fmt(1e-6 * var, 3));
        const double r_large = std::pow(14.0 / dim_constants(d).kappa_d, 1.0 / d);
        const double ratio = covariance_ball_cell(r_large, m, tol) / var;
        c.line(ratio >= 0.99 && ratio <= 1.01,
               "d=" + std::to_string(d) + ": Cov(r=" + fmt(r_large, 4) + ")/Var = " +
                   fmt(ratio, 8) + " in [0.99, 1.01]");
        const std::vector<double> rates =
            covariance_vanishing_rate(m, {0.2, 0.1, 0.05}, tol);
        const bool decreasing = rates[0] > rates[1] && rates[1] > rates[2] && rates[2] > 0.0;
        c.line(decreasing, "d=" + std::to_string(d) + ": Cov/r^d at r={0.2,0.1,0.05} = {" +
                               fmt(rates[0], 5) + ", " + fmt(rates[1], 5) + ", " +
                               fmt(rates[2], 5) + "} strictly decreasing toward 0");
    }
    return {"covariance-limits", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 10. Large-inball sphericity: the coverage probability along an R grid and
//     the log-log growth rate of the coverage exponent h.
CriterionResult crit_large_inball_sphericity(Context&) {
    Checker c;
    const std::vector<double> r_grid = {1.0, 10.0, 100.0, 1000.0};
    std::vector<double> qv;
    for (const double R : r_grid) {
        InballCondition cond;
        cond.R = R;
        cond.eps = 0.1;
        cond.d = 2;
        cond.lambda = 1.0;
        qv.push_back(q_probability(cond));
    }
    bool increasing = true;
    for (std::size_t i = 1; i < qv.size(); ++i)
        increasing = increasing && qv[i] > qv[i - 1];
    c.line(increasing, "d=2, eps=0.1: Q(R) over R={1,10,100,1000} = {" + fmt(qv[0], 5) + ", " +
                           fmt(qv[1], 5) + ", " + fmt(qv[2], 5) + ", " + fmt(qv[3], 5) +
                           "} increasing");
    c.line(qv.back() > 0.999, "d=2, eps=0.1: Q(1000) = " + fmt(qv.back(), 5) + " (> 0.999)");

    for (const int d : {2, 3}) {
        std::vector<double> grid;
        for (int i = 0; i < 12; ++i)
            grid.push_back(std::pow(10.0, 1.0 + 2.0 * i / 11.0));  // 10 .. 1000
        const SlopeReport rep = h_growth_diagnostic(d, 0.1, grid);
        const double target = 0.5 * (d + 1);
        c.line(std::abs(rep.slope - target) <= 0.1,
               "d=" + std::to_string(d) + ": log-log slope of h on [10,1000] = " +
                   fmt(rep.slope, 5) + " vs " + fmt(target, 3) + " (tol 0.1)");
    }
    return {"large-inball-sphericity", c.pass, c.out.str()};
}

// ---------------------------------------------------------------------------
// 11. Cross-cutting properties: monotone CDFs in [0,1], stochastic
//     dominance of the typical-cell law over the origin-cell law, the
//     correction factor's shape/invariance, and full determinism.
CriterionResult crit_property_suite(Context& ctx) {
    Checker c;

    const auto check_curve = [&c](const std::string& name,
                                  const std::function<double(double)>& F, double rmax,
                                  int npts) {
        bool mono = true;
        bool in01 = true;
        double prev = -1.0;
        for (int i = 0; i <= npts; ++i) {
            const double r = rmax * static_cast<double>(i) / npts;
            const double v = F(r);
            if (v < prev - 1e-12)
                mono = false;
            if (v < -1e-12 || v > 1.0 + 1e-12)
                in01 = false;
            prev = std::max(prev, v);
        }
        c.line(mono && in01, name + " nondecreasing within [0,1] on [0," + fmt(rmax, 3) + "]");
    };

    for (const int d : {1, 2, 3, 5, 10}) {
        ModelParams m;
        m.d = d;
        const double rmax = 4.0 / std::pow(dim_constants(d).kappa_d, 1.0 / d);
        check_curve("origin-cell cdf d=" + std::to_string(d),
                    [&m](double r) { return contact_cdf(r, m); }, rmax, 400);
    }
    check_curve("typical-cell closed-form cdf d=1",
                [](double r) { return typical1d_cdf(r, 1.0); }, 6.0, 400);
    for (const int d : {1, 2, 3}) {
        ModelParams m;
        m.d = d;
        const double rho = ctx.report(d).rho;
        check_curve("corrected approximate cdf d=" + std::to_string(d),
                    [&m, rho](double r) { return approx_typical_cdf(r, m, rho); }, 3.0, 400);
    }
    {
        TypicalExactEvaluator& ev = ctx.evaluator_d2();
        check_curve("exact-method curve d=2", [&ev](double z) { return ev.cdf(z); }, 1.6, 800);
    }
    {
        bool in01 = true;
        for (const double R : {0.5, 1.0, 2.0, 5.0, 10.0, 100.0}) {
            for (const double eps : {0.01, 0.1, 1.0}) {
                InballCondition cond;
                cond.R = R;
                cond.eps = eps;
                cond.d = 2;
                cond.lambda = 1.0;
                const double q = q_probability(cond);
                in01 = in01 && q >= 0.0 && q <= 1.0;
            }
        }
        c.line(in01, "coverage probability in [0,1] on an (R, eps) grid");
    }

    // Dominance: the origin-cell distance stochastically exceeds the
    // typical-cell distance, so its CDF sits below.
    {
        double worst = -1.0;
        for (int i = 0; i <= 400; ++i) {
            const double r = 6.0 * i / 400.0;
            ModelParams m1;
            m1.d = 1;
            worst = std::max(worst, contact_cdf(r, m1) - typical1d_cdf(r, 1.0));
        }
        c.line(worst <= 1e-12, "d=1: max(origin-cell cdf - typical cdf) = " + fmt(worst, 3) +
                                   " (<= 1e-12)");
    }
    for (const int d : {1, 2}) {
        ModelParams m;
        m.d = d;
        const double rho = ctx.report(d).rho;
        double worst = -1.0;
        for (int i = 0; i <= 400; ++i) {
            const double r = 3.0 * i / 400.0;
            worst = std::max(worst, contact_cdf(r, m) - approx_typical_cdf(r, m, rho));
        }
        c.line(worst <= 1e-12, "d=" + std::to_string(d) +
                                   ": max(origin-cell cdf - corrected approx cdf) = " +
                                   fmt(worst, 3) + " (<= 1e-12)");
    }
    {
        TypicalExactEvaluator& ev = ctx.evaluator_d2();
        ModelParams m2;
        m2.d = 2;
        double worst = -1.0;
        for (int i = 0; i <= 800; ++i) {
            const double r = 1.6 * i / 800.0;
            worst = std::max(worst,
                             contact_cdf(r, m2) - (ev.cdf(r) + 3.0 * ev.std_error(r)));
        }
        c.line(worst <= 1e-3,
               "d=2: max(origin-cell cdf - exact-method curve - 3 sigma) = " + fmt(worst, 3) +
                   " (<= 1e-3 noise floor)");
    }

    // Correction factor: >= 1, strictly decreasing over d = 1..6, and
    // intensity-invariant.
    {
        bool geq1 = true;
        bool decreasing = true;
        for (int d = 1; d <= 6; ++d) {
            const double rho = ctx.report(d).rho;
            geq1 = geq1 && rho >= 1.0;
            if (d > 1)
                decreasing = decreasing && rho < ctx.report(d - 1).rho;
        }
        c.line(geq1, "correction factor >= 1 for d = 1..6");
        c.line(decreasing, "correction factor strictly decreasing over d = 1..6");
        double worst = 0.0;
        for (const int d : {2, 3}) {
            for (const double lam : {0.5, 3.0}) {
                ModelParams m;
                m.d = d;
                m.lambda = lam;
                const double rho_lam =
                    1.0 + lam * lam * (second_moment_cell_volume(m, 1e-5) - 1.0 / (lam * lam));
                worst = std::max(worst, std::abs(rho_lam - ctx.report(d).rho));
            }
        }
        c.line(worst <= 1e-4,
               "max |rho(lambda) - rho(1)| over d={2,3}, lambda={0.5,3} = " + fmt(worst, 3) +
                   " (<= 1e-4)");
    }

    // Determinism: identical seeds reproduce every sampled artifact exactly.
    {
        ModelParams m2;
        m2.d = 2;
        const std::vector<double> a = sample_typical_distance(m2, 1000, 4242);
        const std::vector<double> b = sample_typical_distance(m2, 1000, 4242);
        c.line(a == b, "typical-cell sampler: identical seed => identical 1000 draws");
        const std::vector<ZeroCellDraw> za = sample_zerocell_distance(m2, 500, 777);
        const std::vector<ZeroCellDraw> zb = sample_zerocell_distance(m2, 500, 777);
        bool same = za.size() == zb.size();
        for (std::size_t i = 0; same && i < za.size(); ++i)
            same = za[i].distance == zb[i].distance && za[i].nucleus_norm == zb[i].nucleus_norm;
        c.line(same, "origin-cell sampler: identical seed => identical 500 draws");
        McBudget small;
        small.outer_configs = 64;
        small.inner_points = 256;
        small.seed = 99;
        small.tail_tol = 1e-4;
        const double e1 = typical_cdf_exact(0.8, m2, 1.6, small);
        const double e2 = typical_cdf_exact(0.8, m2, 1.6, small);
        c.line(e1 == e2, "exact-method curve: identical budget/seed => identical value");
    }

    return {"property-suite", c.pass, c.out.str()};
}

using CriterionFn = CriterionResult (*)(Context&);

const std::vector<std::pair<std::string, CriterionFn>>& registry() {
    static const std::vector<std::pair<std::string, CriterionFn>> r = {
        {"correction-factor-table", crit_correction_factor_table},
        {"approx-moment-rows", crit_approx_moment_rows},
        {"exact-moment-rows", crit_exact_moment_rows},
        {"zerocell-mean-anchor", crit_zerocell_mean_anchor},
        {"distribution-equivalence", crit_distribution_equivalence},
        {"line-cell-deconditioning", crit_line_cell_deconditioning},
        {"annulus-cap-probability", crit_annulus_cap_probability},
        {"two-ball-union-volume", crit_two_ball_union_volume},
        {"covariance-limits", crit_covariance_limits},
        {"large-inball-sphericity", crit_large_inball_sphericity},
        {"property-suite", crit_property_suite},
    };
    return r;
}

}  // namespace

const MomentReport& Context::report(int d) {
    auto it = reports_.find(d);
    if (it != reports_.end())
        return it->second;
    ModelParams m;
    m.d = d;
    return reports_.emplace(d, second_moment_report(m, 1e-5)).first->second;
}

TypicalExactEvaluator& Context::evaluator_d2() {
    if (!eval2_) {
        ModelParams m;
        m.d = 2;
        McBudget b;
        b.outer_configs = 2048;
        b.inner_points = 4096;
        b.seed = 24601;
        eval2_ = std::make_shared<TypicalExactEvaluator>(m, 1.6, b);
    }
    return *eval2_;
}

const std::vector<double>& Context::typical_samples(int d) {
    auto it = typical_.find(d);
    if (it != typical_.end())
        return it->second;
    ModelParams m;
    m.d = d;
    return typical_
        .emplace(d, sample_typical_distance(m, 100000, 31400 + static_cast<std::uint64_t>(d)))
        .first->second;
}

const std::vector<double>& Context::zerocell_samples(int d) {
    auto it = zerocell_.find(d);
    if (it != zerocell_.end())
        return it->second;
    ModelParams m;
    m.d = d;
    const std::vector<ZeroCellDraw> draws =
        sample_zerocell_distance(m, 100000, 27100 + static_cast<std::uint64_t>(d));
    std::vector<double> dist(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
        dist[i] = draws[i].distance;
    return zerocell_.emplace(d, std::move(dist)).first->second;
}

const std::vector<std::string>& criterion_slugs() {
    static const std::vector<std::string> slugs = [] {
        std::vector<std::string> s;
        for (const auto& [slug, fn] : registry())
            s.push_back(slug);
        return s;
    }();
    return slugs;
}

CriterionResult run_criterion(const std::string& slug, Context& ctx) {
    for (const auto& [name, fn] : registry()) {
        if (name == slug)
            return fn(ctx);
    }
    throw std::invalid_argument("unknown criterion: " + slug);
}

std::vector<CriterionResult> run_all(Context& ctx, std::ostream* progress) {
    std::vector<CriterionResult> results;
    const auto& reg = registry();
    for (std::size_t i = 0; i < reg.size(); ++i) {
        CriterionResult r = reg[i].second(ctx);
        if (progress) {
            *progress << "[" << (i + 1) << "/" << reg.size() << "] "
                      << (r.pass ? "PASS" : "FAIL") << "  " << r.slug << "\n"
                      << r.details << std::flush;
        }
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace pvdist::acceptance
