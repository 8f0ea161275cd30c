// Command-line surface: distribution queries, the accuracy table, the
// validation suite, and the large-inball diagnostics, emitted as CSV or JSON
// with a reproducibility metadata header.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pvdist/acceptance.hpp"
#include "pvdist/limitshape.hpp"
#include "pvdist/model.hpp"
#include "pvdist/moments.hpp"
#include "pvdist/output.hpp"
#include "pvdist/quadrature.hpp"
#include "pvdist/simulate.hpp"
#include "pvdist/specfun.hpp"
#include "pvdist/typical1d.hpp"
#include "pvdist/typicalexact.hpp"
#include "pvdist/zerocell.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

struct Options {
    int d = 2;
    double lambda = 1.0;
    std::uint64_t seed = 1;
    long samples = 10000;
    long inner_samples = 4096;
    double ell = 0.0;  // 0 = calibrate automatically
    int kmax = 0;
    double tail_tol = 1e-6;
    std::string grid = "0:2:201";
    std::string format = "csv";
    std::string out;
    std::string method = "approx";
    double eps = 0.1;
    std::string dims = "1:10";
    std::string exact_dims = "1:3";
    std::string criterion;
    double ks_tol = 0.01;
};

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 0;
};

GridSpec parse_grid(const std::string& s, bool positive_lo) {
    GridSpec g;
    char c1 = 0;
    char c2 = 0;
    std::istringstream is(s);
    if (!(is >> g.lo >> c1 >> g.hi >> c2 >> g.steps) || c1 != ':' || c2 != ':' ||
        !(is >> std::ws).eof())
        throw std::invalid_argument("--grid expects min:max:steps, got '" + s + "'");
    if (g.steps < 2)
        throw std::invalid_argument("--grid needs steps >= 2");
    if (!(g.hi > g.lo))
        throw std::invalid_argument("--grid needs max > min");
    if (g.lo < 0.0 || (positive_lo && g.lo <= 0.0))
        throw std::invalid_argument(positive_lo ? "--grid needs min > 0 for this command"
                                                : "--grid needs min >= 0");
    return g;
}

std::vector<double> linear_points(const GridSpec& g) {
    std::vector<double> r(static_cast<std::size_t>(g.steps));
    for (int i = 0; i < g.steps; ++i)
        r[static_cast<std::size_t>(i)] = g.lo + (g.hi - g.lo) * i / (g.steps - 1);
    return r;
}

std::vector<double> log_points(const GridSpec& g) {
    std::vector<double> r(static_cast<std::size_t>(g.steps));
    const double llo = std::log(g.lo);
    const double lhi = std::log(g.hi);
    for (int i = 0; i < g.steps; ++i)
        r[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (g.steps - 1));
    return r;
}

std::pair<int, int> parse_dim_range(const std::string& s, const char* flag) {
    int lo = 0;
    int hi = 0;
    char c = 0;
    std::istringstream is(s);
    if (!(is >> lo >> c >> hi) || c != ':' || !(is >> std::ws).eof())
        throw std::invalid_argument(std::string(flag) + " expects lo:hi, got '" + s + "'");
    if (lo < 1 || hi > 10 || lo > hi)
        throw std::invalid_argument(std::string(flag) + " must satisfy 1 <= lo <= hi <= 10");
    return {lo, hi};
}

void emit(const pvdist::OutputTable& table, const Options& o) {
    const auto write = [&](std::ostream& os) {
        if (o.format == "json")
            pvdist::write_json(os, table);
        else
            pvdist::write_csv(os, table);
    };
    if (o.out.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream f(o.out);
    if (!f)
        throw std::invalid_argument("cannot open output file: " + o.out);
    write(f);
}

std::map<std::string, std::string> base_metadata(const std::string& command, const Options& o) {
    return {
        {"command", command},
        {"version", kVersion},
        {"format", o.format},
        {"seed", std::to_string(o.seed)},
    };
}

double sample_mean(const std::vector<double>& xs) {
    double acc = 0.0;
    for (const double x : xs)
        acc += x;
    return acc / static_cast<double>(xs.size());
}

double sample_var(const std::vector<double>& xs) {
    const double m = sample_mean(xs);
    double acc = 0.0;
    for (const double x : xs)
        acc += (x - m) * (x - m);
    return acc / (static_cast<double>(xs.size()) - 1.0);
}

// ---------------------------------------------------------------------------

int cmd_contact_cdf(const Options& o) {
    pvdist::ModelParams m;
    m.d = o.d;
    m.lambda = o.lambda;
    pvdist::validate(m);
    const GridSpec g = parse_grid(o.grid, false);

    pvdist::OutputTable t;
    t.columns = {"r", "cdf", "pdf"};
    for (const double r : linear_points(g))
        t.rows.push_back({r, pvdist::contact_cdf(r, m), pvdist::contact_pdf(r, m)});
    t.metadata = base_metadata("contact-cdf", o);
    t.metadata["d"] = std::to_string(o.d);
    t.metadata["lambda"] = pvdist::format_value(o.lambda);
    t.metadata["grid"] = o.grid;
    t.metadata["method"] = "closed-form";
    emit(t, o);
    return 0;
}

int cmd_typical_cdf(const Options& opts) {
    Options o = opts;
    pvdist::ModelParams m;
    m.d = o.d;
    m.lambda = o.lambda;
    pvdist::validate(m);
    const GridSpec g = parse_grid(o.grid, false);

    if (o.method == "exact" && o.d == 1) {
        std::cerr << "note: the d=1 law has a closed form; using method d1-closed instead of "
                     "the sampling-based exact method\n";
        o.method = "d1-closed";
    }

    pvdist::OutputTable t;
    t.metadata = base_metadata("typical-cdf", o);
    t.metadata["d"] = std::to_string(o.d);
    t.metadata["lambda"] = pvdist::format_value(o.lambda);
    t.metadata["grid"] = o.grid;
    t.metadata["method"] = o.method;

    if (o.method == "d1-closed") {
        if (o.d != 1)
            throw std::invalid_argument("method d1-closed requires --d 1");
        t.columns = {"r", "cdf", "pdf"};
        for (const double r : linear_points(g))
            t.rows.push_back(
                {r, pvdist::typical1d_cdf(r, o.lambda), pvdist::typical1d_pdf(r, o.lambda)});
    } else if (o.method == "approx") {
        const pvdist::MomentReport rep = pvdist::second_moment_report(m, 1e-5);
        t.columns = {"r", "cdf"};
        for (const double r : linear_points(g))
            t.rows.push_back({r, pvdist::approx_typical_cdf(r, m, rep.rho)});
        t.metadata["rho"] = pvdist::format_value(rep.rho);
        t.metadata["quadrature_tol"] = "1e-05";
    } else if (o.method == "simulate") {
        const pvdist::EmpiricalCdf ecdf(pvdist::sample_typical_distance(m, o.samples, o.seed));
        t.columns = {"r", "cdf"};
        for (const double r : linear_points(g))
            t.rows.push_back({r, ecdf.at(r)});
        t.metadata["samples"] = std::to_string(o.samples);
    } else if (o.method == "exact") {
        std::string ell_source = "flag";
        double ell = o.ell;
        if (!(ell > 0.0)) {
            ell = pvdist::default_conditioning_radius(m, o.seed);
            ell_source = "calibrated";
        }
        pvdist::McBudget b;
        b.outer_configs = o.samples;
        b.inner_points = o.inner_samples;
        b.k_max = o.kmax;
        b.seed = o.seed;
        b.tail_tol = o.tail_tol;
        pvdist::TypicalExactEvaluator ev(m, ell, b);
        ev.check_ell(200);
        if (ev.escape_fraction() > 0.05)
            std::cerr << "warning: an estimated " << ev.escape_fraction() * 100.0
                      << "% of cells extend beyond the conditioning radius ell=" << ell
                      << "; the curve is biased upward (increase --ell)\n";
        double hi = g.hi;
        if (hi > ell) {
            std::cerr << "note: the exact method covers [0, ell]; clamping the grid from "
                      << hi << " to ell=" << ell << "\n";
            hi = ell;
        }
        GridSpec gc = g;
        gc.hi = hi;
        t.columns = {"r", "cdf", "std_error"};
        for (const double r : linear_points(gc))
            t.rows.push_back({r, ev.cdf(r), ev.std_error(r)});
        t.metadata["samples"] = std::to_string(o.samples);
        t.metadata["inner_samples"] = std::to_string(o.inner_samples);
        t.metadata["ell"] = pvdist::format_value(ell);
        t.metadata["ell_source"] = ell_source;
        t.metadata["k_max"] = std::to_string(ev.k_max());
        t.metadata["tail_tol"] = pvdist::format_value(o.tail_tol);
        t.metadata["tail_mass"] = pvdist::format_value(ev.tail_mass());
        t.metadata["escape_fraction"] = pvdist::format_value(ev.escape_fraction());
        t.metadata["grid"] = o.grid + (hi < g.hi ? " (clamped to ell)" : "");
    } else {
        throw std::invalid_argument("unknown method: " + o.method);
    }
    emit(t, o);
    return 0;
}

int cmd_table1(const Options& o) {
    const auto [d_lo, d_hi] = parse_dim_range(o.dims, "--dims");
    const auto [e_lo, e_hi] = parse_dim_range(o.exact_dims, "--exact-dims");
    const double quad_tol = 1e-5;

    // Correction factors first; they also estimate the sample count the
    // simulated exact columns need for a +-0.01 mean at two standard errors.
    std::map<int, pvdist::MomentReport> reports;
    for (int d = d_lo; d <= d_hi; ++d) {
        pvdist::ModelParams m;
        m.d = d;
        m.lambda = o.lambda;
        reports.emplace(d, pvdist::second_moment_report(m, quad_tol));
    }
    long required = 0;
    for (int d = std::max(2, e_lo); d <= e_hi; ++d) {
        if (d < d_lo || d > d_hi)
            continue;
        pvdist::ModelParams m;
        m.d = d;
        m.lambda = o.lambda;
        const double rho = reports.at(d).rho;
        const double e1 = pvdist::approx_typical_moment(1, m, rho);
        const double e2 = pvdist::approx_typical_moment(2, m, rho);
        const double sigma = std::sqrt(std::max(e2 - e1 * e1, 0.0));
        required = std::max(required, std::lround(std::ceil(std::pow(2.0 * sigma / 0.01, 2))));
    }
    if (required > 0 && o.samples < required)
        throw std::invalid_argument(
            "--samples " + std::to_string(o.samples) +
            " is too small for the simulated exact columns: need >= " +
            std::to_string(required) +
            " for a two-standard-error mean precision of 0.01 (from the approximate variance); "
            "raise --samples or narrow --exact-dims");

    pvdist::OutputTable t;
    t.columns = {"d", "rho", "mean_exact", "mean_approx", "var_exact", "var_approx"};
    for (int d = d_lo; d <= d_hi; ++d) {
        pvdist::ModelParams m;
        m.d = d;
        m.lambda = o.lambda;
        const double rho = reports.at(d).rho;
        const double e1 = pvdist::approx_typical_moment(1, m, rho);
        const double e2 = pvdist::approx_typical_moment(2, m, rho);
        double mean_exact = std::nan("");
        double var_exact = std::nan("");
        if (d == 1 && d >= e_lo && d <= e_hi) {
            mean_exact = pvdist::typical1d_mean(o.lambda);
            // Second moment of the closed-form law, by quadrature of the
            // survival function.
            const double upper = 22.0 / o.lambda;
            const pvdist::quad::QuadResult q = pvdist::quad::integrate_1d(
                [&](double r) {
                    return 2.0 * r * (1.0 - pvdist::typical1d_cdf(r, o.lambda));
                },
                0.0, upper, 1e-10);
            const double ev2 = pvdist::quad::require(q, "second moment of the d=1 law");
            var_exact = ev2 - mean_exact * mean_exact;
        } else if (d >= 2 && d >= e_lo && d <= e_hi) {
            const std::vector<double> draws =
                pvdist::sample_typical_distance(m, o.samples, o.seed + static_cast<std::uint64_t>(d));
            mean_exact = sample_mean(draws);
            var_exact = sample_var(draws);
        }
        t.rows.push_back({static_cast<double>(d), rho, mean_exact, e1, var_exact,
                          e2 - e1 * e1});
    }
    t.metadata = base_metadata("table1", o);
    t.metadata["lambda"] = pvdist::format_value(o.lambda);
    t.metadata["dims"] = o.dims;
    t.metadata["exact_dims"] = o.exact_dims;
    t.metadata["samples"] = std::to_string(o.samples);
    t.metadata["quadrature_tol"] = pvdist::format_value(quad_tol);
    t.metadata["exact_columns"] = "d=1 closed form; d>=2 simulation; outside --exact-dims: nan";
    emit(t, o);
    return 0;
}

int cmd_validate(const Options& o) {
    pvdist::acceptance::Context ctx;
    ctx.tol.ks = o.ks_tol;
    if (!o.criterion.empty()) {
        const pvdist::acceptance::CriterionResult r =
            pvdist::acceptance::run_criterion(o.criterion, ctx);
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.slug << "\n" << r.details;
        return r.pass ? 0 : 3;
    }
    const std::vector<pvdist::acceptance::CriterionResult> results =
        pvdist::acceptance::run_all(ctx, &std::cout);
    int passed = 0;
    for (const auto& r : results)
        passed += r.pass ? 1 : 0;
    std::cout << "validation: " << passed << "/" << results.size() << " criteria passed\n";
    return passed == static_cast<int>(results.size()) ? 0 : 3;
}

int cmd_limit_shape(const Options& o) {
    if (o.d < 2)
        throw std::invalid_argument("limit-shape requires --d >= 2");
    if (!(o.eps > 0.0))
        throw std::invalid_argument("limit-shape requires --eps > 0");
    if (o.lambda < 0.0)
        throw std::invalid_argument("limit-shape requires --lambda >= 0");
    Options defaults;
    const std::string grid = o.grid == defaults.grid ? std::string("1:1000:13") : o.grid;
    const GridSpec g = parse_grid(grid, true);
    const std::vector<double> rs = log_points(g);

    pvdist::OutputTable t;
    t.columns = {"R", "q", "p0", "p", "h"};
    for (const double R : rs) {
        pvdist::InballCondition cond;
        cond.R = R;
        cond.eps = o.eps;
        cond.d = o.d;
        cond.lambda = o.lambda;
        t.rows.push_back({R, pvdist::q_probability(cond), pvdist::cap0_hit_probability(cond),
                          pvdist::cap_hit_probability(cond),
                          pvdist::cap_coverage_integral(cond)});
    }
    const pvdist::SlopeReport slope = pvdist::h_growth_diagnostic(o.d, o.eps, rs);
    t.metadata = base_metadata("limit-shape", o);
    t.metadata["d"] = std::to_string(o.d);
    t.metadata["lambda"] = pvdist::format_value(o.lambda);
    t.metadata["eps"] = pvdist::format_value(o.eps);
    t.metadata["grid"] = grid;
    t.metadata["spacing"] = "log";
    t.metadata["h_log_log_slope"] = pvdist::format_value(slope.slope);
    emit(t, o);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{
        "Nucleus-to-uniform-point distances in Poisson-Voronoi cells: closed forms, "
        "quadrature, exact conditioning, and simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    const auto add_common = [&o](CLI::App* cmd, bool with_grid = true) {
        cmd->add_option("--d", o.d, "dimension (1..10)")
            ->check(CLI::Range(1, 10))
            ->capture_default_str();
        cmd->add_option("--lambda", o.lambda, "process intensity")->capture_default_str();
        cmd->add_option("--seed", o.seed, "root seed for all sampling")->capture_default_str();
        if (with_grid)
            cmd->add_option("--grid", o.grid, "evaluation grid min:max:steps")
                ->capture_default_str();
        cmd->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        cmd->add_option("--out", o.out, "output file (default: standard output)");
    };

    CLI::App* contact = app.add_subcommand(
        "contact-cdf", "distance law in the cell containing the origin (closed form)");
    add_common(contact);

    CLI::App* typical = app.add_subcommand(
        "typical-cdf", "distance law in the typical cell (several methods)");
    add_common(typical);
    typical->add_option("--method", o.method, "exact|approx|simulate|d1-closed")
        ->check(CLI::IsMember({"exact", "approx", "simulate", "d1-closed"}))
        ->capture_default_str();
    typical->add_option("--samples", o.samples,
                        "simulation draws / exact-method outer configurations")
        ->capture_default_str();
    typical->add_option("--inner-samples", o.inner_samples,
                        "exact-method volume probes per configuration")
        ->capture_default_str();
    typical->add_option("--ell", o.ell, "conditioning radius (0 = calibrate)")
        ->capture_default_str();
    typical->add_option("--kmax", o.kmax, "point-count truncation (0 = from --tail-tol)")
        ->capture_default_str();
    typical->add_option("--tail-tol", o.tail_tol, "point-count tail mass bound")
        ->capture_default_str();

    CLI::App* table = app.add_subcommand(
        "table1", "accuracy table: correction factor, exact and approximate moments");
    table->add_option("--lambda", o.lambda, "process intensity")->capture_default_str();
    table->add_option("--seed", o.seed, "root seed for all sampling")->capture_default_str();
    table->add_option("--dims", o.dims, "dimension range lo:hi")->capture_default_str();
    table->add_option("--exact-dims", o.exact_dims,
                      "dimension range for the exact (simulated) columns")
        ->capture_default_str();
    table->add_option("--samples", o.samples, "simulation draws per dimension")
        ->capture_default_str();
    table->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    table->add_option("--out", o.out, "output file (default: standard output)");

    CLI::App* validate = app.add_subcommand("validate", "run the validation suite");
    validate->add_option("--criterion", o.criterion,
                         "run a single criterion by slug (default: all)");
    validate->add_option("--ks-tol", o.ks_tol,
                         "override the Kolmogorov-Smirnov gate (negative-control testing)")
        ->capture_default_str();

    CLI::App* limit = app.add_subcommand(
        "limit-shape", "large-inball coverage probability and growth diagnostics");
    add_common(limit);
    limit->add_option("--eps", o.eps, "annulus width around the inball")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (contact->parsed())
            return cmd_contact_cdf(o);
        if (typical->parsed())
            return cmd_typical_cdf(o);
        if (table->parsed())
            return cmd_table1(o);
        if (validate->parsed())
            return cmd_validate(o);
        if (limit->parsed())
            return cmd_limit_shape(o);
        std::cerr << "no subcommand given\n";
        return 1;
    } catch (const pvdist::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
