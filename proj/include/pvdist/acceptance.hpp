#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "pvdist/moments.hpp"
#include "pvdist/typicalexact.hpp"

namespace pvdist::acceptance {

/// Outcome of one validation criterion: a stable slug, an overall verdict,
/// and one line per sub-check with the measured statistic, its target, and
/// the tolerance actually enforced.
struct CriterionResult {
    std::string slug;
    bool pass = false;
    std::string details;
};

/// Tolerance overrides for negative-control runs (tighten a tolerance and
/// watch the suite fail cleanly). Default-constructed = the published gate.
struct Tolerances {
    double ks = 0.01;  // Kolmogorov-Smirnov gap for simulated-vs-closed-form
};

/// Expensive intermediates shared across criteria within one process:
/// volume-moment reports per dimension, the d=2 exact-method evaluator, and
/// the n=1e5 simulation draws. Everything is seeded by fixed constants, so
/// two runs of the same binary produce identical results.
class Context {
  public:
    Tolerances tol;

    /// Volume-moment report for dimension d at unit intensity (cached).
    const MomentReport& report(int d);

    /// The d=2 exact-method evaluator at conditioning radius 1.6 (cached).
    TypicalExactEvaluator& evaluator_d2();

    /// n=1e5 nucleus-to-uniform-point distances in the typical cell (cached).
    const std::vector<double>& typical_samples(int d);

    /// n=1e5 distances in the cell containing the origin (cached).
    const std::vector<double>& zerocell_samples(int d);

  private:
    std::map<int, MomentReport> reports_;
    std::shared_ptr<TypicalExactEvaluator> eval2_;
    std::map<int, std::vector<double>> typical_;
    std::map<int, std::vector<double>> zerocell_;
};

/// The eleven criterion slugs, in report order.
const std::vector<std::string>& criterion_slugs();

/// Runs one criterion by slug (throws std::invalid_argument for an unknown
/// slug). Heavy inputs come from the context and are reused across calls.
CriterionResult run_criterion(const std::string& slug, Context& ctx);

/// Runs every criterion in order, streaming one PASS/FAIL line per criterion
/// (plus its detail lines) to `progress` when given.
std::vector<CriterionResult> run_all(Context& ctx, std::ostream* progress = nullptr);

}  // namespace pvdist::acceptance
