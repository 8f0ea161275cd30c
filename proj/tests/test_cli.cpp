// End-to-end tests of the command-line binary: flag parsing and exit codes,
// CSV/JSON output layout, value spot checks against the library, and
// determinism of seeded runs. The binary path is injected at compile time.

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifdef __unix__
#include <sys/wait.h>
#endif

#include "json.hpp"

#include "pvdist/limitshape.hpp"
#include "pvdist/model.hpp"
#include "pvdist/specfun.hpp"
#include "pvdist/typical1d.hpp"
#include "pvdist/zerocell.hpp"

namespace {

// Runs the CLI with the given argument string, capturing stdout/stderr into
// files next to the working directory. Returns the process exit code.
int run_cli(const std::string& args, const std::string& tag) {
    const std::string cmd = std::string(PVDIST_CLI_PATH) + " " + args + " >" + tag +
                            ".out 2>" + tag + ".err";
    const int status = std::system(cmd.c_str());
#ifdef __unix__
    if (WIFEXITED(status))
        return WEXITSTATUS(status);
    return -1;
#else
    return status;
#endif
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CsvTable {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

CsvTable parse_csv(const std::string& path) {
    CsvTable t;
    std::ifstream f(path);
    REQUIRE_MESSAGE(static_cast<bool>(f), "missing output file " << path);
    std::string line;
    bool header_seen = false;
    while (std::getline(f, line)) {
        if (line.empty())
            continue;
        if (line.rfind("# ", 0) == 0) {
            const std::string body = line.substr(2);
            const std::size_t eq = body.find('=');
            if (eq != std::string::npos)
                t.meta[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream is(line);
        std::string cell;
        while (std::getline(is, cell, ','))
            cells.push_back(cell);
        if (!header_seen) {
            t.columns = cells;
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& c : cells)
            row.push_back(std::strtod(c.c_str(), nullptr));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace

TEST_SUITE("cli_usage") {

TEST_CASE("no subcommand and unknown flags are usage errors") {
    CHECK(run_cli("", "u_none") == 1);
    CHECK(run_cli("contact-cdf --bogus 3", "u_flag") == 1);
    CHECK(run_cli("frobnicate", "u_cmd") == 1);
}

TEST_CASE("help and version succeed") {
    CHECK(run_cli("--help", "u_help") == 0);
    CHECK(run_cli("--version", "u_ver") == 0);
    CHECK(run_cli("typical-cdf --help", "u_help2") == 0);
}

TEST_CASE("malformed grids are rejected with exit 1") {
    CHECK(run_cli("contact-cdf --grid 0:2", "u_g1") == 1);
    CHECK(run_cli("contact-cdf --grid 2:0:10", "u_g2") == 1);
    CHECK(run_cli("contact-cdf --grid 0:2:1", "u_g3") == 1);
    CHECK(run_cli("contact-cdf --grid -1:2:10", "u_g4") == 1);
    CHECK(run_cli("contact-cdf --grid 0:2:10:4", "u_g5") == 1);
    // Log-spaced commands additionally need a strictly positive lower end.
    CHECK(run_cli("limit-shape --d 2 --grid 0:100:5", "u_g6") == 1);
}

TEST_CASE("model parameters are validated") {
    CHECK(run_cli("contact-cdf --d 0", "u_d0") == 1);
    CHECK(run_cli("contact-cdf --d 11", "u_d11") == 1);
    CHECK(run_cli("contact-cdf --lambda 0", "u_lam0") == 1);
    CHECK(run_cli("contact-cdf --lambda -2", "u_lamneg") == 1);
}

TEST_CASE("method restrictions are enforced") {
    CHECK(run_cli("typical-cdf --method d1-closed --d 2", "u_m1") == 1);
    CHECK(run_cli("typical-cdf --method telepathy", "u_m2") == 1);
    CHECK(run_cli("typical-cdf --format xml", "u_m3") == 1);
}

TEST_CASE("limit-shape parameter guards") {
    CHECK(run_cli("limit-shape --d 1", "u_l1") == 1);
    CHECK(run_cli("limit-shape --d 2 --eps 0", "u_l2") == 1);
    CHECK(run_cli("limit-shape --d 2 --lambda -1", "u_l3") == 1);
}

TEST_CASE("unknown validation criterion is a usage error") {
    CHECK(run_cli("validate --criterion no-such-check", "u_v1") == 1);
}

TEST_CASE("unwritable output path is reported") {
    CHECK(run_cli("contact-cdf --out /nonexistent-dir/x.csv", "u_o1") == 1);
    const std::string err = slurp("u_o1.err");
    CHECK(err.find("cannot open output file") != std::string::npos);
}

TEST_CASE("dimension ranges for the accuracy table are validated") {
    CHECK(run_cli("table1 --dims 0:3", "u_t1") == 1);
    CHECK(run_cli("table1 --dims 3:2", "u_t2") == 1);
    CHECK(run_cli("table1 --dims 1:11", "u_t3") == 1);
    CHECK(run_cli("table1 --exact-dims nonsense", "u_t4") == 1);
}

}  // TEST_SUITE cli_usage

TEST_SUITE("cli_curves") {

TEST_CASE("contact-cdf CSV: layout, grid, and values") {
    REQUIRE(run_cli("contact-cdf --d 2 --lambda 1 --grid 0:2:201 --out c_contact.csv",
                    "c_contact") == 0);
    const CsvTable t = parse_csv("c_contact.csv");
    CHECK(t.meta.at("command") == "contact-cdf");
    CHECK(t.meta.at("d") == "2");
    CHECK(t.meta.at("lambda") == "1");
    CHECK(t.meta.at("seed") == "1");
    CHECK(t.meta.at("method") == "closed-form");
    REQUIRE(t.columns == std::vector<std::string>{"r", "cdf", "pdf"});
    REQUIRE(t.rows.size() == 201);
    CHECK(t.rows.front()[0] == 0.0);
    CHECK(t.rows.front()[1] == 0.0);
    CHECK(t.rows.back()[0] == doctest::Approx(2.0).epsilon(1e-12));

    // Row 50 sits at r = 0.5; compare with the closed form through the library.
    pvdist::ModelParams m;
    m.d = 2;
    m.lambda = 1.0;
    const std::vector<double>& row = t.rows[50];
    CHECK(row[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row[1] == doctest::Approx(1.0 - std::exp(-3.14159265358979323846 * 0.25))
                        .epsilon(1e-9));
    CHECK(row[1] == doctest::Approx(pvdist::contact_cdf(0.5, m)).epsilon(1e-10));
    CHECK(row[2] == doctest::Approx(pvdist::contact_pdf(0.5, m)).epsilon(1e-10));

    // Monotone nondecreasing cdf column.
    for (std::size_t i = 1; i < t.rows.size(); ++i)
        CHECK(t.rows[i][1] >= t.rows[i - 1][1]);
}

TEST_CASE("contact-cdf JSON mirrors the CSV") {
    REQUIRE(run_cli("contact-cdf --d 2 --lambda 1 --grid 0:2:201 --format json "
                    "--out c_contact.json",
                    "c_json") == 0);
    std::ifstream f("c_contact.json");
    REQUIRE(static_cast<bool>(f));
    const nlohmann::json j = nlohmann::json::parse(f);
    CHECK(j.at("metadata").at("command") == "contact-cdf");
    CHECK(j.at("metadata").at("format") == "json");
    REQUIRE(j.at("columns") == nlohmann::json({"r", "cdf", "pdf"}));
    REQUIRE(j.at("rows").size() == 201);

    const CsvTable t = parse_csv("c_contact.csv");
    for (std::size_t i = 0; i < 201; i += 10) {
        const double csv_cdf = t.rows[i][1];
        const double json_cdf = j.at("rows").at(i).at(1).get<double>();
        // CSV keeps 12 significant digits; JSON keeps full doubles.
        CHECK(std::fabs(csv_cdf - json_cdf) <= 1e-11 * (1.0 + std::fabs(json_cdf)));
    }
}

TEST_CASE("typical-cdf closed form on the line") {
    REQUIRE(run_cli("typical-cdf --method d1-closed --d 1 --lambda 1 --grid 0:2:5 "
                    "--out c_t1.csv",
                    "c_t1") == 0);
    const CsvTable t = parse_csv("c_t1.csv");
    CHECK(t.meta.at("method") == "d1-closed");
    REQUIRE(t.columns == std::vector<std::string>{"r", "cdf", "pdf"});
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows[0][1] == 0.0);
    // At half the mean gap the law has a known special value.
    CHECK(t.rows[1][0] == doctest::Approx(0.5).epsilon(1e-12));
    const double expected = 1.0 - pvdist::exp_integral_e1(1.0);
    CHECK(t.rows[1][1] == doctest::Approx(expected).epsilon(1e-9));
    CHECK(t.rows[1][1] == doctest::Approx(0.78062).epsilon(3e-5));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        CHECK(t.rows[i][1] ==
              doctest::Approx(pvdist::typical1d_cdf(t.rows[i][0], 1.0)).epsilon(1e-10));
}

TEST_CASE("typical-cdf simulate is deterministic in the seed") {
    const std::string args =
        "typical-cdf --method simulate --d 2 --samples 3000 --seed 777 --grid 0:2:41";
    REQUIRE(run_cli(args + " --out c_s1.csv", "c_s1") == 0);
    REQUIRE(run_cli(args + " --out c_s2.csv", "c_s2") == 0);
    const std::string a = slurp("c_s1.csv");
    const std::string b = slurp("c_s2.csv");
    REQUIRE(!a.empty());
    CHECK(a == b);

    REQUIRE(run_cli("typical-cdf --method simulate --d 2 --samples 3000 --seed 778 "
                    "--grid 0:2:41 --out c_s3.csv",
                    "c_s3") == 0);
    CHECK(slurp("c_s3.csv") != a);
}

TEST_CASE("simulated curve tracks the closed form on the line") {
    REQUIRE(run_cli("typical-cdf --method simulate --d 1 --samples 20000 --seed 4242 "
                    "--grid 0:2.5:26 --out c_sim1.csv",
                    "c_sim1") == 0);
    const CsvTable t = parse_csv("c_sim1.csv");
    REQUIRE(t.columns == std::vector<std::string>{"r", "cdf"});
    for (const auto& row : t.rows) {
        const double truth = pvdist::typical1d_cdf(row[0], 1.0);
        CHECK(std::fabs(row[1] - truth) <= 0.02);  // ~5.5 sigma at n = 20000
    }
}

TEST_CASE("limit-shape with no point process reduces to the single-cap chance") {
    REQUIRE(run_cli("limit-shape --d 2 --eps 0.1 --lambda 0 --grid 1:100:7 "
                    "--out c_ls0.csv",
                    "c_ls0") == 0);
    const CsvTable t = parse_csv("c_ls0.csv");
    REQUIRE(t.columns == std::vector<std::string>{"R", "q", "p0", "p", "h"});
    REQUIRE(t.rows.size() == 7);
    CHECK(t.rows.front()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.rows.back()[0] == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(t.meta.at("spacing") == "log");
    CHECK(t.meta.count("h_log_log_slope") == 1);
    for (const auto& row : t.rows) {
        CHECK(row[1] == doctest::Approx(row[2]).epsilon(1e-11));  // q == p0
        CHECK(row[3] <= row[2] + 1e-15);                          // p <= p0
        CHECK(row[4] > 0.0);                                      // h > 0
    }
}

TEST_CASE("limit-shape default grid is log-spaced over three decades") {
    REQUIRE(run_cli("limit-shape --d 2 --eps 0.1 --out c_ls1.csv", "c_ls1") == 0);
    const CsvTable t = parse_csv("c_ls1.csv");
    CHECK(t.meta.at("grid") == "1:1000:13");
    REQUIRE(t.rows.size() == 13);
    CHECK(t.rows.front()[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.rows.back()[0] == doctest::Approx(1000.0).epsilon(1e-9));
    // Successive ratios constant on a log grid.
    const double ratio = t.rows[1][0] / t.rows[0][0];
    for (std::size_t i = 1; i < t.rows.size(); ++i)
        CHECK(t.rows[i][0] / t.rows[i - 1][0] == doctest::Approx(ratio).epsilon(1e-9));
    // Against the library directly.
    pvdist::InballCondition cond;
    cond.d = 2;
    cond.eps = 0.1;
    cond.lambda = 1.0;
    cond.R = t.rows[4][0];
    CHECK(t.rows[4][1] == doctest::Approx(pvdist::q_probability(cond)).epsilon(1e-9));
}

TEST_CASE("writing to standard output works") {
    REQUIRE(run_cli("contact-cdf --d 3 --grid 0:1:3", "c_stdout") == 0);
    const CsvTable t = parse_csv("c_stdout.out");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.meta.at("command") == "contact-cdf");
    CHECK(t.meta.at("d") == "3");
}

}  // TEST_SUITE cli_curves

TEST_SUITE("cli_heavy") {

TEST_CASE("typical-cdf approx in the plane: correction factor and curve mean") {
    REQUIRE(run_cli("typical-cdf --method approx --d 2 --lambda 1 --grid 0:6:601 "
                    "--out h_approx.csv",
                    "h_approx") == 0);
    const CsvTable t = parse_csv("h_approx.csv");
    REQUIRE(t.columns == std::vector<std::string>{"r", "cdf"});
    REQUIRE(t.rows.size() == 601);
    const double rho = std::strtod(t.meta.at("rho").c_str(), nullptr);
    CHECK(rho == doctest::Approx(1.285).epsilon(0.004));

    // Mean of the plotted law by the trapezoid rule on the survival function.
    double mean = 0.0;
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        const double dr = t.rows[i][0] - t.rows[i - 1][0];
        mean += 0.5 * dr * ((1.0 - t.rows[i][1]) + (1.0 - t.rows[i - 1][1]));
    }
    CHECK(mean == doctest::Approx(0.442).epsilon(0.008));
    CHECK(t.rows.back()[1] > 1.0 - 1e-9);  // fully converged by r = 6
}

TEST_CASE("table1 refuses sample budgets too small for the stated precision") {
    CHECK(run_cli("table1 --dims 2:2 --exact-dims 2:2 --samples 100", "h_refuse") == 1);
    const std::string err = slurp("h_refuse.err");
    CHECK(err.find("need >=") != std::string::npos);
}

TEST_CASE("table1 on the line uses closed forms") {
    REQUIRE(run_cli("table1 --dims 1:1 --exact-dims 1:1 --samples 10 --out h_t1.csv",
                    "h_t1") == 0);
    const CsvTable t = parse_csv("h_t1.csv");
    REQUIRE(t.columns == std::vector<std::string>{"d", "rho", "mean_exact", "mean_approx",
                                                  "var_exact", "var_approx"});
    REQUIRE(t.rows.size() == 1);
    const std::vector<double>& row = t.rows[0];
    CHECK(row[0] == 1.0);
    CHECK(row[1] == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(row[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(row[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(row[4] == doctest::Approx(5.0 / 36.0).epsilon(1e-6));
    CHECK(row[5] == doctest::Approx(1.0 / 9.0).epsilon(1e-9));
}

TEST_CASE("table1 marks dimensions outside the simulated range as nan") {
    REQUIRE(run_cli("table1 --dims 4:5 --exact-dims 1:3 --samples 10 "
                    "--format json --out h_t2.json",
                    "h_t2") == 0);
    std::ifstream f("h_t2.json");
    REQUIRE(static_cast<bool>(f));
    const nlohmann::json j = nlohmann::json::parse(f);
    REQUIRE(j.at("rows").size() == 2);
    for (const auto& row : j.at("rows")) {
        CHECK(row.at(2).is_null());  // mean_exact
        CHECK(row.at(4).is_null());  // var_exact
        CHECK(row.at(1).get<double>() > 1.0);   // rho
        CHECK(row.at(3).get<double>() > 0.0);   // mean_approx
    }
}

TEST_CASE("typical-cdf exact: small-budget run is well formed") {
    REQUIRE(run_cli("typical-cdf --method exact --d 2 --lambda 1 --samples 192 "
                    "--inner-samples 192 --ell 1.6 --seed 5 --grid 0:1.6:9 "
                    "--out h_exact.csv",
                    "h_exact") == 0);
    const CsvTable t = parse_csv("h_exact.csv");
    REQUIRE(t.columns == std::vector<std::string>{"r", "cdf", "std_error"});
    REQUIRE(t.rows.size() == 9);
    CHECK(t.meta.at("ell") == "1.6");
    CHECK(t.meta.at("ell_source") == "flag");
    CHECK(std::strtol(t.meta.at("k_max").c_str(), nullptr, 10) >= 1);
    CHECK(t.rows.front()[1] == 0.0);
    for (std::size_t i = 1; i < t.rows.size(); ++i)
        CHECK(t.rows[i][1] >= t.rows[i - 1][1] - 1e-12);
    CHECK(t.rows.back()[1] > 0.9);
    for (const auto& row : t.rows)
        CHECK(row[2] >= 0.0);
}

TEST_CASE("exact method grid is clamped to the conditioning radius") {
    REQUIRE(run_cli("typical-cdf --method exact --d 2 --samples 96 --inner-samples 96 "
                    "--ell 1.6 --seed 6 --grid 0:3:7 --out h_clamp.csv",
                    "h_clamp") == 0);
    const CsvTable t = parse_csv("h_clamp.csv");
    CHECK(t.rows.back()[0] == doctest::Approx(1.6).epsilon(1e-12));
    const std::string note = slurp("h_clamp.err");
    CHECK(note.find("clamping") != std::string::npos);
}

TEST_CASE("validate runs a single passing criterion") {
    CHECK(run_cli("validate --criterion zerocell-mean-anchor", "h_v0") == 0);
    const std::string out = slurp("h_v0.out");
    CHECK(out.find("PASS") != std::string::npos);
}

TEST_CASE("validate negative control: an impossible gate must fail") {
    // With the distribution-equivalence tolerance forced to an unattainably
    // small value, the criterion must report failure and exit 3 -- this guards
    // against a suite that cannot fail.
    CHECK(run_cli("validate --criterion distribution-equivalence --ks-tol 1e-9",
                  "h_v1") == 3);
    const std::string out = slurp("h_v1.out");
    CHECK(out.find("FAIL") != std::string::npos);
}

}  // TEST_SUITE cli_heavy
