// CLI tests.
//
// The front end is driven through cli_main with injected streams, so every
// case checks the full contract: exit status, stdout payload, stderr
// diagnostics, and file emission.  Exact outputs (threshold values, bounds
// rows, selector kappas, balance targets) are frozen as literals; seeded
// numerical outputs are checked for determinism and for landing in the
// analytic windows the library guarantees.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fdecay/cli.hpp"
#include "fdecay/geometry.hpp"
#include "fdecay/rational.hpp"

using namespace fdecay;
using Json = nlohmann::ordered_json;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = cli_main(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

size_t count_lines(const std::string& text) {
    size_t n = 0;
    for (size_t pos = 0; (pos = text.find("\r\n", pos)) != std::string::npos; pos += 2) ++n;
    return n;
}

}  // namespace

// ============================================================================
// Grid parsers
// ============================================================================

TEST_CASE("R grids accept powers and geometric ranges") {
    const std::vector<double> g = parse_r_grid("2^20:2^30:2^2");
    REQUIRE(g.size() == 6);
    CHECK(g.front() == 1048576.0);
    CHECK(g.back() == 1073741824.0);
    for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(4.0 * g[i - 1]));

    const std::vector<double> list = parse_r_grid("1e4,32768");
    REQUIRE(list.size() == 2);
    CHECK(list[0] == 10000.0);
    CHECK(list[1] == 32768.0);

    CHECK_THROWS_AS(parse_r_grid("abc"), std::domain_error);
    CHECK_THROWS_AS(parse_r_grid("2:8"), std::domain_error);
    CHECK_THROWS_AS(parse_r_grid("8:2:2"), std::domain_error);
    CHECK_THROWS_AS(parse_r_grid("2:8:1"), std::domain_error);
    CHECK_THROWS_AS(parse_r_grid("-4"), std::domain_error);
    CHECK_THROWS_AS(parse_r_grid("2^3^4"), std::domain_error);
}

TEST_CASE("alpha grids step exactly and include both endpoints") {
    const std::vector<Rational> g = parse_alpha_grid("3/2:3:1/8");
    REQUIRE(g.size() == 13);
    CHECK(g.front() == rat(3, 2));
    CHECK(g[4] == rat(2));
    CHECK(g.back() == rat(3));

    const std::vector<Rational> one = parse_alpha_grid("7/4");
    REQUIRE(one.size() == 1);
    CHECK(one[0] == rat(7, 4));

    CHECK_THROWS_AS(parse_alpha_grid("1:2"), std::domain_error);
    CHECK_THROWS_AS(parse_alpha_grid("2:1:1/8"), std::domain_error);
    CHECK_THROWS_AS(parse_alpha_grid("1:2:0"), std::domain_error);
    CHECK_THROWS_AS(parse_alpha_grid("x"), std::domain_error);
}

TEST_CASE("N lists expand ranges and reject non-positive entries") {
    CHECK(parse_n_list("1:3") == std::vector<int64_t>{1, 2, 3});
    CHECK(parse_n_list("1,4,9") == std::vector<int64_t>{1, 4, 9});
    CHECK(parse_n_list("2:10:2") == std::vector<int64_t>{2, 4, 6, 8, 10});
    CHECK(parse_n_list("5") == std::vector<int64_t>{5});

    CHECK_THROWS_AS(parse_n_list("0"), std::domain_error);
    CHECK_THROWS_AS(parse_n_list("3:1"), std::domain_error);
    CHECK_THROWS_AS(parse_n_list("x"), std::domain_error);
    CHECK_THROWS_AS(parse_n_list("1.5"), std::domain_error);
}

// ============================================================================
// threshold and argument errors
// ============================================================================

TEST_CASE("threshold prints the exact value and maps errors to exit codes") {
    const CliResult ok = run_cli({"threshold", "--d", "3"});
    CHECK(ok.code == 0);
    CHECK(ok.out == "7/4\n");
    CHECK(ok.err.empty());

    CHECK(run_cli({"threshold", "--d", "12"}).out == "85/14\n");

    const CliResult dom = run_cli({"threshold", "--d", "2"});
    CHECK(dom.code == 2);
    CHECK(dom.err.substr(0, 13) == "config error:");

    CHECK(run_cli({"threshold"}).code == 2);
    CHECK(run_cli({"nonsense"}).code == 2);
    CHECK(run_cli({}).code == 2);

    const CliResult help = run_cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("threshold") != std::string::npos);
    CHECK(help.out.find("scaling") != std::string::npos);

    const CliResult sub_help = run_cli({"threshold", "--help"});
    CHECK(sub_help.code == 0);
    CHECK(sub_help.out.find("--d") != std::string::npos);
}

// ============================================================================
// bounds
// ============================================================================

TEST_CASE("bounds emits exact CSV rows and flags out-of-domain points") {
    const CliResult r =
        run_cli({"bounds", "--surface", "parab", "--d", "3", "--alpha-grid", "3/2:3:1/8"});
    REQUIRE(r.code == 0);
    CHECK(r.out.substr(0, 57) == "alpha,lower,upper,branch,prior,gap_prior,gap_lower,note\r\n");
    CHECK(r.out.find("\r\n2,4/3,4/3,(a) kappa4(m=1),3/2,1/6,0,\r\n") != std::string::npos);
    CHECK(r.out.find("\r\n3,,,,,,,") != std::string::npos);
    CHECK(count_lines(r.out) == 14);
}

TEST_CASE("bounds JSON keeps row order and marks flagged rows") {
    const CliResult r = run_cli({"bounds", "--surface", "paraboloid", "--d", "3", "--alpha-grid",
                                 "3/2:3:1/8", "--format", "json"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["surface"] == "paraboloid");
    CHECK(j["d"] == 3);
    REQUIRE(j["rows"].size() == 13);
    CHECK(j["rows"][4]["alpha"] == "2");
    CHECK(j["rows"][4]["ok"] == true);
    CHECK(j["rows"][4]["upper"] == "4/3");
    CHECK(j["rows"][4]["gap_lower"] == "0");
    CHECK(j["rows"][12]["ok"] == false);
    CHECK(j["rows"][12].contains("note"));
    CHECK_FALSE(j["rows"][12].contains("upper"));

    CHECK(run_cli({"bounds", "--surface", "parab", "--d", "3", "--alpha-grid", "2", "--format",
                   "yaml"})
              .code == 2);
}

TEST_CASE("bounds --out writes the same bytes the stream run prints") {
    const std::string path = "tmp_cli_bounds.csv";
    const std::vector<std::string> base = {"bounds", "--surface", "sphere",
                                           "--d",    "4",         "--alpha-grid",
                                           "9/4:15/4:1/4"};
    const CliResult streamed = run_cli(base);
    REQUIRE(streamed.code == 0);

    std::vector<std::string> to_file = base;
    to_file.push_back("--out");
    to_file.push_back(path);
    const CliResult filed = run_cli(to_file);
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    CHECK(read_file(path) == streamed.out);
    std::remove(path.c_str());
}

// ============================================================================
// construct
// ============================================================================

TEST_CASE("construct reports the selector kappa and is deterministic") {
    const std::vector<std::string> args = {"construct", "--surface", "parab", "--d", "3",
                                           "--m",       "1",         "--alpha", "2", "--R",
                                           "2^16",      "--mc-samples", "20000", "--seed", "11"};
    const CliResult r = run_cli(args);
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["surface"] == "paraboloid");
    CHECK(j["kappa"] == "1/6");
    CHECK(j["R"] == 65536.0);
    CHECK(j["seed"] == 11);
    CHECK(j["patch_count"].get<int64_t>() > 0);
    CHECK(j["omega_measure"].get<double>() > 0.0);
    CHECK(j["lambda_volume"].get<double>() > 0.0);

    CHECK(run_cli(args).out == r.out);
}

TEST_CASE("construct derives the sphere scale from the lattice norm") {
    const CliResult r = run_cli({"construct", "--surface", "sphere", "--d", "4", "--m", "1",
                                 "--alpha", "3", "--N", "1", "--mc-samples", "20000"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["kappa"] == "1/6");
    CHECK(j["N"] == 1);
    CHECK(j["R"].get<double>() == doctest::Approx(std::pow(kTwoPi, 6.0)));
}

TEST_CASE("scale flags are surface-specific and misuse names the flag") {
    const CliResult no_n = run_cli({"construct", "--surface", "sphere", "--d", "4", "--m", "1",
                                    "--alpha", "3"});
    CHECK(no_n.code == 2);
    CHECK(no_n.err.find("--N") != std::string::npos);

    const CliResult wrong = run_cli({"construct", "--surface", "sphere", "--d", "4", "--m", "1",
                                     "--alpha", "3", "--R", "2^16"});
    CHECK(wrong.code == 2);
    CHECK(wrong.err.find("--N") != std::string::npos);

    const CliResult parab_n = run_cli({"construct", "--surface", "parab", "--d", "3", "--m", "1",
                                       "--alpha", "2", "--N", "3"});
    CHECK(parab_n.code == 2);
    CHECK(parab_n.err.find("--R") != std::string::npos);

    const CliResult bad_alpha = run_cli({"construct", "--surface", "parab", "--d", "3", "--m",
                                         "1", "--alpha", "two", "--R", "2^16"});
    CHECK(bad_alpha.code == 2);
    CHECK(bad_alpha.err.find("--alpha") != std::string::npos);
}

// ============================================================================
// verify-phase and extension
// ============================================================================

TEST_CASE("verify-phase reports a deviation inside the analytic window") {
    const CliResult r = run_cli({"verify-phase", "--surface", "parab", "--d", "3", "--m", "1",
                                 "--alpha", "2", "--R", "2^16", "--samples", "2000", "--seed",
                                 "5"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["samples"] == 2000);
    CHECK(j["max_deviation"].get<double>() >= 0.0);
    CHECK(j["max_deviation"].get<double>() < 0.01);
    CHECK(j["limit"] == 0.01);
}

TEST_CASE("extension moduli stay near one and the per-point CSV matches") {
    const std::string path = "tmp_cli_extension.csv";
    const CliResult r = run_cli({"extension", "--surface", "parab", "--d", "3", "--m", "1",
                                 "--alpha", "2", "--R", "2^16", "--points", "16", "--nodes",
                                 "64", "--mc-samples", "20000", "--seed", "3", "--out", path});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["points"] == 16);
    CHECK(j["nodes"] == 64);
    const double lo = j["normalized_modulus"]["min"].get<double>();
    const double mean = j["normalized_modulus"]["mean"].get<double>();
    const double hi = j["normalized_modulus"]["max"].get<double>();
    CHECK(lo > 0.8);
    CHECK(hi < 1.2);
    CHECK(mean > 0.9);
    CHECK(mean < 1.1);
    CHECK(lo <= mean);
    CHECK(mean <= hi);

    const std::string csv = read_file(path);
    CHECK(csv.substr(0, 40) == "i,normalized_modulus,quadrature_stderr\r\n");
    CHECK(count_lines(csv) == 17);
    CHECK(csv.find("\r\n0,") != std::string::npos);
    std::remove(path.c_str());

    const CliResult bad = run_cli({"extension", "--surface", "parab", "--d", "3", "--m", "1",
                                   "--alpha", "2", "--R", "2^16", "--points", "0"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("--points") != std::string::npos);
}

// ============================================================================
// calpha
// ============================================================================

TEST_CASE("calpha checks balances first and records seed and target") {
    const std::string path = "tmp_cli_profile.csv";
    const std::vector<std::string> args = {"calpha", "--surface", "parab", "--d", "3",
                                           "--m",    "1",         "--alpha", "2", "--R",
                                           "2^12",   "--centers", "4", "--ball-samples",
                                           "1000",   "--mc-samples", "50000", "--seed", "9"};
    std::vector<std::string> with_out = args;
    with_out.push_back("--out");
    with_out.push_back(path);

    const CliResult r = run_cli(with_out);
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["seed"] == 9);
    CHECK(j["balance_target"] == "-1");
    CHECK(j["c_alpha"].get<double>() > 0.0);
    CHECK(j["mass"].get<double>() > 0.0);
    REQUIRE(j["balance_rows"].size() > 0);
    for (const auto& row : j["balance_rows"]) {
        CHECK(row.contains("scale"));
        CHECK(row["t"].is_string());
        CHECK(row["exponent"].is_string());
    }

    const std::string csv = read_file(path);
    CHECK(csv.substr(0, 57) == "r,regime_label,formula_value,oracle_value,oracle_stderr\r\n");
    CHECK(count_lines(csv) >= 3);
    std::remove(path.c_str());

    CHECK(run_cli(args).out == r.out);
}

TEST_CASE("calpha exits 1 on a balance violation before any sampling") {
    std::vector<std::string> args = {"calpha", "--surface", "parab", "--d", "3", "--m", "1",
                                     "--alpha", "2", "--R", "2^12", "--kappa", "1/5"};
    const CliResult r = run_cli(args);
    CHECK(r.code == 1);
    CHECK(r.err.substr(0, 6) == "error:");
    CHECK(r.out.empty());
}

// ============================================================================
// scaling
// ============================================================================

TEST_CASE("scaling fits near the exact target and writes the table first") {
    const std::string path = "tmp_cli_scaling.csv";
    const std::vector<std::string> args = {
        "scaling", "--surface", "parab", "--d", "3", "--m", "1", "--alpha", "2",
        "--R", "2^12:2^18:2^2", "--x-samples", "200", "--nodes", "128", "--centers", "4",
        "--ball-samples", "1000", "--mc-samples", "30000", "--seed", "7", "--out", path};
    const CliResult r = run_cli(args);
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["seed"] == 7);
    CHECK(j["rows_ok"] == 4);
    CHECK(j["rows_failed"] == 0);
    REQUIRE(j["R_grid"].size() == 4);
    CHECK(j["R_grid"][0] == 4096.0);
    CHECK(j["budgets"]["x_samples"] == 200);
    CHECK(j["fit"]["target_slope"] == "-2/3");
    const double slope = j["fit"]["slope"].get<double>();
    CHECK(slope > -1.2);
    CHECK(slope < -0.2);

    const std::string csv = read_file(path);
    CHECK(csv.substr(0, 12) == "surface,d,m,");
    CHECK(count_lines(csv) == 5);

    const CliResult again = run_cli(args);
    CHECK(again.out == r.out);
    CHECK(read_file(path) == csv);
    std::remove(path.c_str());

    const CliResult no_n = run_cli({"scaling", "--surface", "sphere", "--d", "4", "--m", "1",
                                    "--alpha", "3", "--R", "2^12"});
    CHECK(no_n.code == 2);
    CHECK(no_n.err.find("--N") != std::string::npos);
}

TEST_CASE("scaling with too few rows still writes the table, then exits 1") {
    const std::string path = "tmp_cli_scaling_short.csv";
    const CliResult r = run_cli({"scaling", "--surface", "parab", "--d", "3", "--m", "1",
                                 "--alpha", "2", "--R", "2^12:2^14:2^2", "--x-samples", "200",
                                 "--nodes", "128", "--centers", "4", "--ball-samples", "1000",
                                 "--mc-samples", "30000", "--seed", "7", "--out", path});
    CHECK(r.code == 1);
    CHECK(r.err.substr(0, 6) == "error:");
    const std::string csv = read_file(path);
    CHECK(count_lines(csv) == 3);
    std::remove(path.c_str());
}
