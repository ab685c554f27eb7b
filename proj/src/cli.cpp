// Subcommand dispatch.
//
// Exact quantities (alpha, kappa, bounds, balance exponents) travel as "p/q"
// strings end to end; measured quantities are decimal floats accompanied by
// their standard errors.  JSON output keeps insertion order, CSV output uses
// CRLF rows with minimal quoting, and every float is printed with %.17g so
// reruns of the same configuration and seed are byte-identical.
//
// Sphere runs take --N (the lattice norm) and derive the admissible
// R = (2 pi N)^(1/kappa); paraboloid runs take --R directly.  When --kappa
// is not given the selector kappa for (surface, d, m, alpha) is used.

#include "fdecay/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fdecay/checks.hpp"
#include "fdecay/construction.hpp"
#include "fdecay/experiment.hpp"
#include "fdecay/exponents.hpp"
#include "fdecay/extension.hpp"
#include "fdecay/geometry.hpp"
#include "fdecay/measure.hpp"

namespace fdecay {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_positive_number(const std::string& token, const char* field) {
    auto fail = [&]() -> double {
        throw std::domain_error(std::string(field) + ": cannot parse \"" + token + "\"");
    };
    const std::vector<std::string> parts = split(token, '^');
    if (parts.size() > 2) return fail();
    auto to_d = [&](const std::string& s) -> double {
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            return fail();
        }
        if (pos != s.size()) return fail();
        return v;
    };
    const double v = parts.size() == 2 ? std::pow(to_d(parts[0]), to_d(parts[1])) : to_d(parts[0]);
    if (!(std::isfinite(v) && v > 0)) return fail();
    return v;
}

Rational parse_rational_field(const std::string& text, const char* field) {
    try {
        return Rational::parse(text);
    } catch (const std::exception&) {
        throw std::domain_error(std::string(field) + ": cannot parse \"" + text +
                                "\" as an exact p/q rational");
    }
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

// Writes content to out_path when set, to the stream otherwise.
void emit(const std::string& content, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + out_path);
    f << content;
    f.flush();
    if (!f.good()) throw std::runtime_error("failed while writing " + out_path);
}

// ============================================================================
// Shared construction flags and their translation to ConstructionParams.
// ============================================================================

struct CommonOpts {
    std::string surface;
    int d = 3;
    int m = 1;
    std::string alpha;
    std::string kappa;
    std::string R_spec;
    std::string N_spec;
    double c = 1e-3;
    uint64_t seed = 2026;
    int64_t mc_samples = 100000;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--surface", o.surface, "sphere or paraboloid")->required();
    cmd->add_option("--d", o.d, "ambient dimension")->required();
    cmd->add_option("--m", o.m, "coordinate-block split parameter")->required();
    cmd->add_option("--alpha", o.alpha, "measure dimension, exact p/q")->required();
    cmd->add_option("--kappa", o.kappa, "override the selector kappa, exact p/q");
    cmd->add_option("--R", o.R_spec, "scale parameter (paraboloid), plain or base^exp");
    cmd->add_option("--N", o.N_spec, "lattice norm (sphere); R = (2 pi N)^(1/kappa)");
    cmd->add_option("--c", o.c, "cap width constant in (0, 1/1000]")->capture_default_str();
    cmd->add_option("--seed", o.seed, "RNG seed, recorded in the output")->capture_default_str();
    cmd->add_option("--mc-samples", o.mc_samples, "MC draws per volume estimate")
        ->capture_default_str();
}

ConstructionParams params_sans_scale(const CommonOpts& o) {
    ConstructionParams p;
    p.surface = parse_surface(o.surface);
    p.d = o.d;
    p.m = o.m;
    p.alpha = parse_rational_field(o.alpha, "--alpha");
    p.kappa = o.kappa.empty() ? lemma_kappa_selector(p.surface, p.m, p.alpha, p.d)
                              : parse_rational_field(o.kappa, "--kappa");
    p.c = o.c;
    return p;
}

void require_scale_spec(const ConstructionParams& p, const CommonOpts& o) {
    if (p.surface == Surface::sphere) {
        if (o.N_spec.empty()) throw std::domain_error("--N is required for sphere runs");
        if (!o.R_spec.empty())
            throw std::domain_error("--R applies to paraboloid runs; use --N for the sphere");
    } else {
        if (o.R_spec.empty()) throw std::domain_error("--R is required for paraboloid runs");
        if (!o.N_spec.empty())
            throw std::domain_error("--N applies to sphere runs; use --R for the paraboloid");
    }
}

struct BuiltParams {
    ConstructionParams p;
    std::optional<int64_t> N;
};

BuiltParams build_single(const CommonOpts& o) {
    BuiltParams bp;
    bp.p = params_sans_scale(o);
    require_scale_spec(bp.p, o);
    if (bp.p.surface == Surface::sphere) {
        const std::vector<int64_t> ns = parse_n_list(o.N_spec);
        if (ns.size() != 1)
            throw std::domain_error("--N must be a single value for this subcommand");
        bp.p.R = admissible_R(bp.p, ns.front());
        bp.N = ns.front();
    } else {
        const std::vector<double> rs = parse_r_grid(o.R_spec);
        if (rs.size() != 1)
            throw std::domain_error("--R must be a single value for this subcommand");
        bp.p.R = rs.front();
    }
    validate_params(bp.p);
    return bp;
}

Json config_json(const ConstructionParams& p, const std::optional<int64_t>& N) {
    Json j;
    j["surface"] = surface_name(p.surface);
    j["d"] = p.d;
    j["m"] = p.m;
    j["alpha"] = p.alpha.str();
    j["kappa"] = p.kappa.str();
    if (N) j["N"] = *N;
    j["R"] = p.R;
    j["c"] = p.c;
    return j;
}

// ============================================================================
// Subcommand bodies.
// ============================================================================

void run_threshold(int d, std::ostream& out) {
    out << falconer_threshold(d).str() << "\n";
}

void run_bounds(const std::string& surface, int d, const std::string& grid_text,
                const std::string& format, const std::string& out_path, std::ostream& out) {
    const Surface s = parse_surface(surface);
    const std::vector<Rational> grid = parse_alpha_grid(grid_text);
    const BoundsReport rep = bounds_report(s, d, grid);
    std::string content;
    if (format == "csv") {
        content = bounds_csv(rep);
    } else {
        Json j;
        j["surface"] = surface_name(s);
        j["d"] = d;
        Json rows = Json::array();
        for (const BoundsRow& r : rep.rows) {
            Json row;
            row["alpha"] = r.alpha.str();
            row["ok"] = r.ok;
            if (r.ok) {
                row["lower"] = r.lower.str();
                row["upper"] = r.upper.str();
                row["branch"] = r.branch;
                row["prior"] = r.prior.str();
                row["gap_prior"] = r.gap_prior.str();
                row["gap_lower"] = r.gap_lower.str();
            } else {
                row["note"] = r.note;
            }
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        content = j.dump(2) + "\n";
    }
    emit(content, out_path, out);
}

void run_construct(const CommonOpts& o, std::ostream& out) {
    const BuiltParams bp = build_single(o);
    const PatchSet om = build_omega(bp.p);
    const SlabSet la = build_lambda(bp.p);
    const MeasureEstimate mo = omega_measure(om, o.mc_samples, derive_seed(o.seed, 1));
    const MeasureEstimate ml = lambda_volume(la, o.mc_samples, derive_seed(o.seed, 2));
    Json j = config_json(bp.p, bp.N);
    j["seed"] = o.seed;
    j["patch_count"] = om.patch_count();
    j["omega_measure"] = mo.value;
    j["omega_stderr"] = mo.stderr_;
    j["omega_exact"] = mo.exact;
    j["lambda_volume"] = ml.value;
    j["lambda_stderr"] = ml.stderr_;
    j["lambda_exact"] = ml.exact;
    out << j.dump(2) << "\n";
}

void run_phase(const CommonOpts& o, int64_t samples, std::ostream& out) {
    const BuiltParams bp = build_single(o);
    const double dev = verify_phase(bp.p, samples, o.seed);
    Json j = config_json(bp.p, bp.N);
    j["seed"] = o.seed;
    j["samples"] = samples;
    j["max_deviation"] = dev;
    j["limit"] = 0.01;
    out << j.dump(2) << "\n";
}

void run_calpha(const CommonOpts& o, int64_t centers, int64_t ball_samples,
                const std::string& out_path, std::ostream& out) {
    const BuiltParams bp = build_single(o);
    const BalanceReport rep = verify_kappa_balances(bp.p);
    const FractalMeasure mu = make_measure(bp.p, o.mc_samples, derive_seed(o.seed, 1));
    const OracleResult res = c_alpha_oracle(mu, centers, ball_samples, derive_seed(o.seed, 3));
    Json j = config_json(bp.p, bp.N);
    j["seed"] = o.seed;
    j["n_centers"] = centers;
    j["n_ball_samples"] = ball_samples;
    j["n_mc_samples"] = o.mc_samples;
    j["mass"] = mu.mass;
    j["mass_stderr"] = mu.mass_err;
    j["c_alpha"] = res.value;
    j["argmax_r"] = res.argmax_r;
    j["balance_target"] = rep.target.str();
    Json rows = Json::array();
    for (const BalanceRow& row : rep.rows) {
        Json r;
        r["scale"] = row.scale;
        r["t"] = row.t.str();
        r["exponent"] = row.exponent.str();
        rows.push_back(std::move(r));
    }
    j["balance_rows"] = std::move(rows);
    out << j.dump(2) << "\n";
    if (!out_path.empty()) {
        const ScaleProfile& pr = res.profile;
        std::string csv = "r,regime_label,formula_value,oracle_value,oracle_stderr\r\n";
        for (size_t i = 0; i < pr.scales.size(); ++i)
            csv += g17(pr.scales[i]) + "," + csv_field(pr.regime_labels[i]) + "," +
                   g17(pr.formula_values[i]) + "," + g17(pr.oracle_values[i]) + "," +
                   g17(pr.oracle_stderrs[i]) + "\r\n";
        emit(csv, out_path, out);
    }
}

void run_extension(const CommonOpts& o, int64_t points, int64_t nodes,
                   const std::string& out_path, std::ostream& out) {
    if (points < 1) throw std::domain_error("--points must be positive");
    const BuiltParams bp = build_single(o);
    const ExtensionRun run = make_extension(bp.p, o.mc_samples, derive_seed(o.seed, 1));
    const SlabSet la = build_lambda(bp.p);
    Rng rng(derive_seed(o.seed, 2));
    const double scale = std::pow(kTwoPi, 0.5 * bp.p.d) / run.omega_meas.value;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double sum = 0.0;
    std::string csv = "i,normalized_modulus,quadrature_stderr\r\n";
    for (int64_t i = 0; i < points; ++i) {
        const Vec x = lambda_sample(la, rng);
        const ExtensionSample s = extension_value(run, x, nodes, derive_seed(o.seed, 100 + i));
        const double v = std::abs(s.value) * scale;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
        if (!out_path.empty())
            csv += std::to_string(i) + "," + g17(v) + "," + g17(s.quadrature_stderr * scale) +
                   "\r\n";
    }
    Json j = config_json(bp.p, bp.N);
    j["seed"] = o.seed;
    j["points"] = points;
    j["nodes"] = nodes;
    Json nm;
    nm["min"] = lo;
    nm["mean"] = sum / static_cast<double>(points);
    nm["max"] = hi;
    j["normalized_modulus"] = std::move(nm);
    out << j.dump(2) << "\n";
    if (!out_path.empty()) emit(csv, out_path, out);
}

struct ScalingOpts {
    int64_t x_samples = 1000;
    int64_t nodes = 256;
    int64_t centers = 6;
    int64_t ball_samples = 2000;
};

void run_scaling(const CommonOpts& o, const ScalingOpts& so, const std::string& out_path,
                 std::ostream& out) {
    ConstructionParams p = params_sans_scale(o);
    require_scale_spec(p, o);
    std::vector<double> R_list;
    std::optional<std::vector<int64_t>> N_list;
    if (p.surface == Surface::sphere) {
        const std::vector<int64_t> ns = parse_n_list(o.N_spec);
        R_list.reserve(ns.size());
        for (int64_t n : ns) R_list.push_back(admissible_R(p, n));
        N_list = ns;
    } else {
        R_list = parse_r_grid(o.R_spec);
    }
    p.R = R_list.empty() ? 2.0 : R_list.front();
    ScalingBudgets budgets;
    budgets.n_x_samples = so.x_samples;
    budgets.n_nodes = so.nodes;
    budgets.n_oracle_centers = so.centers;
    budgets.n_oracle_samples = so.ball_samples;
    budgets.n_mc_samples = o.mc_samples;

    const ScalingTable tab = scaling_run(p, R_list, budgets, o.seed);
    if (!out_path.empty()) emit(scaling_csv(tab), out_path, out);

    Json j;
    {
        Json cfg;
        cfg["surface"] = surface_name(p.surface);
        cfg["d"] = p.d;
        cfg["m"] = p.m;
        cfg["alpha"] = p.alpha.str();
        cfg["kappa"] = p.kappa.str();
        cfg["c"] = p.c;
        j["config"] = std::move(cfg);
    }
    j["seed"] = o.seed;
    if (N_list) j["N_grid"] = *N_list;
    Json rg = Json::array();
    for (const ScalingRow& row : tab.rows) rg.push_back(row.R);
    j["R_grid"] = std::move(rg);
    {
        Json b;
        b["x_samples"] = so.x_samples;
        b["nodes"] = so.nodes;
        b["centers"] = so.centers;
        b["ball_samples"] = so.ball_samples;
        b["mc_samples"] = o.mc_samples;
        j["budgets"] = std::move(b);
    }
    int64_t ok = 0;
    Json failures = Json::array();
    for (const ScalingRow& row : tab.rows) {
        if (row.ok) {
            ++ok;
        } else {
            Json f;
            f["R"] = row.R;
            f["error"] = row.failure;
            failures.push_back(std::move(f));
        }
    }
    j["rows_ok"] = ok;
    j["rows_failed"] = static_cast<int64_t>(tab.rows.size()) - ok;
    if (!failures.empty()) j["failures"] = std::move(failures);

    const FitResult fit = fit_exponent(tab);
    Json jf;
    jf["slope"] = fit.slope;
    jf["intercept"] = fit.intercept;
    jf["stderr"] = fit.stderr_;
    jf["target_slope"] = fit.target_slope.str();
    j["fit"] = std::move(jf);
    out << j.dump(2) << "\n";
}

}  // namespace

std::vector<double> parse_r_grid(const std::string& text) {
    std::vector<double> out;
    for (const std::string& piece : split(text, ',')) {
        const std::vector<std::string> f = split(piece, ':');
        if (f.size() == 1) {
            out.push_back(parse_positive_number(f[0], "R grid"));
        } else if (f.size() == 3) {
            const double from = parse_positive_number(f[0], "R grid");
            const double to = parse_positive_number(f[1], "R grid");
            const double ratio = parse_positive_number(f[2], "R grid");
            if (!(ratio > 1.0))
                throw std::domain_error("R grid: ratio must exceed 1 in \"" + piece + "\"");
            if (!(from <= to)) throw std::domain_error("R grid: empty range \"" + piece + "\"");
            for (double v = from; v <= to * (1.0 + 1e-9); v *= ratio) out.push_back(v);
        } else {
            throw std::domain_error("R grid: expected a value or from:to:ratio, got \"" + piece +
                                    "\"");
        }
    }
    return out;
}

std::vector<Rational> parse_alpha_grid(const std::string& text) {
    auto parse_rat = [](const std::string& s) {
        try {
            return Rational::parse(s);
        } catch (const std::exception&) {
            throw std::domain_error("alpha grid: cannot parse \"" + s + "\"");
        }
    };
    std::vector<Rational> out;
    for (const std::string& piece : split(text, ',')) {
        const std::vector<std::string> f = split(piece, ':');
        if (f.size() == 1) {
            out.push_back(parse_rat(f[0]));
        } else if (f.size() == 3) {
            const Rational from = parse_rat(f[0]);
            const Rational to = parse_rat(f[1]);
            const Rational step = parse_rat(f[2]);
            if (!(step > Rational(0)))
                throw std::domain_error("alpha grid: step must be positive in \"" + piece + "\"");
            if (to < from) throw std::domain_error("alpha grid: empty range \"" + piece + "\"");
            for (Rational a = from; a <= to; a += step) out.push_back(a);
        } else {
            throw std::domain_error("alpha grid: expected a value or from:to:step, got \"" +
                                    piece + "\"");
        }
    }
    return out;
}

std::vector<int64_t> parse_n_list(const std::string& text) {
    auto to_i = [](const std::string& s) -> int64_t {
        size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw std::domain_error("N list: cannot parse \"" + s + "\"");
        }
        if (pos != s.size() || v < 1)
            throw std::domain_error("N list: entries must be positive integers, got \"" + s +
                                    "\"");
        return v;
    };
    std::vector<int64_t> out;
    for (const std::string& piece : split(text, ',')) {
        const std::vector<std::string> f = split(piece, ':');
        if (f.size() == 1) {
            out.push_back(to_i(f[0]));
        } else if (f.size() == 2 || f.size() == 3) {
            const int64_t from = to_i(f[0]);
            const int64_t to = to_i(f[1]);
            const int64_t step = f.size() == 3 ? to_i(f[2]) : 1;
            if (to < from) throw std::domain_error("N list: empty range \"" + piece + "\"");
            for (int64_t v = from; v <= to; v += step) out.push_back(v);
        } else {
            throw std::domain_error("N list: expected a value or from:to[:step], got \"" + piece +
                                    "\"");
        }
    }
    return out;
}

int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decay-bound toolkit: exact exponent tables and seeded verification runs"};
    app.require_subcommand(1);

    CLI::App* threshold =
        app.add_subcommand("threshold", "Print the exact distance-set dimension threshold");
    int th_d = 3;
    threshold->add_option("--d", th_d, "ambient dimension")->required();

    CLI::App* bounds =
        app.add_subcommand("bounds", "Tabulate lower/new/prior bounds over an alpha grid");
    std::string b_surface, b_grid, b_format = "csv", b_out;
    int b_d = 3;
    bounds->add_option("--surface", b_surface, "sphere or paraboloid")->required();
    bounds->add_option("--d", b_d, "ambient dimension")->required();
    bounds->add_option("--alpha-grid", b_grid, "grid, e.g. 3/2:3:1/8")->required();
    bounds->add_option("--format", b_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    bounds->add_option("--out", b_out, "write the table to this file instead of stdout");

    CLI::App* construct =
        app.add_subcommand("construct", "Build the patch and slab sets and report their measures");
    CommonOpts c_o;
    add_common(construct, c_o);

    CLI::App* phase = app.add_subcommand(
        "verify-phase", "Sample (x, xi) pairs and report the worst phase distance to 2 pi Z");
    CommonOpts p_o;
    add_common(phase, p_o);
    int64_t p_samples = 10000;
    phase->add_option("--samples", p_samples, "number of sampled pairs")->capture_default_str();

    CLI::App* calpha = app.add_subcommand(
        "calpha", "Measure the concentration constant and verify the exact exponent balances");
    CommonOpts ca_o;
    add_common(calpha, ca_o);
    int64_t ca_centers = 6;
    int64_t ca_ball = 2000;
    std::string ca_out;
    calpha->add_option("--centers", ca_centers, "random centers per scale")->capture_default_str();
    calpha->add_option("--ball-samples", ca_ball, "MC draws per ball-mass bracket")
        ->capture_default_str();
    calpha->add_option("--out", ca_out, "write the per-scale profile CSV to this file");

    CLI::App* ext = app.add_subcommand(
        "extension", "Evaluate the extension operator at sampled slab points");
    CommonOpts e_o;
    add_common(ext, e_o);
    int64_t e_points = 1000;
    int64_t e_nodes = 256;
    std::string e_out;
    ext->add_option("--points", e_points, "slab sample points")->capture_default_str();
    ext->add_option("--nodes", e_nodes, "quadrature nodes per evaluation")->capture_default_str();
    ext->add_option("--out", e_out, "write per-point rows to this CSV file");

    CLI::App* scaling =
        app.add_subcommand("scaling", "Run an R sweep and fit the ratio's scaling exponent");
    CommonOpts s_o;
    add_common(scaling, s_o);
    ScalingOpts s_b;
    std::string s_out;
    scaling->add_option("--x-samples", s_b.x_samples, "x draws per L1 estimate")
        ->capture_default_str();
    scaling->add_option("--nodes", s_b.nodes, "quadrature nodes per extension value")
        ->capture_default_str();
    scaling->add_option("--centers", s_b.centers, "random oracle centers")->capture_default_str();
    scaling->add_option("--ball-samples", s_b.ball_samples, "MC draws per ball-mass bracket")
        ->capture_default_str();
    scaling->add_option("--out", s_out, "write the row table to this CSV file");

    CLI::App* checkall = app.add_subcommand("check-all", "Run the full acceptance gate");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (threshold->parsed()) {
            run_threshold(th_d, out);
        } else if (bounds->parsed()) {
            run_bounds(b_surface, b_d, b_grid, b_format, b_out, out);
        } else if (construct->parsed()) {
            run_construct(c_o, out);
        } else if (phase->parsed()) {
            run_phase(p_o, p_samples, out);
        } else if (calpha->parsed()) {
            run_calpha(ca_o, ca_centers, ca_ball, ca_out, out);
        } else if (ext->parsed()) {
            run_extension(e_o, e_points, e_nodes, e_out, out);
        } else if (scaling->parsed()) {
            run_scaling(s_o, s_b, s_out, out);
        } else if (checkall->parsed()) {
            return run_acceptance_checks(out) == 0 ? 0 : 1;
        }
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::overflow_error& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace fdecay
