// Scaling sweeps, slope fits, and exact bound-comparison tables.
//
// The sweep realizes the limiting statement "the ratio behaves like
// R^{-kappa+(1-alpha)/2}" at finite R: measure every ingredient per R,
// fit the log-log slope, compare with the exact target.  Constants are
// deliberately not modeled; the closed-form companion column exists so
// the R-shape can be checked with the width prefactors cancelled.

#include "fdecay/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fdecay/exponents.hpp"
#include "fdecay/extension.hpp"
#include "fdecay/measure.hpp"

namespace fdecay {

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        out += ch;
        if (ch == '"') out += '"';
    }
    out += '"';
    return out;
}

void check_budgets(const ScalingBudgets& b) {
    if (b.n_x_samples < 1 || b.n_nodes < 1 || b.n_oracle_centers < 0 ||
        b.n_oracle_samples < 16 || b.n_mc_samples < 16)
        throw std::domain_error("scaling_run: budgets out of range");
}

ScalingRow run_row(const ConstructionParams& config, double R, const ScalingBudgets& b,
                   uint64_t seed) {
    ScalingRow row;
    row.R = R;
    try {
        ConstructionParams p = config;
        p.R = R;
        const uint64_t rs = derive_seed(seed, std::bit_cast<uint64_t>(R));
        const FractalMeasure mu = make_measure(p, b.n_mc_samples, derive_seed(rs, 1));
        row.mass = mu.mass;
        const ExtensionRun run = make_extension(p, b.n_mc_samples, derive_seed(rs, 2));
        row.f_l2 = std::sqrt(run.omega_meas.value);
        const OracleResult orc =
            c_alpha_oracle(mu, b.n_oracle_centers, b.n_oracle_samples, derive_seed(rs, 3));
        row.c_alpha = orc.value;
        const MeasureEstimate l1 =
            l1_norm_on_mu(p, b.n_x_samples, b.n_nodes, derive_seed(rs, 4));
        row.l1_norm = l1.value;
        row.l1_err = l1.stderr_;
        row.ratio = row.l1_norm / (std::sqrt(row.c_alpha * row.mass) * row.f_l2);
        const double half_exp = 0.5 * (p.alpha.to_double() - static_cast<double>(p.d));
        row.closed_form = run.omega_meas.value * row.mass /
                          (std::pow(R, half_exp) * std::sqrt(row.mass) * row.f_l2);
        row.ok = row.ratio > 0 && std::isfinite(row.ratio);
        if (!row.ok) row.failure = "ratio is not a positive finite number";
    } catch (const std::exception& e) {
        row.ok = false;
        row.failure = e.what();
    }
    return row;
}

}  // namespace

ScalingTable scaling_run(const ConstructionParams& config, const std::vector<double>& R_list,
                         const ScalingBudgets& budgets, uint64_t seed) {
    check_budgets(budgets);
    ScalingTable tab;
    tab.config = config;
    tab.config.R = 0;
    tab.rows.reserve(R_list.size());
    for (double R : R_list) tab.rows.push_back(run_row(config, R, budgets, seed));
    std::stable_sort(tab.rows.begin(), tab.rows.end(),
                     [](const ScalingRow& a, const ScalingRow& b) { return a.R < b.R; });
    return tab;
}

std::string scaling_csv(const ScalingTable& table) {
    std::string out = "surface,d,m,alpha,kappa,R,l1,l1_err,c_alpha,mass,f_l2,ratio\r\n";
    const std::string prefix = std::string(surface_name(table.config.surface)) + "," +
                               std::to_string(table.config.d) + "," +
                               std::to_string(table.config.m) + "," +
                               csv_field(table.config.alpha.str()) + "," +
                               csv_field(table.config.kappa.str()) + ",";
    for (const ScalingRow& r : table.rows) {
        out += prefix + fmt_g(r.R) + ",";
        if (r.ok) {
            out += fmt_g(r.l1_norm) + "," + fmt_g(r.l1_err) + "," + fmt_g(r.c_alpha) + "," +
                   fmt_g(r.mass) + "," + fmt_g(r.f_l2) + "," + fmt_g(r.ratio);
        } else {
            out += ",,,,,";
        }
        out += "\r\n";
    }
    return out;
}

FitResult fit_exponent(const ScalingTable& table) {
    std::vector<double> xs, ys;
    for (const ScalingRow& r : table.rows) {
        if (!r.ok) continue;
        xs.push_back(std::log(r.R));
        ys.push_back(std::log(r.ratio));
    }
    const auto n = static_cast<double>(xs.size());
    if (xs.size() < 4) throw InsufficientData("fit_exponent: need at least 4 usable rows");
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0)) throw InsufficientData("fit_exponent: rows share a single R value");
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += e * e;
    }
    fit.stderr_ = std::sqrt(ss / (n - 2.0) / sxx);
    fit.target_slope = rat(1, 2) * (rat(1) - table.config.alpha) - table.config.kappa;
    return fit;
}

BoundsReport bounds_report(Surface surface, int d, const std::vector<Rational>& alpha_grid) {
    BoundsReport rep;
    rep.surface = surface;
    rep.d = d;
    rep.rows.reserve(alpha_grid.size());
    for (const Rational& alpha : alpha_grid) {
        BoundsRow row;
        row.alpha = alpha;
        try {
            const ExponentQuery q{surface, d, alpha};
            const BoundResult br = decay_bound(q);
            row.upper = br.beta_upper;
            row.branch = br.branch;
            row.prior = prior_upper_bound(q);
            row.lower = lower_bound(alpha, d);
            row.gap_prior = row.prior - row.upper;
            row.gap_lower = row.upper - row.lower;
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.note = e.what();
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::string bounds_csv(const BoundsReport& report) {
    std::string out = "alpha,lower,upper,branch,prior,gap_prior,gap_lower,note\r\n";
    for (const BoundsRow& r : report.rows) {
        out += csv_field(r.alpha.str()) + ",";
        if (r.ok) {
            out += csv_field(r.lower.str()) + "," + csv_field(r.upper.str()) + "," +
                   csv_field(r.branch) + "," + csv_field(r.prior.str()) + "," +
                   csv_field(r.gap_prior.str()) + "," + csv_field(r.gap_lower.str()) + ",";
        } else {
            out += ",,,,,,";
        }
        out += csv_field(r.note) + "\r\n";
    }
    return out;
}

CorollaryReport corollary_check(int d) {
    if (d < 3) throw std::domain_error("corollary_check: requires d >= 3");
    CorollaryReport rep;
    rep.d = d;
    rep.equal = true;
    for (int k = 0; k < 16; ++k) {
        const Rational alpha = rat(d - 1) + rat(k, 16);
        const Rational expected = rat(d - 1) * alpha / rat(d);
        const ExponentQuery q{Surface::paraboloid, d, alpha};
        const Rational upper = parab_kappa(q).beta_upper;
        const Rational lower = lower_bound(alpha, d);
        if (upper != expected || lower != expected) rep.equal = false;
        rep.values.emplace_back(alpha, upper);
    }
    return rep;
}

}  // namespace fdecay
