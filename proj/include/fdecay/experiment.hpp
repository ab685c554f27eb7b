// R-sweep orchestration: scaling tables for the L1/L2 ratio, log-log slope
// fits against the exact target exponent, and rational bound-comparison
// reports.
//
// A scaling row measures everything the ratio
//     l1 / (sqrt(c_alpha * mass) * f_l2)
// needs, plus a closed-form companion built from the same measured set
// sizes.  Both track the same power of R; their quotient is R-independent
// up to lattice-count fluctuation, so drift across the grid flags a
// scaling defect while fixed width-prefactor offsets cancel.  Failed rows
// keep their error text and are skipped by fits, never dropped.
//
// The bound reports stay in exact rational arithmetic end to end.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdecay/construction.hpp"

namespace fdecay {

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScalingBudgets {
    int64_t n_x_samples = 1000;       // x-draws for the L1 average
    int64_t n_nodes = 256;            // quadrature nodes per extension value
    int64_t n_oracle_centers = 6;     // random centers beyond the probe set
    int64_t n_oracle_samples = 2000;  // MC draws per ball-mass bracket
    int64_t n_mc_samples = 100000;    // draws per volume estimate
};

struct ScalingRow {
    double R = 0;
    double l1_norm = 0;
    double l1_err = 0;
    double c_alpha = 0;
    double mass = 0;
    double f_l2 = 0;  // meas(Omega)^{1/2}
    double ratio = 0;  // l1_norm / (sqrt(c_alpha * mass) * f_l2)
    double closed_form = 0;  // meas(Omega) * mass / (R^{(alpha-d)/2} sqrt(mass) f_l2)
    bool ok = false;
    std::string failure;  // error text when ok is false
};

struct ScalingTable {
    ConstructionParams config;      // R left at 0; rows carry their own R
    std::vector<ScalingRow> rows;   // sorted by R
};

// One row per requested R, rows sorted by R.  A row whose pipeline throws
// is recorded with ok = false and the error text.  Row seeds derive from
// the R value, so a row's numbers do not depend on the rest of the list.
ScalingTable scaling_run(const ConstructionParams& config, const std::vector<double>& R_list,
                         const ScalingBudgets& budgets, uint64_t seed);

// CSV with header surface,d,m,alpha,kappa,R,l1,l1_err,c_alpha,mass,f_l2,ratio
// (RFC-4180: CRLF rows, quoting only where needed, %.17g floats).  Failed
// rows keep their R and leave the measured fields empty.
std::string scaling_csv(const ScalingTable& table);

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double stderr_ = 0;     // standard error of the slope
    Rational target_slope;  // -kappa + (1 - alpha)/2
};

// Least-squares slope of log(ratio) against log(R) over the ok rows.
// Throws InsufficientData with fewer than 4 usable rows.
FitResult fit_exponent(const ScalingTable& table);

struct BoundsRow {
    Rational alpha;
    bool ok = false;
    std::string note;    // domain-violation text for flagged rows
    Rational lower;      // best known lower bound
    Rational upper;      // new upper bound alpha - 1 + 2 kappa
    Rational prior;      // previously known upper bound
    Rational gap_prior;  // prior - upper (> 0 = strict improvement)
    Rational gap_lower;  // upper - lower (0 = sharp)
    std::string branch;
};

struct BoundsReport {
    Surface surface = Surface::paraboloid;
    int d = 0;
    std::vector<BoundsRow> rows;
};

// Per-alpha comparison of the new upper bound against the prior upper
// bound and the lower bound; out-of-domain grid points are flagged rows.
BoundsReport bounds_report(Surface surface, int d, const std::vector<Rational>& alpha_grid);

// CSV with header alpha,lower,upper,branch,prior,gap_prior,gap_lower,note;
// rationals rendered as p/q strings.
std::string bounds_csv(const BoundsReport& report);

struct CorollaryReport {
    int d = 0;
    bool equal = false;  // upper == lower == (d-1) alpha / d across the grid
    std::vector<std::pair<Rational, Rational>> values;  // (alpha, common value)
};

// Exact equality of the paraboloid upper bound and the lower bound on the
// step-1/16 grid over [d-1, d).  d >= 3.
CorollaryReport corollary_check(int d);

}  // namespace fdecay
