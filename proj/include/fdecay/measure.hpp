// The fractal measure mu = chi_Lambda dx and its concentration profile.
//
// For a ball B(x,r) the mass mu(B(x,r)) is bracketed by exact per-block
// interval arithmetic: every lattice block contributes a product of 1-dim
// overlaps, with circumscribed boxes giving the upper bound and inscribed
// boxes (shrunk by sqrt of the block dimension) the lower one.  Monte Carlo
// refines the bracket when it is loose.  The concentration at scale r,
//
//   c_alpha(mu, r) = sup_x mu(B(x,r)) / r^alpha,
//
// has a piecewise power form in r whose pieces split at the lattice scales
// 1/R, R^{kappa-1}, R^{2kappa-1} and 1/sqrt(R); the two lattice scale
// orderings (kappa vs 1/4) give two piece tables on the paraboloid side.
// c_alpha_at_scale returns the bare piece value with all bounded prefactors
// dropped, c_alpha_model_at_scale the prefactor-bearing version that tracks
// the actual cell widths, and c_alpha_oracle the measured supremum over a
// geometric r-grid and a candidate center set.
//
// verify_kappa_balances re-derives, in exact rational arithmetic, the fact
// that picks kappa: with kappa from lemma_kappa_selector the piece maxima at
// scale 1/R and at the dominant upper scale agree exactly, and no piece
// exceeds them, so that c_alpha(mu) ~ R^{alpha-d}.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fdecay/construction.hpp"

namespace fdecay {

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BalanceViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FractalMeasure {
    ConstructionParams params;
    SlabSet slab;            // ignored when whole_ball is set
    bool whole_ball = false;
    double mass = 0.0;       // total mass estimate
    double mass_err = 0.0;   // one standard error of the estimate
};

// Builds the slab set and estimates its volume with n_mass samples.
FractalMeasure make_measure(const ConstructionParams& p, int64_t n_mass, uint64_t seed);

// Degenerate comparison measure: the indicator of the full unit ball.
FractalMeasure make_ball_measure(int d, const Rational& alpha);

bool measure_contains(const FractalMeasure& mu, const Vec& y);

struct BallMass {
    double value = 0.0;
    double err = 0.0;    // half-width of the final bracket
    bool exact = false;  // the interval bracket pinched without MC
};

// mu(B(x,r)).  n_samples = 0 skips the MC refinement and returns the bracket
// midpoint.  When the requested draws leave the bracket wide the count
// escalates by factors of 8 (up to 64x) on the same stream.  Throws
// PrecisionError when the bracket ratio still exceeds 4 after that and the
// mass at stake is material (above 1e-6 of the total).
BallMass mu_ball(const FractalMeasure& mu, const Vec& x, double r, int64_t n_samples,
                 uint64_t seed);

// Bare piece value of c_alpha(mu, .) at scale r in (0, 1]: r and R powers
// only, prefactors dropped.  Throws std::domain_error for r outside (0, 1].
double c_alpha_at_scale(const ConstructionParams& p, double r);

// Name of the piece containing r (shared by both c_alpha_* evaluators).
std::string regime_label(const ConstructionParams& p, double r);

// Prefactor-bearing model of c_alpha(mu, r) for r in (0, 4]: products of the
// actual block masses (cell widths, lattice counts, ball volumes) divided by
// r^alpha.  This is the quantity the oracle is compared against.
double c_alpha_model_at_scale(const ConstructionParams& p, double r);

struct ScaleProfile {
    std::vector<double> scales;              // strictly increasing r-grid
    std::vector<std::string> regime_labels;  // piece containing each r
    std::vector<double> formula_values;      // c_alpha_model_at_scale(r)
    std::vector<double> oracle_values;       // measured sup_x mu(B(x,r))/r^alpha
    std::vector<double> oracle_stderrs;      // one-sigma error of the winner
};

struct OracleResult {
    double value = 0.0;     // grid supremum of the measured concentration
    double argmax_r = 0.0;  // scale attaining it
    ScaleProfile profile;
};

// Measured concentration: sup over a 2^{1/4}-geometric r-grid on
// [1/(2R), 2] (plus the exact lattice scales) and over candidate centers
// (origin, lattice-aligned probes, n_centers seeded random ones).
OracleResult c_alpha_oracle(const FractalMeasure& mu, int64_t n_centers, int64_t n_samples,
                            uint64_t seed);

struct BalanceRow {
    std::string scale;   // e.g. "R^(kappa-1)"
    Rational t;          // the scale exponent: r = R^t
    Rational exponent;   // exact R-exponent of the piece supremum there
};

struct BalanceReport {
    Rational target;  // alpha - d
    std::vector<BalanceRow> rows;
};

// Exact balance check for the per-m slab construction; throws
// BalanceViolation naming the offending scale when some piece exceeds
// R^{alpha-d} or the dominant upper scale fails to tie it.
BalanceReport verify_kappa_balances(Surface surface, int d, int m, const Rational& alpha,
                                    const Rational& kappa);
BalanceReport verify_kappa_balances(const ConstructionParams& p);

}  // namespace fdecay
