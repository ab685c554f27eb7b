// Extension-operator evaluation on the lattice constructions.
//
// For x in the slab set and xi in the patch set the phase splits into an
// exact integer multiple of 2*pi (products of lattice indices) plus named
// residual terms, each a product of small factors.  Distance to 2*pi*Z is
// read off the residual sum, so no large-argument reduction ever happens.
// Two residuals record lattice placement roundoff: the as-built spacings
// are pow() results, so the "integer" products sit O(1e-15 * R) away from
// exact multiples of 2*pi; the terms are evaluated in long double and are
// part of the honest deviation.  A naive long-double evaluation
// cross-checks the decomposition below R = 1e8.
//
// extension_value integrates e^{i*phase} over the patch set by Monte
// Carlo with sigma-uniform nodes; on the slab the phase window makes the
// integrand nearly constant, so modest node counts give sub-percent
// quadrature error, and node counts double adaptively elsewhere.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fdecay/construction.hpp"
#include "fdecay/measure.hpp"

namespace fdecay {

struct ReductionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PhaseEscape : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhaseDecomposition {
    int64_t integer_part = 0;  // coefficient of 2*pi
    std::vector<std::pair<std::string, double>> residual_terms;
    double residual() const;   // sum of the residual values
    double total() const;      // 2*pi*integer_part + residual()
    double deviation() const;  // distance of the phase to 2*pi*Z
};

// The real phase of the extension integrand at (R*x, xi).  Sphere: R x.xi
// with xi a point of R^d on the unit sphere.  Paraboloid: xi lives in the
// parameter ball of R^{d-1} and the phase is
// R(x'.xi' + x''.xi'' + x_d |xi'|^2 + x_d |xi''|^2).
double phase_naive(const ConstructionParams& p, const Vec& x, const Vec& xi);

PhaseDecomposition phase_decompose(const ConstructionParams& p, const Vec& x, const Vec& xi);

// Decomposed phase, cross-checked against the naive evaluation modulo 2*pi
// (tolerance 1e-8) whenever R <= 1e8.  ReductionError on disagreement.
double phase(const ConstructionParams& p, const Vec& x, const Vec& xi);

// Max over seeded (x, xi) pairs from the slab and patch sets of the
// distance of the phase to 2*pi*Z.  Throws PhaseEscape, listing a
// violating pair, if any deviation reaches 1/100.
double verify_phase(const ConstructionParams& p, int64_t n_samples, uint64_t seed);
double verify_phase(const PatchSet& om, const SlabSet& la, int64_t n_samples, uint64_t seed);

struct ExtensionSample {
    std::complex<double> value;
    double quadrature_stderr = 0;  // node-sampling error only; the patch
                                   // measure's own stderr lives in the run
};

// The patch set and its measure, built once and reused across many
// evaluation points.
struct ExtensionRun {
    PatchSet omega;
    MeasureEstimate omega_meas;
};

ExtensionRun make_extension(const ConstructionParams& p, int64_t n_meas_samples, uint64_t seed);

// (2*pi)^{-d/2} * meas(Omega) * mean of e^{i*phase} over quadrature nodes.
// |value| never exceeds (2*pi)^{-d/2} * meas(Omega).  Nodes double until
// the standard error clears 1% of that bound; PrecisionError otherwise.
ExtensionSample extension_value(const ExtensionRun& run, const Vec& x, int64_t n_nodes,
                                uint64_t seed);
ExtensionSample extension_value(const ConstructionParams& p, const Vec& x, int64_t n_nodes,
                                uint64_t seed);

// MC estimate of the L1 norm of Ef(R.) against the slab measure:
// |Lambda| times the average modulus over x sampled from the slab.
MeasureEstimate l1_norm_on_mu(const ConstructionParams& p, int64_t n_x_samples, int64_t n_nodes,
                              uint64_t seed);

}  // namespace fdecay
