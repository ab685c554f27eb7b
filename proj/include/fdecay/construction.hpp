// Finite-R counterexample geometry.
//
// Everything is driven by a block split of R^d into an m-block (scale
// R^{-1/2}) and the remaining coordinates (lattice scale).  Three sets are
// built per configuration:
//
//   Gamma:  integer vectors of a fixed norm N, i.e. rational directions that
//           the choice R^kappa = 2*pi*N turns into unit vectors (sphere only);
//   Omega:  a union of congruent frequency patches, one per direction, of
//           size cR^{-1/2} in the m-block and cR^{-1} in the fine block;
//   Lambda: the spatial counterpart, an m-ball crossed with periodic slab
//           lattices (spacing R^{kappa-1}; for the paraboloid the last
//           coordinate gets its own lattice of spacing R^{2kappa-1}/(2*pi)),
//           clipped to the unit ball.
//
// Membership predicates are exact transcriptions of the set definitions;
// samplers draw uniformly from the sets and measures come out either in
// closed form (box unions) or by chart Monte Carlo with reported error.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fdecay/exponents.hpp"
#include "fdecay/geometry.hpp"
#include "fdecay/rational.hpp"

namespace fdecay {

// Hard cap on R (phase reduction in doubles degrades beyond it).  Default
// 1e8; override with the FDECAY_MAX_R environment variable.
double max_R();

struct ConstructionParams {
    Surface surface = Surface::paraboloid;
    int d = 3;
    int m = 1;
    Rational alpha;
    Rational kappa;
    double R = 0;
    double c = 1e-3;
};

void validate_params(const ConstructionParams& p);

// Smallest usable R for a sphere run: R = (2*pi*N)^{q/p} for kappa = p/q, so
// that R^kappa / (2*pi) = N exactly.  Paraboloid runs have no lattice
// constraint and the requested p.R passes through.  Throws std::overflow_error
// beyond max_R().
double admissible_R(const ConstructionParams& p, int64_t N);

struct LatticeSphereSet {
    int dim = 0;
    int64_t radius_N = 0;                      // |v|^2 = norm_sq for every v
    int64_t norm_sq = 0;
    std::vector<std::vector<int64_t>> points;  // empty = no representations
};

// All v in Z^dim with |v|^2 = nsq, by pruned exhaustive search.
LatticeSphereSet enumerate_norm_sq(int64_t nsq, int dim);

// All v in Z^dim with |v| = N (the directions v/N form the Gamma set).
LatticeSphereSet enumerate_gamma(int64_t N, int dim);

struct PatchSet {
    ConstructionParams params;
    int m_block = 0;    // coordinates at scale cR^{-1/2}
    int fine_dim = 0;   // d-m (sphere tail) or d-m-1 (paraboloid lattice)
    double a = 0;       // cR^{-1/2}
    double b = 0;       // cR^{-1}
    double r_kappa = 0; // R^kappa (exactly 2*pi*N for sphere)

    // Sphere: Gamma directions are gamma.points[i] / N.
    LatticeSphereSet gamma;

    // Paraboloid: centers are 2*pi*R^{-kappa} * ell over the stored integer
    // vectors; kept iff |center| + b <= 1.
    double center_spacing = 0;
    std::vector<std::vector<int64_t>> centers;

    size_t patch_count() const {
        return params.surface == Surface::sphere ? gamma.points.size() : centers.size();
    }
    // Center of patch i in the fine block, as real coordinates.
    Vec patch_center(size_t i) const;
};

// Throws std::runtime_error (EmptyConstruction) if no patch survives;
// std::domain_error if a sphere R is not of admissible_R form.
PatchSet build_omega(const ConstructionParams& p);

// Exact membership in Omega.  Sphere: xi must be a point of R^d on the unit
// sphere (checked to 1e-9); paraboloid: xi lives in R^{d-1} and the unit-ball
// clip is part of the predicate.
bool omega_contains(const PatchSet& om, const Vec& xi);

struct SlabSet {
    ConstructionParams params;
    int m_block = 0;
    int mid_dim = 0;     // d-m (sphere) or d-m-1 (paraboloid)
    bool has_last = false;
    double a = 0;        // cR^{-1/2}
    double b = 0;        // cR^{-1}
    double s_mid = 0;    // R^{kappa-1}
    double s_last = 0;   // R^{2kappa-1} / (2*pi)
    int64_t L_mid = 0;   // per-axis index bound: |ell| <= L_mid
    int64_t L_last = 0;
};

SlabSet build_lambda(const ConstructionParams& p);

// Exact membership in Lambda (x in R^d), unit-ball clip included.
bool lambda_contains(const SlabSet& la, const Vec& x);

struct MeasureEstimate {
    double value = 0;
    double stderr_ = 0;  // zero when exact
    bool exact = false;
};

// sigma(Omega) (sphere, chart MC over one representative patch times the
// patch count) or |Omega| (paraboloid, exact box volumes with per-patch MC
// only where the unit-ball clip bites).  Throws std::runtime_error
// (PrecisionError) if the standard error exceeds 2% of the estimate.
MeasureEstimate omega_measure(const PatchSet& om, int64_t n_samples, uint64_t seed);

// |Lambda|: exact slab counts times cell volumes, times an MC estimate of the
// unit-ball clip factor.  Same PrecisionError contract.
MeasureEstimate lambda_volume(const SlabSet& la, int64_t n_samples, uint64_t seed);

// Uniform samples from the sets themselves (rejection on the clip).
Vec omega_sample(const PatchSet& om, Rng& rng);
Vec lambda_sample(const SlabSet& la, Rng& rng);

// Weighted quadrature nodes over one patch, shared by the measure and the
// extension-operator code so that their integrals are consistent by
// construction.  The weight contains the chart Jacobian and the membership
// indicator (weight 0 = proposal point outside the patch), so the patch
// measure is proposal_volume * mean(weight), and an integral over the patch
// is proposal_volume * mean(weight * integrand).
struct PatchNodes {
    std::vector<Vec> points;      // full-dimension xi (R^d sphere, R^{d-1} parab)
    std::vector<double> weights;  // Jacobian * indicator
    double proposal_volume = 0;
};
PatchNodes patch_nodes(const PatchSet& om, size_t patch_index, int64_t n, uint64_t seed);

}  // namespace fdecay
