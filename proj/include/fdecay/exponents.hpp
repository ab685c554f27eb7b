// Decay exponents for alpha-dimensional measures against the sphere and the
// truncated paraboloid.
//
// The whole module is exact rational arithmetic.  The central objects are the
// five exponent families
//
//   kappa_1(m) = (d - m/2 - alpha) / (d - m)
//   kappa_2(m) = (d - alpha)       / (2(d - m))
//   kappa_3(m) = (d - m/2 - alpha) / (d - m + 1)
//   kappa_4(m) = (d - alpha)       / (2(d - m + 1))
//   kappa_5(m) = (d - alpha - 1)   / (2(d - m - 1))
//
// and the dispatch tables that pick, for each (surface, d, alpha), the branch
// kappa(alpha, d) that wins.  An upper bound for the decay rate is then
// beta = alpha - 1 + 2 kappa.  sphere_kappa covers d >= 4, alpha in (d/2, d);
// parab_kappa covers d >= 3, alpha in ((d-1)/2, d).  Branch boundaries are
// closed on both sides and the adjacent formulas agree there; dispatch is
// deterministic, so the reported branch label at a shared endpoint is fixed
// (lowest matching part wins, with the two bottom-interval parts checked
// before the generic ladder to keep labels stable for even/odd d).
//
// lemma_kappa_selector exposes the per-m selector that the construction and
// measure modules consume: for a fixed transversality parameter m it returns
// the kappa making the slab-measure regime maxima balance.

#pragma once

#include <string>

#include "fdecay/rational.hpp"

namespace fdecay {

enum class Surface { sphere, paraboloid };

inline const char* surface_name(Surface s) {
    return s == Surface::sphere ? "sphere" : "paraboloid";
}

Surface parse_surface(const std::string& text);  // accepts sphere|parab|paraboloid

struct ExponentQuery {
    Surface surface = Surface::paraboloid;
    int d = 3;
    Rational alpha;
};

// Throws std::domain_error unless d and alpha lie in the open admissible window:
// sphere d >= 4 with d/2 < alpha < d, paraboloid d >= 3 with (d-1)/2 < alpha < d.
void validate_query(const ExponentQuery& q);

struct BoundResult {
    Rational kappa;
    Rational beta_upper;   // alpha - 1 + 2 kappa
    std::string branch;    // e.g. "(b) kappa2(m=2)"
    int m_star = 0;        // the m of the kappa family attaining the bound
};

// kappa_i for i in 1..5.  m must be a nonnegative integer in the family's
// window (2m < d for i in {1,2,3}; 2m <= d for i=4; 1 <= m, 2m <= d and
// m <= d-2 for i=5).  Throws std::domain_error otherwise.
Rational kappa_i(int i, int m, const Rational& alpha, int d);

BoundResult sphere_kappa(const ExponentQuery& q);
BoundResult parab_kappa(const ExponentQuery& q);
BoundResult decay_bound(const ExponentQuery& q);  // dispatch on q.surface

// Previously known upper bound for the same surface:
//   sphere:     alpha - 1 + 2(d - alpha)/d          on d/2 <= alpha < d
//   paraboloid: (d - 1)(alpha + 1)/(d + 1)          on (d-1)/2 <= alpha < d
// The left endpoint is included: both branches of the published piecewise
// bound agree there, and the value equals alpha.
Rational prior_upper_bound(const ExponentQuery& q);

// Best known lower bound, valid for every 0 < alpha < d (d >= 2):
//   alpha            on (0, (d-1)/2]
//   (d-1)/2          on [(d-1)/2, d/2]
//   (d-1) alpha / d  on [d/2, d)
Rational lower_bound(const Rational& alpha, int d);

// Smallest alpha with beta(alpha, d) >= d - alpha for the paraboloid bound,
// i.e. the unique root of (alpha - 1 + 2 kappa(alpha,d)) + alpha - d = 0.
// Exact; d >= 3.
Rational falconer_threshold(int d);

// Per-m selector used by the slab constructions.
//   sphere (1 <= m < d/2, d/2 < alpha < d):
//     kappa_1(m) on (d/2, d-m],  kappa_2(m) on [d-m, d)
//   paraboloid (1 <= m <= d/2, m <= alpha < d; for 2m = d only alpha >= d/2):
//     3m <= d+1:  kappa_3(m) on [m, d-m], kappa_4(m) on [d-m, d)
//     else:       kappa_3(m) on [m, d-m-1],
//                 max{kappa_3(m), kappa_5(m)} on [d-m-1, d-m],
//                 kappa_5(m) on [d-m, (d+m-1)/2],
//                 kappa_4(m) on [(d+m-1)/2, d)
// The max in the middle window is resolved by direct comparison.
Rational lemma_kappa_selector(Surface surface, int m, const Rational& alpha, int d);

}  // namespace fdecay
