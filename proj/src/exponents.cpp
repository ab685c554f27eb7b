#include "fdecay/exponents.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

namespace fdecay {

namespace {

const Rational kHalf(1, 2);

std::string kappa_label(const char* part, int i, int m) {
    return std::string("(") + part + ") kappa" + std::to_string(i) + "(m=" + std::to_string(m) + ")";
}

BoundResult make_result(const Rational& alpha, const Rational& kappa,
                        const char* part, int i, int m) {
    BoundResult r;
    r.kappa = kappa;
    r.beta_upper = alpha - Rational(1) + Rational(2) * kappa;
    r.branch = kappa_label(part, i, m);
    r.m_star = m;
    return r;
}

}  // namespace

Surface parse_surface(const std::string& text) {
    if (text == "sphere") return Surface::sphere;
    if (text == "parab" || text == "paraboloid") return Surface::paraboloid;
    throw std::domain_error("unknown surface \"" + text + "\" (expected sphere or paraboloid)");
}

void validate_query(const ExponentQuery& q) {
    const Rational a = q.alpha;
    if (q.surface == Surface::sphere) {
        if (q.d < 4)
            throw std::domain_error("sphere bound requires d >= 4 (d=" + std::to_string(q.d) + ")");
        if (!(Rational(q.d, 2) < a && a < Rational(q.d)))
            throw std::domain_error("sphere bound requires d/2 < alpha < d, got alpha=" + a.str());
    } else {
        if (q.d < 3)
            throw std::domain_error("paraboloid bound requires d >= 3 (d=" + std::to_string(q.d) + ")");
        if (!(Rational(q.d - 1, 2) < a && a < Rational(q.d)))
            throw std::domain_error("paraboloid bound requires (d-1)/2 < alpha < d, got alpha=" + a.str());
    }
}

Rational kappa_i(int i, int m, const Rational& alpha, int d) {
    if (d < 1) throw std::domain_error("kappa_i: d must be positive");
    if (m < 0) throw std::domain_error("kappa_i: m must be nonnegative");
    const Rational a = alpha;
    const Rational dm = Rational(d - m);
    switch (i) {
        case 1:
            if (2 * m >= d) throw std::domain_error("kappa_1: requires 2m < d");
            return (Rational(d) - Rational(m, 2) - a) / dm;
        case 2:
            if (2 * m >= d) throw std::domain_error("kappa_2: requires 2m < d");
            return (Rational(d) - a) / (Rational(2) * dm);
        case 3:
            if (2 * m >= d) throw std::domain_error("kappa_3: requires 2m < d");
            return (Rational(d) - Rational(m, 2) - a) / Rational(d - m + 1);
        case 4:
            if (2 * m > d) throw std::domain_error("kappa_4: requires 2m <= d");
            return (Rational(d) - a) / (Rational(2) * Rational(d - m + 1));
        case 5:
            if (m < 1) throw std::domain_error("kappa_5: requires m >= 1");
            if (2 * m > d) throw std::domain_error("kappa_5: requires 2m <= d");
            if (d - m - 1 < 1) throw std::domain_error("kappa_5: requires m <= d-2");
            return (Rational(d) - a - Rational(1)) / (Rational(2) * Rational(d - m - 1));
        default:
            throw std::domain_error("kappa_i: index must be 1..5");
    }
}

// ============================================================================
// Sphere dispatch, d >= 4, alpha in (d/2, d).
//
// (a) [d-1, d):                       kappa_2(1)
// (b) [d-j, d-j+1], j=2..(d-1)/2:     min{kappa_1(j-1), kappa_2(j)}
// (c) d even, (d/2, d/2+1]:           kappa_1(d/2-1)
// (d) d odd,  (d/2, (d+1)/2]:         kappa_1((d-1)/2)
// ============================================================================

BoundResult sphere_kappa(const ExponentQuery& q) {
    ExponentQuery qq = q;
    qq.surface = Surface::sphere;
    validate_query(qq);
    const int d = q.d;
    const Rational a = q.alpha;

    if (a >= Rational(d - 1))
        return make_result(a, kappa_i(2, 1, a, d), "a", 2, 1);

    for (int j = 2; 2 * j <= d - 1; ++j) {
        if (Rational(d - j) <= a && a <= Rational(d - j + 1)) {
            const Rational k1 = kappa_i(1, j - 1, a, d);
            const Rational k2 = kappa_i(2, j, a, d);
            if (k2 <= k1) return make_result(a, k2, "b", 2, j);
            return make_result(a, k1, "b", 1, j - 1);
        }
    }

    if (d % 2 == 0) {
        // Remaining range is exactly (d/2, d/2+1].
        const int m = d / 2 - 1;
        const Rational k = kappa_i(1, m, a, d);
        assert(k == (Rational(3 * d + 2) - Rational(4) * a) / Rational(2 * (d + 2)));
        return make_result(a, k, "c", 1, m);
    }
    const int m = (d - 1) / 2;
    const Rational k = kappa_i(1, m, a, d);
    assert(k == (Rational(3 * d + 1) - Rational(4) * a) / Rational(2 * (d + 1)));
    return make_result(a, k, "d", 1, m);
}

// ============================================================================
// Paraboloid dispatch, d >= 3, alpha in ((d-1)/2, d).  With F = floor((d+1)/3):
//
// (a) [d-1, d):                       kappa_4(1)
// (b) [d-j, d-j+1], j=2..F:           min{kappa_3(j-1), kappa_4(j)}
// (c) j = F+1:                        kappa_3(F)
// (d) [d-j, d-j+1], j=F+2..d/2:       min{kappa_3(j-2),
//                                         max{kappa_3(j-1), kappa_5(j-1)},
//                                         kappa_5(j)}
// (e) d odd >= 7, ((d-1)/2, (d+1)/2]: kappa_3((d-3)/2)   (d=3,5 fall in (c))
// (f) d even, ((d-1)/2, d/2]:         kappa_3(d/2-1)
//
// (e) and (f) are checked before (c)/(d): at the single shared gridpoint the
// values coincide and the bottom-interval label is reported.
//
// The intervals of (c) and (d) meet at alpha = d-F-1, and for d = 10, 13, ...
// the two stated values differ there; at such points the smaller kappa (the
// sharper bound) is returned under the part-(d) label.
// ============================================================================

namespace {

BoundResult parab_part_d(const Rational& a, int d, int j) {
    struct Cand { Rational value; int i; int m; };
    const Rational k3a = kappa_i(3, j - 2, a, d);
    const Rational k3b = kappa_i(3, j - 1, a, d);
    const Rational k5a = kappa_i(5, j - 1, a, d);
    const Rational k5b = kappa_i(5, j, a, d);
    const Rational mid = k3b >= k5a ? k3b : k5a;
    Rational best = k3a;
    if (mid < best) best = mid;
    if (k5b < best) best = k5b;

    // The displayed two-case simplification must agree with the three-way min.
    {
        const Rational cross = Rational(d - j) + Rational(2 * (d - 2 * j + 1)) / Rational(d - j - 2);
        const Rational low = k3b <= k5b ? k3b : k5b;
        const Rational high = k3a <= k5a ? k3a : k5a;
        const Rational twocase = (a <= cross) ? low : high;
        assert(twocase == best);
        (void)twocase;
    }

    const Cand cands[] = {{k3a, 3, j - 2}, {k3b, 3, j - 1}, {k5a, 5, j - 1}, {k5b, 5, j}};
    for (const Cand& c : cands)
        if (c.value == best) return make_result(a, best, "d", c.i, c.m);
    throw std::logic_error("parab_kappa: unreachable in part (d)");
}

}  // namespace

BoundResult parab_kappa(const ExponentQuery& q) {
    ExponentQuery qq = q;
    qq.surface = Surface::paraboloid;
    validate_query(qq);
    const int d = q.d;
    const Rational a = q.alpha;
    const int F = (d + 1) / 3;

    if (a >= Rational(d - 1))
        return make_result(a, kappa_i(4, 1, a, d), "a", 4, 1);

    for (int j = 2; j <= F; ++j) {
        if (Rational(d - j) <= a && a <= Rational(d - j + 1)) {
            const Rational k3 = kappa_i(3, j - 1, a, d);
            const Rational k4 = kappa_i(4, j, a, d);
            if (k4 <= k3) return make_result(a, k4, "b", 4, j);
            return make_result(a, k3, "b", 3, j - 1);
        }
    }

    if (d % 2 == 1 && d >= 7 && a <= Rational(d + 1, 2)) {
        const int m = (d - 3) / 2;
        const Rational k = kappa_i(3, m, a, d);
        assert(k == (Rational(3 * d + 3) - Rational(4) * a) / Rational(2 * (d + 5)));
        return make_result(a, k, "e", 3, m);
    }
    if (d % 2 == 0 && a <= Rational(d, 2)) {
        const int m = d / 2 - 1;
        const Rational k = kappa_i(3, m, a, d);
        assert(k == (Rational(3 * d + 2) - Rational(4) * a) / Rational(2 * (d + 4)));
        return make_result(a, k, "f", 3, m);
    }

    // Parts (c) and (d) share the gridpoint alpha = d-F-1, and there the two
    // stated values can differ (first at d = 10, where (c) gives 5/16 but
    // (d) reaches 3/10 through kappa_5).  Both are valid bounds, so the
    // sharper one is returned; everywhere else at most one part applies.
    std::optional<BoundResult> best;
    {
        const int j = F + 1;
        if (Rational(d - j) <= a && a <= Rational(d - j + 1))
            best = make_result(a, kappa_i(3, F, a, d), "c", 3, F);
    }
    for (int j = F + 2; 2 * j <= d; ++j) {
        if (Rational(d - j) <= a && a <= Rational(d - j + 1)) {
            BoundResult r = parab_part_d(a, d, j);
            if (!best || r.kappa < best->kappa) best = std::move(r);
            break;
        }
    }
    if (best) return *best;

    throw std::logic_error("parab_kappa: dispatch gap at alpha=" + a.str() +
                           ", d=" + std::to_string(d));
}

BoundResult decay_bound(const ExponentQuery& q) {
    return q.surface == Surface::sphere ? sphere_kappa(q) : parab_kappa(q);
}

Rational prior_upper_bound(const ExponentQuery& q) {
    const Rational a = q.alpha;
    if (q.surface == Surface::sphere) {
        if (q.d < 4) throw std::domain_error("prior sphere bound requires d >= 4");
        if (!(Rational(q.d, 2) <= a && a < Rational(q.d)))
            throw std::domain_error("prior sphere bound requires d/2 <= alpha < d");
        return a - Rational(1) + Rational(2) * (Rational(q.d) - a) / Rational(q.d);
    }
    if (q.d < 3) throw std::domain_error("prior paraboloid bound requires d >= 3");
    if (!(Rational(q.d - 1, 2) <= a && a < Rational(q.d)))
        throw std::domain_error("prior paraboloid bound requires (d-1)/2 <= alpha < d");
    return Rational(q.d - 1) * (a + Rational(1)) / Rational(q.d + 1);
}

Rational lower_bound(const Rational& alpha, int d) {
    if (d < 2) throw std::domain_error("lower_bound: d must be >= 2");
    if (!(Rational(0) < alpha && alpha < Rational(d)))
        throw std::domain_error("lower_bound: requires 0 < alpha < d, got alpha=" + alpha.str());
    if (alpha <= Rational(d - 1, 2)) return alpha;
    if (alpha <= Rational(d, 2)) return Rational(d - 1, 2);
    return Rational(d - 1) * alpha / Rational(d);
}

// ============================================================================
// Falconer-type threshold: the unique root of f(alpha) = beta(alpha) + alpha - d.
//
// beta is piecewise linear in alpha and f is strictly increasing (slope >= 1),
// so we localize the root between known breakpoints and solve each candidate
// piece exactly: reconstruct the line through two sample points, verify a
// third, and accept a root only if f vanishes at it exactly.  Pieces whose
// three samples are not collinear still contain a kink and get bisected.
// ============================================================================

namespace {

Rational falconer_f(const Rational& a, int d) {
    ExponentQuery q{Surface::paraboloid, d, a};
    return parab_kappa(q).beta_upper + a - Rational(d);
}

std::optional<Rational> falconer_solve_on(const Rational& lo, const Rational& hi, int d, int depth) {
    if (!(lo < hi) || depth > 64) return std::nullopt;
    const Rational flo = falconer_f(lo, d);
    const Rational fhi = falconer_f(hi, d);
    if (flo == Rational(0)) return lo;
    if (fhi == Rational(0)) return hi;
    if (flo > Rational(0) || fhi < Rational(0)) return std::nullopt;

    const Rational t1 = lo + (hi - lo) / Rational(4);
    const Rational t2 = lo + (hi - lo) / Rational(2);
    const Rational t3 = lo + Rational(3) * (hi - lo) / Rational(4);
    const Rational f1 = falconer_f(t1, d), f2 = falconer_f(t2, d), f3 = falconer_f(t3, d);
    const Rational slope = (f3 - f1) / (t3 - t1);
    if (f2 == f1 + slope * (t2 - t1) && slope > Rational(0)) {
        const Rational root = t1 - f1 / slope;
        if (lo <= root && root <= hi && falconer_f(root, d) == Rational(0)) return root;
    }
    if (auto r = falconer_solve_on(lo, t2, d, depth + 1)) return r;
    return falconer_solve_on(t2, hi, d, depth + 1);
}

}  // namespace

Rational falconer_threshold(int d) {
    if (d < 3) throw std::domain_error("falconer_threshold: requires d >= 3");
    std::vector<Rational> marks;
    const Rational eps(1, 1024);
    marks.push_back(Rational(d - 1, 2) + eps);
    marks.push_back(Rational(d, 2));
    marks.push_back(Rational(d + 1, 2));
    for (int j = d / 2; j >= 1; --j) marks.push_back(Rational(d - j));
    marks.push_back(Rational(d) - eps);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    for (size_t i = 0; i + 1 < marks.size(); ++i)
        if (auto r = falconer_solve_on(marks[i], marks[i + 1], d, 0)) return *r;
    throw std::logic_error("falconer_threshold: no root located for d=" + std::to_string(d));
}

Rational lemma_kappa_selector(Surface surface, int m, const Rational& alpha, int d) {
    const Rational a = alpha;
    if (surface == Surface::sphere) {
        if (d < 4) throw std::domain_error("selector: sphere requires d >= 4");
        if (m < 1 || 2 * m >= d)
            throw std::domain_error("selector: sphere requires 1 <= m < d/2");
        if (!(Rational(d, 2) < a && a < Rational(d)))
            throw std::domain_error("selector: sphere requires d/2 < alpha < d");
        return a <= Rational(d - m) ? kappa_i(1, m, a, d) : kappa_i(2, m, a, d);
    }

    if (d < 3) throw std::domain_error("selector: paraboloid requires d >= 3");
    if (m < 1 || 2 * m > d)
        throw std::domain_error("selector: paraboloid requires 1 <= m <= d/2");
    if (3 * m <= d + 1) {
        if (!(Rational(m) <= a && a < Rational(d)))
            throw std::domain_error("selector: requires m <= alpha < d");
        return a <= Rational(d - m) ? kappa_i(3, m, a, d) : kappa_i(4, m, a, d);
    }
    if (2 * m < d) {
        if (!(Rational(m) <= a && a < Rational(d)))
            throw std::domain_error("selector: requires m <= alpha < d");
        if (a <= Rational(d - m - 1)) return kappa_i(3, m, a, d);
        if (a <= Rational(d - m)) {
            const Rational k3 = kappa_i(3, m, a, d);
            const Rational k5 = kappa_i(5, m, a, d);
            return k3 >= k5 ? k3 : k5;
        }
        if (a <= Rational(d + m - 1, 2)) return kappa_i(5, m, a, d);
        return kappa_i(4, m, a, d);
    }
    // 2m == d: only the top two windows apply.
    if (!(Rational(d - m) <= a && a < Rational(d)))
        throw std::domain_error("selector: for 2m = d requires d/2 <= alpha < d");
    if (a <= Rational(d + m - 1, 2)) return kappa_i(5, m, a, d);
    return kappa_i(4, m, a, d);
}

}  // namespace fdecay
