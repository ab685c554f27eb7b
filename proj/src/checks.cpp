// Acceptance gate bodies.  One function per check, each returning an empty
// string on success and a first-failure description otherwise; the harness
// at the bottom prints one pass/fail line per check and enforces the pinned
// runtime limits.
//
// The exact checks (1-4) re-derive the dispatch tables from retyped closed
// forms (numerators multiplied through, so a transcription slip in either
// copy shows up as a mismatch) and walk step-1/16 and step-1/8 rational
// grids.  The numerical checks (5-9) pin seeds, sample counts and windows;
// the margins measured at pinning time are wide (phase deviations near 4e-3
// against the 1e-2 gate, slope fits near -0.661 against -2/3 +- 0.15, and
// the same slope at three unrelated seeds), so cross-platform rounding
// differences in libm stay far from every gate.

#include "fdecay/checks.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fdecay/construction.hpp"
#include "fdecay/experiment.hpp"
#include "fdecay/exponents.hpp"
#include "fdecay/extension.hpp"
#include "fdecay/geometry.hpp"
#include "fdecay/measure.hpp"
#include "fdecay/rational.hpp"

namespace fdecay {

namespace {

constexpr uint64_t kGateSeed = 2026;

std::string where(Surface s, int d, const Rational& a) {
    std::ostringstream os;
    os << surface_name(s) << " d=" << d << " alpha=" << a.str();
    return os.str();
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

// Step-1/den rational grid strictly between lo and hi; den must clear lo's
// denominator (here den is a multiple of every lo.den() used).
std::vector<Rational> interior_grid(const Rational& lo, const Rational& hi, long long den) {
    std::vector<Rational> g;
    for (long long k = lo.num() * den / lo.den() + 1; Rational(k, den) < hi; ++k)
        g.push_back(Rational(k, den));
    return g;
}

// ============================================================================
// Checks 1-3: dispatch tables against retyped closed forms.
//
// Each table part is written here with the 1/2's cleared from the numerator
// (kappa_1 = (2d - m - 2a) / (2(d-m)) and so on), on its closed alpha-window.
// The dispatch must equal the minimum over all parts covering alpha, carry a
// minimizing part's letter in its branch label, and keep beta = alpha-1+2kappa.
// ============================================================================

struct Part {
    char label;
    Rational value;
};

std::vector<Part> sphere_parts(int d, const Rational& a) {
    auto k1 = [&](int m) { return (rat(2 * d - m) - rat(2) * a) / rat(2 * (d - m)); };
    auto k2 = [&](int m) { return (rat(d) - a) / rat(2 * (d - m)); };
    std::vector<Part> out;
    if (rat(d - 1) <= a && a < rat(d)) out.push_back({'a', k2(1)});
    for (int j = 2; 2 * j <= d - 1; ++j)
        if (rat(d - j) <= a && a <= rat(d - j + 1))
            out.push_back({'b', std::min(k1(j - 1), k2(j))});
    if (d % 2 == 0 && rat(d, 2) < a && a <= rat(d, 2) + rat(1))
        out.push_back({'c', k1(d / 2 - 1)});
    if (d % 2 == 1 && rat(d, 2) < a && a <= rat(d + 1, 2))
        out.push_back({'d', k1((d - 1) / 2)});
    return out;
}

std::vector<Part> parab_parts(int d, const Rational& a) {
    auto k3 = [&](int m) { return (rat(2 * d - m) - rat(2) * a) / rat(2 * (d - m + 1)); };
    auto k4 = [&](int m) { return (rat(d) - a) / rat(2 * (d - m + 1)); };
    auto k5 = [&](int m) { return (rat(d - 1) - a) / rat(2 * (d - m - 1)); };
    const int F = (d + 1) / 3;
    std::vector<Part> out;
    if (rat(d - 1) <= a && a < rat(d)) out.push_back({'a', k4(1)});
    for (int j = 2; j <= F; ++j)
        if (rat(d - j) <= a && a <= rat(d - j + 1))
            out.push_back({'b', std::min(k3(j - 1), k4(j))});
    if (rat(d - F - 1) <= a && a <= rat(d - F)) out.push_back({'c', k3(F)});
    for (int j = F + 2; 2 * j <= d; ++j)
        if (rat(d - j) <= a && a <= rat(d - j + 1))
            out.push_back({'d', std::min({k3(j - 2), std::max(k3(j - 1), k5(j - 1)), k5(j)})});
    if (d % 2 == 1 && d >= 7 && rat(d - 1, 2) < a && a <= rat(d + 1, 2))
        out.push_back({'e', k3((d - 3) / 2)});
    if (d % 2 == 0 && rat(d - 1, 2) < a && a <= rat(d, 2))
        out.push_back({'f', k3(d / 2 - 1)});
    return out;
}

std::vector<Part> table_parts(Surface s, int d, const Rational& a) {
    return s == Surface::sphere ? sphere_parts(d, a) : parab_parts(d, a);
}

Rational dispatch_kappa(Surface s, int d, const Rational& a) {
    const ExponentQuery q{s, d, a};
    return (s == Surface::sphere ? sphere_kappa(q) : parab_kappa(q)).kappa;
}

std::string check_tables() {
    for (Surface s : {Surface::sphere, Surface::paraboloid}) {
        const int d_lo = s == Surface::sphere ? 4 : 3;
        for (int d = d_lo; d <= 12; ++d) {
            const Rational lo = s == Surface::sphere ? rat(d, 2) : rat(d - 1, 2);
            const Rational hi = rat(d);

            for (const Rational& a : interior_grid(lo, hi, 16)) {
                const auto parts = table_parts(s, d, a);
                if (parts.empty()) return "no table part covers " + where(s, d, a);
                Rational best = parts.front().value;
                for (const Part& p : parts) best = std::min(best, p.value);
                const ExponentQuery q{s, d, a};
                const BoundResult r = s == Surface::sphere ? sphere_kappa(q) : parab_kappa(q);
                if (r.kappa != best)
                    return "kappa mismatch at " + where(s, d, a) + ": table " + best.str() +
                           ", dispatch " + r.kappa.str();
                if (r.beta_upper != a - rat(1) + rat(2) * r.kappa)
                    return "beta != alpha - 1 + 2 kappa at " + where(s, d, a);
                bool label_ok = false;
                for (const Part& p : parts)
                    if (p.value == best && r.branch.size() > 1 && r.branch[1] == p.label)
                        label_ok = true;
                if (!label_ok)
                    return "branch label " + r.branch + " is not a minimizing part at " +
                           where(s, d, a);
            }

            // Value continuity at every half-integer joint: the formula set can
            // only change at integers and half-integers, and between joints the
            // dispatch is a min of linear functions with |slope| <= 1/2, so
            // one-sided probes at distance eps must sit within eps of the value
            // at the joint.  The single exception for d <= 12 is the paraboloid
            // joint d=10, alpha=6, where the two adjacent parts disagree and
            // the dispatch takes the sharper value; there the exact one-sided
            // behavior is pinned instead.
            const Rational eps(1, 2048);
            for (long long k = lo.num() * 2 / lo.den() + 1; Rational(k, 2) < hi; ++k) {
                const Rational t(k, 2);
                if (!(lo < t - eps)) continue;
                const Rational L = dispatch_kappa(s, d, t - eps);
                const Rational M = dispatch_kappa(s, d, t);
                const Rational R = dispatch_kappa(s, d, t + eps);
                if (s == Surface::paraboloid && d == 10 && t == rat(6)) {
                    if (M != rat(3, 10) || L != rat(3, 10) + eps / rat(10) ||
                        R != rat(5, 16) - eps / rat(8))
                        return "sharper-min joint off at " + where(s, d, t) + ": got " +
                               L.str() + " | " + M.str() + " | " + R.str();
                    continue;
                }
                if (abs(L - M) > eps || abs(R - M) > eps)
                    return "branch joint discontinuity at " + where(s, d, t) + ": " + L.str() +
                           " | " + M.str() + " | " + R.str();
            }
        }
    }

    // The two-case simplification of the ladder part with the kappa_5 middle
    // term must agree with the three-way min on its whole window (the windows
    // with d <= 12 are (d=10, j=5) and (d=12, j=6)).
    int dd_windows = 0;
    for (int d = 3; d <= 12; ++d) {
        const int F = (d + 1) / 3;
        for (int j = F + 2; 2 * j <= d; ++j) {
            ++dd_windows;
            for (long long k = 64LL * (d - j); k <= 64LL * (d - j + 1); ++k) {
                const Rational a(k, 64);
                auto k3 = [&](int m) { return (rat(2 * d - m) - rat(2) * a) / rat(2 * (d - m + 1)); };
                auto k5 = [&](int m) { return (rat(d - 1) - a) / rat(2 * (d - m - 1)); };
                const Rational threeway =
                    std::min({k3(j - 2), std::max(k3(j - 1), k5(j - 1)), k5(j)});
                const Rational cross =
                    rat(d - j) + rat(2 * (d - 2 * j + 1)) / rat(d - j - 2);
                const Rational twocase = a <= cross ? std::min(k3(j - 1), k5(j))
                                                    : std::min(k3(j - 2), k5(j - 1));
                if (threeway != twocase)
                    return "two-case form diverges from three-way min at d=" +
                           std::to_string(d) + " j=" + std::to_string(j) + " alpha=" + a.str();
            }
        }
    }
    if (dd_windows != 2) return "expected exactly 2 kappa_5 ladder windows for d <= 12";
    return "";
}

std::string check_improvement() {
    for (Surface s : {Surface::sphere, Surface::paraboloid}) {
        const int d_lo = s == Surface::sphere ? 4 : 3;
        for (int d = d_lo; d <= 12; ++d) {
            const Rational lo = s == Surface::sphere ? rat(d, 2) : rat(d - 1, 2);
            for (const Rational& a : interior_grid(lo, rat(d), 16)) {
                const ExponentQuery q{s, d, a};
                const BoundResult r = decay_bound(q);
                const Rational prior = prior_upper_bound(q);
                if (!(r.beta_upper < prior))
                    return "no strict improvement over the prior bound at " + where(s, d, a) +
                           ": " + r.beta_upper.str() + " vs " + prior.str();
                const Rational low = lower_bound(a, d);
                if (r.beta_upper < low)
                    return "upper bound falls below the lower bound at " + where(s, d, a);
                if (s == Surface::paraboloid && a >= rat(d - 1)) {
                    if (r.beta_upper != low || low != rat(d - 1) * a / rat(d))
                        return "top-window sharpness fails at " + where(s, d, a) + ": upper " +
                               r.beta_upper.str() + ", lower " + low.str();
                } else if (r.beta_upper == low) {
                    return "upper bound touches the lower bound off the sharp zone at " +
                           where(s, d, a);
                }
            }
        }
    }

    // The paraboloid kappa beats the sphere kappa pointwise where both apply.
    for (int d = 4; d <= 12; ++d)
        for (const Rational& a : interior_grid(rat(d, 2), rat(d), 16)) {
            const Rational kp = parab_kappa({Surface::paraboloid, d, a}).kappa;
            const Rational ks = sphere_kappa({Surface::sphere, d, a}).kappa;
            if (!(kp < ks))
                return "paraboloid kappa " + kp.str() + " does not beat sphere kappa " +
                       ks.str() + " at d=" + std::to_string(d) + " alpha=" + a.str();
        }

    // The report helper must certify the same sharp window.
    for (int d = 3; d <= 12; ++d) {
        const CorollaryReport cr = corollary_check(d);
        if (!cr.equal || cr.values.empty())
            return "corollary_check(" + std::to_string(d) + ") does not certify equality";
        if (cr.values.front().first != rat(d - 1))
            return "corollary_check(" + std::to_string(d) + ") grid does not start at d-1";
        for (const auto& [a, v] : cr.values)
            if (v != rat(d - 1) * a / rat(d))
                return "corollary_check(" + std::to_string(d) + ") value off at alpha=" + a.str();
    }
    return "";
}

std::string check_falconer() {
    for (int d = 3; d <= 12; ++d) {
        Rational expect;
        if (d == 3) expect = rat(7, 4);
        else if (d == 4) expect = rat(13, 6);
        else if (d == 5) expect = rat(8, 3);
        else if (d % 2 == 0) expect = rat(d, 2) + rat(1, d + 2);
        else expect = rat(d, 2) + rat(1, d + 3);
        const Rational th = falconer_threshold(d);
        if (th != expect)
            return "threshold at d=" + std::to_string(d) + " is " + th.str() + ", expected " +
                   expect.str();

        // Defining property: beta balances d - alpha exactly at the root and
        // sits strictly below just under it.
        const Rational beta_at = parab_kappa({Surface::paraboloid, d, th}).beta_upper;
        if (beta_at != rat(d) - th)
            return "beta does not balance d - alpha at the threshold for d=" + std::to_string(d);
        const Rational am = th - rat(1, 16);
        const Rational beta_m = parab_kappa({Surface::paraboloid, d, am}).beta_upper;
        if (!(beta_m < rat(d) - am))
            return "threshold is not minimal at d=" + std::to_string(d);
    }
    return "";
}

// ============================================================================
// Check 4: selector kappas balance exactly, perturbed kappas do not.
//
// Same grids as the unit sweep but extended to d <= 12: every valid m, alpha
// on the step-1/8 grid of the selector's window.  The sweep sizes are pinned
// so a silent window change cannot shrink the evidence.
// ============================================================================

std::string check_balances() {
    const Rational delta(1, 100);
    int verified = 0, perturbed = 0;
    std::string fail;
    auto sweep = [&](Surface s, int d, int m, const Rational& a) {
        if (!fail.empty()) return;
        const Rational kappa = lemma_kappa_selector(s, m, a, d);
        const BalanceReport rep = verify_kappa_balances(s, d, m, a, kappa);
        if (rep.target != a - rat(d)) {
            fail = "balance target is not alpha - d at " + where(s, d, a);
            return;
        }
        for (const BalanceRow& row : rep.rows)
            if (row.exponent > rep.target) {
                fail = "piece " + row.scale + " exceeds the target at " + where(s, d, a);
                return;
            }
        ++verified;
        for (const Rational& k : {kappa + delta, kappa - delta}) {
            if (!(rat(0) < k && k <= rat(1, 2))) continue;
            bool threw = false;
            try {
                verify_kappa_balances(s, d, m, a, k);
            } catch (const BalanceViolation&) {
                threw = true;
            }
            if (!threw) {
                fail = "perturbed kappa " + k.str() + " still balances at " + where(s, d, a) +
                       " m=" + std::to_string(m);
                return;
            }
            ++perturbed;
        }
    };
    for (int d = 4; d <= 12; ++d)
        for (int m = 1; 2 * m < d; ++m)
            for (int k = 4 * d + 1; k < 8 * d; ++k) sweep(Surface::sphere, d, m, rat(k, 8));
    for (int d = 3; d <= 12; ++d)
        for (int m = 1; 2 * m <= d; ++m) {
            const int k_lo = std::max(8 * m, 4 * (d - 1));
            for (int k = k_lo; k < 8 * d; ++k) sweep(Surface::paraboloid, d, m, rat(k, 8));
        }
    if (!fail.empty()) return fail;
    if (verified != 2359 || perturbed != 4647)
        return "sweep sizes changed: verified " + std::to_string(verified) + " (expected 2359), "
               "perturbed " + std::to_string(perturbed) + " (expected 4647)";
    return "";
}

// ============================================================================
// Check 5: lattice enumeration against a cube scan and the four-square
// divisor sum r_4(n) = 8 * sum of divisors of n not divisible by 4.
// ============================================================================

std::string check_lattice() {
    for (int dim = 2; dim <= 5; ++dim)
        for (int64_t N = 1; N <= 10; ++N) {
            std::vector<std::vector<int64_t>> brute;
            std::vector<int64_t> v(dim, -N);
            while (true) {
                int64_t n2 = 0;
                for (int64_t c : v) n2 += c * c;
                if (n2 == N * N) brute.push_back(v);
                int i = 0;
                while (i < dim && ++v[i] > N) v[i++] = -N;
                if (i == dim) break;
            }
            const LatticeSphereSet got = enumerate_gamma(N, dim);
            if (got.dim != dim || got.radius_N != N || got.norm_sq != N * N)
                return "lattice set metadata off at dim=" + std::to_string(dim) +
                       " N=" + std::to_string(N);
            std::vector<std::vector<int64_t>> pts = got.points;
            std::sort(pts.begin(), pts.end());
            std::sort(brute.begin(), brute.end());
            if (pts != brute)
                return "enumeration disagrees with the cube scan at dim=" + std::to_string(dim) +
                       " N=" + std::to_string(N) + " (" + std::to_string(pts.size()) + " vs " +
                       std::to_string(brute.size()) + " points)";
        }

    for (int64_t n = 1; n <= 60; ++n) {
        int64_t expect = 0;
        for (int64_t q = 1; q <= n; ++q)
            if (n % q == 0 && q % 4 != 0) expect += q;
        expect *= 8;
        const size_t got = enumerate_norm_sq(n, 4).points.size();
        if (static_cast<int64_t>(got) != expect)
            return "dim-4 count at |v|^2=" + std::to_string(n) + " is " + std::to_string(got) +
                   ", divisor sum gives " + std::to_string(expect);
    }
    if (enumerate_norm_sq(1, 4).points.size() != 8 || enumerate_norm_sq(2, 4).points.size() != 24 ||
        enumerate_norm_sq(3, 4).points.size() != 32)
        return "pinned dim-4 counts (8, 24, 32) do not hold";
    return "";
}

// ============================================================================
// Checks 6-9: the seeded numerical pipelines on the two reference configs
// (paraboloid d=3, m=1, alpha=2 and sphere d=4, m=1, alpha=3, both with the
// selector kappa 1/6).
// ============================================================================

ConstructionParams parab_reference(double R) {
    ConstructionParams p;
    p.surface = Surface::paraboloid;
    p.d = 3;
    p.m = 1;
    p.alpha = rat(2);
    p.kappa = lemma_kappa_selector(Surface::paraboloid, 1, p.alpha, 3);
    p.R = R;
    return p;
}

ConstructionParams sphere_reference(int64_t N) {
    ConstructionParams p;
    p.surface = Surface::sphere;
    p.d = 4;
    p.m = 1;
    p.alpha = rat(3);
    p.kappa = lemma_kappa_selector(Surface::sphere, 1, p.alpha, 4);
    p.R = 2;
    p.R = admissible_R(p, N);
    return p;
}

std::string check_phase() {
    std::vector<ConstructionParams> cfgs;
    for (double R : {0x1p16, 0x1p21, 0x1p26}) cfgs.push_back(parab_reference(R));
    for (int64_t N : {1, 2, 3}) cfgs.push_back(sphere_reference(N));
    for (size_t i = 0; i < cfgs.size(); ++i) {
        const double dev = verify_phase(cfgs[i], 10000, derive_seed(kGateSeed, 60 + i));
        if (!(dev >= 0.0 && dev < 0.01))
            return "phase deviation " + num(dev) + " reaches 1/100 on " +
                   std::string(surface_name(cfgs[i].surface)) + " at R=" + num(cfgs[i].R);
    }
    return "";
}

std::string check_modulus() {
    const double lo = std::cos(0.01) - 0.02;
    const double hi = 1.02;
    struct Job {
        ConstructionParams p;
        int64_t nodes;
    };
    const Job jobs[] = {{parab_reference(0x1p24), 400}, {sphere_reference(2), 600}};
    for (size_t j = 0; j < std::size(jobs); ++j) {
        const uint64_t seed = derive_seed(kGateSeed, 70 + j);
        const ExtensionRun run = make_extension(jobs[j].p, 100000, derive_seed(seed, 1));
        const SlabSet la = build_lambda(jobs[j].p);
        Rng rng(derive_seed(seed, 2));
        const double scale = std::pow(kTwoPi, 0.5 * jobs[j].p.d) / run.omega_meas.value;
        for (int i = 0; i < 1000; ++i) {
            const Vec x = lambda_sample(la, rng);
            const ExtensionSample s =
                extension_value(run, x, jobs[j].nodes, derive_seed(seed, 100 + i));
            const double v = std::abs(s.value) * scale;
            if (!(v >= lo && v <= hi))
                return "normalized modulus " + num(v) + " leaves [" + num(lo) + ", " + num(hi) +
                       "] on " + std::string(surface_name(jobs[j].p.surface)) +
                       " at R=" + num(jobs[j].p.R) + ", sample " + std::to_string(i);
        }
    }
    return "";
}

std::string check_concentration() {
    std::vector<std::vector<ConstructionParams>> grids(2);
    for (double R : {0x1p12, 0x1p14, 0x1p16, 0x1p18}) grids[0].push_back(parab_reference(R));
    for (int64_t N : {1, 2, 3}) grids[1].push_back(sphere_reference(N));
    for (const auto& grid : grids) {
        double c_lo = std::numeric_limits<double>::infinity();
        double c_hi = 0.0;
        for (const ConstructionParams& p : grid) {
            const uint64_t rs = derive_seed(kGateSeed, std::bit_cast<uint64_t>(p.R));
            const FractalMeasure mu = make_measure(p, 100000, derive_seed(rs, 1));
            const OracleResult out = c_alpha_oracle(mu, 6, 2000, derive_seed(rs, 3));
            for (size_t i = 0; i < out.profile.scales.size(); ++i) {
                const double q = out.profile.oracle_values[i] / out.profile.formula_values[i];
                if (!(std::isfinite(q) && q >= 0.125 && q <= 8.0))
                    return "oracle/formula ratio " + num(q) + " leaves [1/8, 8] on " +
                           std::string(surface_name(p.surface)) + " at R=" + num(p.R) +
                           ", r=" + num(out.profile.scales[i]);
            }
            const double c = out.value * std::pow(p.R, p.d - p.alpha.to_double());
            c_lo = std::min(c_lo, c);
            c_hi = std::max(c_hi, c);
        }
        if (!(c_hi <= 16.0 * c_lo))
            return "c_alpha * R^(d-alpha) drifts by " + num(c_hi / c_lo) +
                   " (> 16) across the " +
                   std::string(surface_name(grid.front().surface)) + " R grid";
    }
    return "";
}

// Raises the R cap for the duration of the slope run and restores the prior
// environment on every exit path.
struct MaxRGuard {
    std::string saved;
    bool had = false;
    explicit MaxRGuard(const char* v) {
        if (const char* old = std::getenv("FDECAY_MAX_R")) {
            saved = old;
            had = true;
        }
        setenv("FDECAY_MAX_R", v, 1);
    }
    ~MaxRGuard() {
        if (had)
            setenv("FDECAY_MAX_R", saved.c_str(), 1);
        else
            unsetenv("FDECAY_MAX_R");
    }
};

std::string check_slope() {
    const MaxRGuard guard("2e9");
    std::vector<double> Rs;
    for (int e = 20; e <= 30; e += 2) Rs.push_back(std::pow(2.0, e));
    const ScalingTable tab = scaling_run(parab_reference(Rs.front()), Rs, ScalingBudgets{},
                                         kGateSeed);
    double q_lo = std::numeric_limits<double>::infinity();
    double q_hi = 0.0;
    for (const ScalingRow& row : tab.rows) {
        if (!row.ok) return "row R=" + num(row.R) + " failed: " + row.failure;
        const double q = row.ratio / row.closed_form;
        if (!(std::isfinite(q) && q > 0.0))
            return "degenerate closed-form quotient at R=" + num(row.R);
        q_lo = std::min(q_lo, q);
        q_hi = std::max(q_hi, q);
    }
    if (!(q_hi <= 4.0 * q_lo))
        return "measured/closed-form quotient drifts by " + num(q_hi / q_lo) +
               " (> 4) across the R grid";
    const FitResult fit = fit_exponent(tab);
    if (fit.target_slope != rat(-2, 3))
        return "target slope is " + fit.target_slope.str() + ", expected -2/3";
    if (!(std::abs(fit.slope + 2.0 / 3.0) <= 0.15))
        return "fitted slope " + num(fit.slope) + " leaves -2/3 +- 0.15";
    return "";
}

struct Criterion {
    const char* name;
    double limit_seconds;
    std::string (*body)();
};

}  // namespace

int run_acceptance_checks(std::ostream& out) {
    const Criterion list[] = {
        {"exact-tables", 1.0, check_tables},
        {"strict-improvement", 1.0, check_improvement},
        {"falconer-thresholds", 1.0, check_falconer},
        {"lemma-balances", 5.0, check_balances},
        {"lattice-enumeration", 10.0, check_lattice},
        {"phase-window", 30.0, check_phase},
        {"extension-modulus", 60.0, check_modulus},
        {"concentration-oracle", 120.0, check_concentration},
        {"scaling-slope", 300.0, check_slope},
    };
    const size_t total = std::size(list);
    int failed = 0;
    for (size_t i = 0; i < total; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        try {
            detail = list[i].body();
        } catch (const std::exception& e) {
            detail = std::string("unexpected exception: ") + e.what();
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (detail.empty() && dt > list[i].limit_seconds) {
            std::ostringstream os;
            os << "runtime " << std::fixed << std::setprecision(2) << dt << "s exceeds the "
               << std::setprecision(0) << list[i].limit_seconds << "s limit";
            detail = os.str();
        }
        std::ostringstream line;
        line << (detail.empty() ? "[PASS] " : "[FAIL] ") << (i + 1) << "/" << total << " "
             << std::left << std::setw(21) << list[i].name << std::right << std::fixed
             << std::setprecision(2) << std::setw(7) << dt << "s  (limit "
             << std::setprecision(0) << list[i].limit_seconds << "s)";
        out << line.str() << "\n";
        if (!detail.empty()) {
            out << "       " << detail << "\n";
            ++failed;
        }
    }
    if (failed == 0)
        out << "acceptance: all " << total << " checks passed\n";
    else
        out << "acceptance: " << failed << " of " << total << " checks failed\n";
    return failed;
}

}  // namespace fdecay
