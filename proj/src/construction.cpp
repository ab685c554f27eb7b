#include "fdecay/construction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fdecay {

namespace {

// Patches and slabs must stay disjoint: lattice spacing has to dominate the
// fine width comfortably.  2c < spacing / width at every scale reduces to
// this single check.
void check_separation(double spacing, double width, const char* what) {
    if (!(spacing > 4 * width))
        throw std::runtime_error(std::string("construction: ") + what +
                                 " lattice too crowded (spacing " + std::to_string(spacing) +
                                 " vs width " + std::to_string(width) + ")");
}

int64_t isqrt_floor(int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

void enumerate_rec(int64_t rem, int coord, int dim, std::vector<int64_t>& cur,
                   std::vector<std::vector<int64_t>>& out) {
    if (out.size() > 4000000)
        throw std::overflow_error(
            "enumerate_norm_sq: too many lattice points to materialize; reduce N or dim");
    if (coord == dim - 1) {
        const int64_t r = isqrt_floor(rem);
        if (r >= 0 && r * r == rem) {
            cur[coord] = r;
            out.push_back(cur);
            if (r != 0) {
                cur[coord] = -r;
                out.push_back(cur);
            }
        }
        return;
    }
    const int64_t top = isqrt_floor(rem);
    for (int64_t v = -top; v <= top; ++v) {
        cur[coord] = v;
        enumerate_rec(rem - v * v, coord + 1, dim, cur, out);
    }
}

}  // namespace

double max_R() {
    if (const char* env = std::getenv("FDECAY_MAX_R")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0) return v;
    }
    return 1e8;
}

void validate_params(const ConstructionParams& p) {
    if (p.surface == Surface::sphere) {
        if (p.d < 4) throw std::domain_error("construction: sphere requires d >= 4");
        if (p.m < 1 || 2 * p.m >= p.d)
            throw std::domain_error("construction: sphere requires 1 <= m < d/2");
    } else {
        if (p.d < 3) throw std::domain_error("construction: paraboloid requires d >= 3");
        if (p.m < 1 || 2 * p.m > p.d)
            throw std::domain_error("construction: paraboloid requires 1 <= m <= d/2");
    }
    if (!(Rational(0) < p.kappa && p.kappa < Rational(1, 2)))
        throw std::domain_error("construction: kappa must lie in (0, 1/2)");
    if (!(p.c > 0) || p.c > 1e-3)
        throw std::domain_error("construction: c must lie in (0, 1/1000]");
    if (!(p.R > 1))
        throw std::domain_error("construction: R must exceed 1");
    if (p.R > max_R())
        throw std::overflow_error("construction: R exceeds the configured maximum");
}

double admissible_R(const ConstructionParams& p, int64_t N) {
    if (N < 1) throw std::domain_error("admissible_R: N must be positive");
    if (p.surface == Surface::paraboloid) {
        if (!(p.R <= max_R()))
            throw std::overflow_error("admissible_R: requested R exceeds the maximum");
        return p.R;
    }
    const double pq = p.kappa.to_double();
    const double R = std::pow(kTwoPi * static_cast<double>(N), 1.0 / pq);
    if (!(R <= max_R()))
        throw std::overflow_error("admissible_R: R = (2 pi N)^(1/kappa) exceeds the maximum");
    return R;
}

LatticeSphereSet enumerate_norm_sq(int64_t nsq, int dim) {
    if (dim < 2) throw std::domain_error("enumerate_norm_sq: dim must be >= 2");
    if (nsq < 1) throw std::domain_error("enumerate_norm_sq: norm must be positive");
    LatticeSphereSet s;
    s.dim = dim;
    s.norm_sq = nsq;
    const int64_t r = isqrt_floor(nsq);
    s.radius_N = r * r == nsq ? r : 0;
    std::vector<int64_t> cur(dim, 0);
    enumerate_rec(nsq, 0, dim, cur, s.points);
    return s;
}

LatticeSphereSet enumerate_gamma(int64_t N, int dim) {
    if (N < 1) throw std::domain_error("enumerate_gamma: N must be positive");
    return enumerate_norm_sq(N * N, dim);
}

Vec PatchSet::patch_center(size_t i) const {
    Vec c(fine_dim);
    if (params.surface == Surface::sphere) {
        const auto& v = gamma.points.at(i);
        for (int j = 0; j < fine_dim; ++j)
            c[j] = static_cast<double>(v[j]) / static_cast<double>(gamma.radius_N);
    } else {
        const auto& v = centers.at(i);
        for (int j = 0; j < fine_dim; ++j) c[j] = center_spacing * static_cast<double>(v[j]);
    }
    return c;
}

PatchSet build_omega(const ConstructionParams& p) {
    validate_params(p);
    PatchSet om;
    om.params = p;
    om.m_block = p.m;
    om.a = p.c / std::sqrt(p.R);
    om.b = p.c / p.R;
    om.r_kappa = std::pow(p.R, p.kappa.to_double());

    if (p.surface == Surface::sphere) {
        om.fine_dim = p.d - p.m;
        // Gamma is nonempty only for R with R^kappa = 2 pi N.
        const double Nf = om.r_kappa / kTwoPi;
        const auto N = static_cast<int64_t>(std::llround(Nf));
        if (N < 1 || std::abs(Nf - static_cast<double>(N)) > 1e-6 * std::max(1.0, Nf))
            throw std::domain_error(
                "build_omega: sphere R must come from admissible_R (R^kappa = 2 pi N)");
        om.r_kappa = kTwoPi * static_cast<double>(N);
        om.gamma = enumerate_gamma(N, om.fine_dim);
        if (om.gamma.points.empty())
            throw std::runtime_error("build_omega: empty construction, no lattice directions");
        // Distinct integer points differ by at least sqrt(2) in norm, so
        // direction separation is sqrt(2)/N against patch width 2b.
        check_separation(std::sqrt(2.0) / static_cast<double>(N), om.b, "direction");
        return om;
    }

    om.fine_dim = p.d - p.m - 1;  // >= 1 whenever m <= d/2 and d >= 3
    om.center_spacing = kTwoPi / om.r_kappa;
    check_separation(om.center_spacing, om.b, "frequency");
    // Keep lattice points with |center| + b <= 1.
    const double reach = (1.0 - om.b) / om.center_spacing;
    const auto L = static_cast<int64_t>(std::floor(reach));
    const double reach2 = reach * reach;
    if (std::pow(2.0 * static_cast<double>(L) + 1.0, om.fine_dim) > 4e6)
        throw std::overflow_error("build_omega: too many patches to materialize; reduce R or d");
    std::vector<int64_t> cur(om.fine_dim, 0);
    // Recursive sweep over the index cube, pruning by partial norm.
    struct Sweep {
        int dim;
        int64_t L;
        double reach2;
        std::vector<std::vector<int64_t>>& out;
        void go(std::vector<int64_t>& cur, int coord, double partial2) {
            if (coord == dim) {
                out.push_back(cur);
                return;
            }
            for (int64_t v = -L; v <= L; ++v) {
                const double t2 = partial2 + static_cast<double>(v) * static_cast<double>(v);
                if (t2 > reach2) continue;
                cur[coord] = v;
                go(cur, coord + 1, t2);
            }
        }
    } sweep{om.fine_dim, L, reach2, om.centers};
    sweep.go(cur, 0, 0.0);
    if (om.centers.empty())
        throw std::runtime_error("build_omega: empty construction, no patch survives the clip");
    return om;
}

bool omega_contains(const PatchSet& om, const Vec& xi) {
    const auto& p = om.params;
    if (p.surface == Surface::sphere) {
        if (xi.size() != static_cast<size_t>(p.d)) return false;
        if (std::abs(norm(xi) - 1.0) > 1e-9) return false;
        double m2 = 0;
        for (int i = 0; i < p.m; ++i) m2 += xi[i] * xi[i];
        if (!(m2 < om.a * om.a)) return false;
        // Nearest admissible direction: round xi_tail * N and check the norm.
        const auto N = om.gamma.radius_N;
        double off2 = 0;
        int64_t vnorm2 = 0;
        for (int j = 0; j < om.fine_dim; ++j) {
            const double t = xi[p.m + j] * static_cast<double>(N);
            const auto v = static_cast<int64_t>(std::llround(t));
            vnorm2 += v * v;
            const double diff = xi[p.m + j] - static_cast<double>(v) / static_cast<double>(N);
            off2 += diff * diff;
        }
        return vnorm2 == N * N && off2 < om.b * om.b;
    }
    if (xi.size() != static_cast<size_t>(p.d - 1)) return false;
    if (!(norm2(xi) <= 1.0)) return false;
    double m2 = 0;
    for (int i = 0; i < p.m; ++i) m2 += xi[i] * xi[i];
    if (!(m2 < om.a * om.a)) return false;
    double off2 = 0;
    for (int j = 0; j < om.fine_dim; ++j) {
        const double t = xi[p.m + j] / om.center_spacing;
        const double v = std::round(t);
        const double diff = xi[p.m + j] - om.center_spacing * v;
        off2 += diff * diff;
    }
    return off2 < om.b * om.b;
}

SlabSet build_lambda(const ConstructionParams& p) {
    validate_params(p);
    SlabSet la;
    la.params = p;
    la.m_block = p.m;
    la.a = p.c / std::sqrt(p.R);
    la.b = p.c / p.R;
    const double rk = std::pow(p.R, p.kappa.to_double());
    la.s_mid = rk / p.R;  // R^{kappa - 1}
    check_separation(la.s_mid, la.b, "slab");
    if (p.surface == Surface::sphere) {
        la.mid_dim = p.d - p.m;
        la.has_last = false;
    } else {
        la.mid_dim = p.d - p.m - 1;
        la.has_last = true;
        la.s_last = rk * rk / (kTwoPi * p.R);  // R^{2 kappa - 1} / (2 pi)
        check_separation(la.s_last, la.b, "last-axis slab");
        la.L_last = static_cast<int64_t>(std::floor((1.0 + la.b) / la.s_last));
    }
    la.L_mid = static_cast<int64_t>(std::floor((1.0 + la.b) / la.s_mid));
    return la;
}

bool lambda_contains(const SlabSet& la, const Vec& x) {
    const auto& p = la.params;
    if (x.size() != static_cast<size_t>(p.d)) return false;
    if (!(norm2(x) <= 1.0)) return false;
    double m2 = 0;
    for (int i = 0; i < p.m; ++i) m2 += x[i] * x[i];
    if (!(m2 < la.a * la.a)) return false;
    double off2 = 0;
    for (int j = 0; j < la.mid_dim; ++j) {
        const double t = x[p.m + j] / la.s_mid;
        const double diff = x[p.m + j] - la.s_mid * std::round(t);
        off2 += diff * diff;
    }
    if (!(off2 < la.b * la.b)) return false;
    if (la.has_last) {
        const double t = x[p.d - 1] / la.s_last;
        const double diff = x[p.d - 1] - la.s_last * std::round(t);
        if (!(std::abs(diff) < la.b)) return false;
    }
    return true;
}

namespace {

// One proposal draw for a sphere patch around direction w (unit vector in the
// fine block): xi' uniform in B^m(0,a), tangent offset t uniform in
// B^{fine-1}(0, w_max), u = (w + t)/sqrt(1+|t|^2), xi = (xi', rho u) with
// rho = sqrt(1 - |xi'|^2).  Weight = indicator * (1-|xi'|^2)^{(fine-2)/2}
// * (1+|t|^2)^{-fine/2}; the proposal volume is v_m a^m * v_{fine-1} w_max^{fine-1}.
struct SpherePatchChart {
    const PatchSet& om;
    Vec w;                    // patch direction
    std::vector<Vec> basis;   // tangent frame
    double w_max;

    explicit SpherePatchChart(const PatchSet& om_, size_t patch) : om(om_) {
        w = om.patch_center(patch);
        basis = tangent_basis(w);
        w_max = 2.0 * om.b;
    }

    int fine() const { return om.fine_dim; }

    double proposal_volume() const {
        return ball_volume(om.m_block, om.a) * ball_volume(fine() - 1, w_max);
    }

    // Returns the weight; fills xi (dimension d).
    double draw(Rng& rng, Vec& xi) const {
        const int m = om.m_block, k = fine();
        const Vec xm = rng.in_ball(m, om.a);
        const Vec tloc = rng.in_ball(k - 1, w_max);
        Vec t(k, 0.0);
        for (int j = 0; j < k - 1; ++j)
            for (int i = 0; i < k; ++i) t[i] += tloc[j] * basis[j][i];
        const double t2 = norm2(t);
        const double scale = 1.0 / std::sqrt(1.0 + t2);
        const double xm2 = norm2(xm);
        const double rho = std::sqrt(std::max(0.0, 1.0 - xm2));
        xi.assign(om.params.d, 0.0);
        for (int i = 0; i < m; ++i) xi[i] = xm[i];
        double off2 = 0;
        for (int i = 0; i < k; ++i) {
            const double u = (w[i] + t[i]) * scale;
            xi[m + i] = rho * u;
            const double diff = xi[m + i] - w[i];
            off2 += diff * diff;
        }
        if (!(off2 < om.b * om.b)) return 0.0;
        return std::pow(1.0 - xm2, 0.5 * (k - 2)) * std::pow(1.0 + t2, -0.5 * k);
    }
};

}  // namespace

PatchNodes patch_nodes(const PatchSet& om, size_t patch_index, int64_t n, uint64_t seed) {
    PatchNodes nodes;
    nodes.points.reserve(n);
    nodes.weights.reserve(n);
    Rng rng(derive_seed(seed, patch_index));
    if (om.params.surface == Surface::sphere) {
        SpherePatchChart chart(om, patch_index);
        nodes.proposal_volume = chart.proposal_volume();
        Vec xi;
        for (int64_t i = 0; i < n; ++i) {
            const double wgt = chart.draw(rng, xi);
            nodes.points.push_back(xi);
            nodes.weights.push_back(wgt);
        }
        return nodes;
    }
    // Paraboloid: the patch is an exact product of balls; the proposal is the
    // patch box itself and the weight is the unit-ball indicator.
    const Vec ctr = om.patch_center(patch_index);
    const int m = om.m_block, k = om.fine_dim;
    nodes.proposal_volume = ball_volume(m, om.a) * ball_volume(k, om.b);
    for (int64_t i = 0; i < n; ++i) {
        const Vec xm = rng.in_ball(m, om.a);
        const Vec off = rng.in_ball(k, om.b);
        Vec xi(om.params.d - 1);
        for (int j = 0; j < m; ++j) xi[j] = xm[j];
        for (int j = 0; j < k; ++j) xi[m + j] = ctr[j] + off[j];
        nodes.points.push_back(std::move(xi));
        nodes.weights.push_back(norm2(nodes.points.back()) <= 1.0 ? 1.0 : 0.0);
    }
    return nodes;
}

namespace {

MeasureEstimate mc_mean_to_measure(const std::vector<double>& wts, double proposal_volume,
                                   double multiplier) {
    const auto n = static_cast<double>(wts.size());
    double s = 0, s2 = 0;
    for (double w : wts) {
        s += w;
        s2 += w * w;
    }
    const double mean = s / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    MeasureEstimate e;
    e.value = multiplier * proposal_volume * mean;
    e.stderr_ = multiplier * proposal_volume * std::sqrt(var / n);
    e.exact = false;
    return e;
}

void enforce_precision(const MeasureEstimate& e, const char* what) {
    if (!(e.value > 0) || e.stderr_ > 0.02 * e.value)
        throw std::runtime_error(std::string(what) +
                                 ": MC standard error exceeds 2% of the estimate; "
                                 "increase n_samples");
}

}  // namespace

MeasureEstimate omega_measure(const PatchSet& om, int64_t n_samples, uint64_t seed) {
    if (n_samples < 16) throw std::domain_error("omega_measure: n_samples too small");
    const auto& p = om.params;
    if (p.surface == Surface::sphere) {
        // All patches are congruent (rotate the fine block), so one chart
        // estimate times the patch count suffices.
        PatchNodes nodes = patch_nodes(om, 0, n_samples, seed);
        MeasureEstimate e = mc_mean_to_measure(nodes.weights, nodes.proposal_volume,
                                               static_cast<double>(om.patch_count()));
        enforce_precision(e, "omega_measure");
        return e;
    }
    // Paraboloid: patches whose bounding sphere stays inside the unit ball
    // contribute the exact product volume; boundary patches get per-patch MC.
    const double patch_vol = ball_volume(p.m, om.a) * ball_volume(om.fine_dim, om.b);
    double exact_part = 0, mc_part = 0, mc_var = 0;
    int64_t boundary = 0;
    const double safe = std::sqrt(std::max(0.0, 1.0 - om.a * om.a)) - om.b;
    for (size_t i = 0; i < om.patch_count(); ++i) {
        const double cn = norm(om.patch_center(i));
        if (cn <= safe) {
            exact_part += patch_vol;
            continue;
        }
        ++boundary;
        PatchNodes nodes = patch_nodes(om, i, std::max<int64_t>(64, n_samples / 8), seed);
        MeasureEstimate e = mc_mean_to_measure(nodes.weights, nodes.proposal_volume, 1.0);
        mc_part += e.value;
        mc_var += e.stderr_ * e.stderr_;
    }
    MeasureEstimate e;
    e.value = exact_part + mc_part;
    e.stderr_ = std::sqrt(mc_var);
    e.exact = boundary == 0;
    if (!e.exact) enforce_precision(e, "omega_measure");
    return e;
}

MeasureEstimate lambda_volume(const SlabSet& la, int64_t n_samples, uint64_t seed) {
    if (n_samples < 16) throw std::domain_error("lambda_volume: n_samples too small");
    const auto& p = la.params;
    // Unclipped mass: the m-ball, times (count x cell volume) for the mid
    // lattice over its bounding box, times the last-axis intervals.
    const double m_vol = ball_volume(p.m, la.a);
    const double mid_cells = std::pow(2.0 * static_cast<double>(la.L_mid) + 1.0, la.mid_dim);
    const double mid_cell_vol = ball_volume(la.mid_dim, la.b);
    double unclipped = m_vol * mid_cells * mid_cell_vol;
    double last_cells = 1.0;
    if (la.has_last) {
        last_cells = 2.0 * static_cast<double>(la.L_last) + 1.0;
        unclipped *= last_cells * 2.0 * la.b;
    }
    if (!(unclipped > 0)) return {0.0, 0.0, true};

    // Clip factor: sample uniformly from the unclipped union (cells are
    // congruent and disjoint) and accept on |x| <= 1.
    Rng rng(seed);
    int64_t hit = 0;
    for (int64_t s = 0; s < n_samples; ++s) {
        Vec x(p.d, 0.0);
        const Vec xm = rng.in_ball(p.m, la.a);
        for (int i = 0; i < p.m; ++i) x[i] = xm[i];
        const Vec off = rng.in_ball(la.mid_dim, la.b);
        for (int j = 0; j < la.mid_dim; ++j) {
            const auto cell = rng.below(2 * la.L_mid + 1) - la.L_mid;
            x[p.m + j] = la.s_mid * static_cast<double>(cell) + off[j];
        }
        if (la.has_last) {
            const auto cell = rng.below(2 * la.L_last + 1) - la.L_last;
            x[p.d - 1] = la.s_last * static_cast<double>(cell) + rng.uniform(-la.b, la.b);
        }
        if (norm2(x) <= 1.0) ++hit;
    }
    const double n = static_cast<double>(n_samples);
    const double frac = static_cast<double>(hit) / n;
    MeasureEstimate e;
    e.value = unclipped * frac;
    e.stderr_ = unclipped * std::sqrt(std::max(0.0, frac * (1.0 - frac)) / n);
    e.exact = false;
    enforce_precision(e, "lambda_volume");
    return e;
}

Vec omega_sample(const PatchSet& om, Rng& rng) {
    const auto& p = om.params;
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        const auto idx = static_cast<size_t>(rng.below(static_cast<int64_t>(om.patch_count())));
        if (p.surface == Surface::sphere) {
            SpherePatchChart chart(om, idx);
            Vec xi;
            // Accept proportionally to the chart weight (bounded by 1).
            const double wgt = chart.draw(rng, xi);
            if (wgt > 0 && rng.u01() < wgt) return xi;
            continue;
        }
        const Vec ctr = om.patch_center(idx);
        const Vec xm = rng.in_ball(p.m, om.a);
        const Vec off = rng.in_ball(om.fine_dim, om.b);
        Vec xi(p.d - 1);
        for (int j = 0; j < p.m; ++j) xi[j] = xm[j];
        for (int j = 0; j < om.fine_dim; ++j) xi[p.m + j] = ctr[j] + off[j];
        if (norm2(xi) <= 1.0) return xi;
    }
    throw std::runtime_error("omega_sample: rejection sampling failed to produce a member");
}

Vec lambda_sample(const SlabSet& la, Rng& rng) {
    const auto& p = la.params;
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        Vec x(p.d, 0.0);
        const Vec xm = rng.in_ball(p.m, la.a);
        for (int i = 0; i < p.m; ++i) x[i] = xm[i];
        const Vec off = rng.in_ball(la.mid_dim, la.b);
        for (int j = 0; j < la.mid_dim; ++j) {
            const auto cell = rng.below(2 * la.L_mid + 1) - la.L_mid;
            x[p.m + j] = la.s_mid * static_cast<double>(cell) + off[j];
        }
        if (la.has_last) {
            const auto cell = rng.below(2 * la.L_last + 1) - la.L_last;
            x[p.d - 1] = la.s_last * static_cast<double>(cell) + rng.uniform(-la.b, la.b);
        }
        if (norm2(x) <= 1.0) return x;
    }
    throw std::runtime_error("lambda_sample: rejection sampling failed to produce a member");
}

}  // namespace fdecay
