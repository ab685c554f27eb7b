// Small geometric/stochastic toolkit used by the set constructions and the
// quadrature code: k-ball volumes, a self-contained deterministic RNG, and
// uniform samplers for balls and spheres.
//
// The RNG wraps mt19937_64 but derives every variate from its raw 64-bit
// output through fixed arithmetic (no std::*_distribution, whose streams are
// implementation-defined), so seeded runs reproduce bit-for-bit under any
// standard library.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace fdecay {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

using Vec = std::vector<double>;

inline double dot(const Vec& u, const Vec& v) {
    double s = 0;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

inline double norm2(const Vec& u) { return dot(u, u); }
inline double norm(const Vec& u) { return std::sqrt(norm2(u)); }

// Volume of the unit k-ball, v_k = pi^{k/2} / Gamma(k/2 + 1), via the
// recursion v_k = v_{k-2} * 2*pi / k.
inline double unit_ball_volume(int k) {
    if (k < 0) throw std::domain_error("unit_ball_volume: negative dimension");
    double even = 1.0, odd = 2.0;  // v_0, v_1
    if (k == 0) return even;
    if (k == 1) return odd;
    double v = k % 2 == 0 ? even : odd;
    for (int j = k % 2 == 0 ? 2 : 3; j <= k; j += 2) v *= kTwoPi / j;
    return v;
}

inline double ball_volume(int k, double r) { return unit_ball_volume(k) * std::pow(r, k); }

// Stable per-task seed derivation (splitmix64 over the pair).
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Uniform integer in [0, n).
    int64_t below(int64_t n) {
        auto k = static_cast<int64_t>(u01() * static_cast<double>(n));
        return k >= n ? n - 1 : k;
    }

    // Standard normal via Box-Muller on our own u01 stream.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0;
        while (u1 == 0) u1 = u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = kTwoPi * u01();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Uniform on the unit sphere S^{k-1} in R^k.
    Vec on_sphere(int k) {
        if (k < 1) throw std::domain_error("on_sphere: dimension < 1");
        if (k == 1) return {u01() < 0.5 ? -1.0 : 1.0};
        Vec u(k);
        double n2 = 0;
        do {
            for (int i = 0; i < k; ++i) u[i] = gaussian();
            n2 = norm2(u);
        } while (n2 == 0);
        const double inv = 1.0 / std::sqrt(n2);
        for (double& x : u) x *= inv;
        return u;
    }

    // Uniform in the ball B^k(0, r).
    Vec in_ball(int k, double r) {
        if (k == 0) return {};
        if (k == 1) return {uniform(-r, r)};
        Vec u = on_sphere(k);
        const double rad = r * std::pow(u01(), 1.0 / k);
        for (double& x : u) x *= rad;
        return u;
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

// Orthonormal basis of the hyperplane orthogonal to the unit vector w in R^k,
// as the last k-1 columns of the Householder reflection exchanging e_1 and w.
inline std::vector<Vec> tangent_basis(const Vec& w) {
    const int k = static_cast<int>(w.size());
    if (k < 2) return {};
    Vec u = w;
    u[0] -= 1.0;  // reflector through (w - e_1); degenerate when w == e_1
    const double un2 = norm2(u);
    std::vector<Vec> basis;
    basis.reserve(k - 1);
    for (int j = 1; j < k; ++j) {
        Vec col(k, 0.0);
        col[j] = 1.0;
        if (un2 > 1e-30) {
            const double f = 2.0 * u[j] / un2;
            for (int i = 0; i < k; ++i) col[i] -= f * u[i];
        }
        basis.push_back(std::move(col));
    }
    return basis;
}

}  // namespace fdecay
