// Extension-module tests.
//
// The phase decomposition is checked where it collapses to closed form
// (the origin; pure lattice points, where every offset residual is an
// exact zero and the integer part is a hand-computable dot product), then
// validated against the naive long-double evaluation on sampled pairs.
// The quadrature is checked where it is exact by construction (x = 0
// reproduces the patch measure bit for bit) and against the window that
// the sub-1/100 phase spread forces on the modulus over the slab set.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "fdecay/extension.hpp"

using namespace fdecay;

namespace {

ConstructionParams parab3(double R) {
    ConstructionParams p;
    p.surface = Surface::paraboloid;
    p.d = 3;
    p.m = 1;
    p.alpha = rat(2);
    p.kappa = rat(1, 6);
    p.R = R;
    return p;
}

ConstructionParams sphere4() {
    ConstructionParams p;
    p.surface = Surface::sphere;
    p.d = 4;
    p.m = 1;
    p.alpha = rat(3);
    p.kappa = rat(1, 6);
    p.R = admissible_R(p, 1);
    return p;
}

bool has_term(const PhaseDecomposition& dec, const std::string& name, double* out = nullptr) {
    for (const auto& t : dec.residual_terms) {
        if (t.first == name) {
            if (out) *out = t.second;
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("phase vanishes identically at the origin") {
    for (const ConstructionParams& p : {parab3(65536.0), sphere4()}) {
        const PatchSet om = build_omega(p);
        Rng rng(3);
        const Vec x(p.d, 0.0);
        for (int i = 0; i < 5; ++i) {
            const Vec xi = omega_sample(om, rng);
            const PhaseDecomposition dec = phase_decompose(p, x, xi);
            CHECK(dec.integer_part == 0);
            for (const auto& t : dec.residual_terms) CHECK(t.second == 0.0);
            CHECK(dec.residual() == 0.0);
            CHECK(dec.deviation() == 0.0);
            CHECK(phase(p, x, xi) == 0.0);
        }
    }
}

TEST_CASE("pure lattice points give an exact integer phase") {
    SUBCASE("paraboloid") {
        const ConstructionParams p = parab3(16777216.0);  // 2^24
        const double rk = std::pow(p.R, p.kappa.to_double());
        const double S = rk / p.R;
        const double P = kTwoPi / rk;
        const double T = rk * rk / (kTwoPi * p.R);
        const Vec x = {0.0, S * 5.0, T * 3.0};
        const Vec xi = {0.0, P * 2.0};
        const PhaseDecomposition dec = phase_decompose(p, x, xi);
        // l.m = 10, k|m|^2 = 3*4 = 12.
        CHECK(dec.integer_part == 22);
        for (const char* name : {"R x'.xi'", "R x_d |xi'|^2", "R^kappa l.v",
                                 "2pi R^(1-kappa) u.m", "R u.v", "2 R^kappa k m.v",
                                 "R^(2kappa)/(2pi) k |v|^2", "4pi^2 R^(1-2kappa) eps |m|^2",
                                 "4pi R^(1-kappa) eps m.v", "R eps |v|^2"}) {
            double val = 1.0;
            CHECK(has_term(dec, name, &val));
            CHECK(val == 0.0);
        }
        // Lattice placement defects: the spacings are rounded doubles, so
        // the integer products sit a hair off 2*pi*Z.
        double pl = 0, pk = 0;
        CHECK(has_term(dec, "lattice roundoff (l.m)", &pl));
        CHECK(has_term(dec, "lattice roundoff (k |m|^2)", &pk));
        CHECK(std::abs(pl) <= 1e-10);
        CHECK(std::abs(pk) <= 1e-10);
        CHECK(dec.deviation() <= 1e-7);
        CHECK_NOTHROW(phase(p, x, xi));
    }
    SUBCASE("sphere") {
        const ConstructionParams p = sphere4();
        const double rk = std::pow(p.R, p.kappa.to_double());
        const double S = rk / p.R;
        const Vec x = {0.0, S * 3.0, S * -2.0, S * 1.0};
        const Vec xi = {0.0, 1.0, 0.0, 0.0};  // lattice direction, N = 1
        const PhaseDecomposition dec = phase_decompose(p, x, xi);
        CHECK(dec.integer_part == 3);
        double val = 1.0;
        CHECK(has_term(dec, "R^kappa l.v", &val));
        CHECK(val == 0.0);
        CHECK(has_term(dec, "R u.v", &val));
        CHECK(val == 0.0);
        CHECK(!has_term(dec, "R x_d |xi'|^2"));
        CHECK(dec.deviation() <= 1e-7);
        CHECK_NOTHROW(phase(p, x, xi));
    }
}

TEST_CASE("decomposed and naive phases agree modulo 2 pi") {
    for (const ConstructionParams& p : {parab3(16777216.0), sphere4()}) {
        const PatchSet om = build_omega(p);
        const SlabSet la = build_lambda(p);
        Rng rng(41);
        for (int i = 0; i < 300; ++i) {
            const Vec x = lambda_sample(la, rng);
            const Vec xi = omega_sample(om, rng);
            CHECK_NOTHROW(phase(p, x, xi));
            const PhaseDecomposition dec = phase_decompose(p, x, xi);
            CHECK(dec.deviation() < 0.01);
            const double diff = std::remainder(phase_naive(p, x, xi) - dec.total(), kTwoPi);
            CHECK(std::abs(diff) <= 1e-7);
        }
        // The identity is not tied to the slab: x anywhere in the ball.
        for (int i = 0; i < 100; ++i) {
            const Vec x = rng.in_ball(p.d, 1.0);
            const Vec xi = omega_sample(om, rng);
            CHECK_NOTHROW(phase(p, x, xi));
        }
    }
}

TEST_CASE("sampled phases concentrate near 2 pi Z") {
    const double dev_p = verify_phase(parab3(16777216.0), 10000, 7);
    CHECK(dev_p < 0.01);
    CHECK(dev_p > 0.0);
    const double dev_s = verify_phase(sphere4(), 10000, 7);
    CHECK(dev_s < 0.01);
    CHECK(dev_s > 0.0);
    CHECK(verify_phase(sphere4(), 10000, 7) == dev_s);
    CHECK_THROWS_AS(verify_phase(parab3(65536.0), 0, 7), std::domain_error);
}

TEST_CASE("inflating the width budget breaks the phase window") {
    const ConstructionParams p = parab3(65536.0);
    PatchSet om = build_omega(p);
    SlabSet la = build_lambda(p);
    // Effective c = 1/10: every offset residual scales by 100 and the
    // deviation escapes past 1/100 within a few samples.
    om.a *= 100.0;
    om.b *= 100.0;
    la.a *= 100.0;
    la.b *= 100.0;
    CHECK_THROWS_AS(verify_phase(om, la, 2000, 5), PhaseEscape);
}

TEST_CASE("extension at the origin reproduces the patch measure") {
    for (const ConstructionParams& p : {parab3(65536.0), sphere4()}) {
        const ExtensionRun run = make_extension(p, 200000, 3);
        const double nc = std::pow(kTwoPi, -0.5 * p.d);
        const ExtensionSample es = extension_value(run, Vec(p.d, 0.0), 200, 9);
        CHECK(es.value.real() == nc * run.omega_meas.value);
        CHECK(es.value.imag() == 0.0);
        CHECK(es.quadrature_stderr == 0.0);
    }
}

TEST_CASE("extension modulus on the slab clears the cosine floor") {
    const double floor_ratio = std::cos(0.01) - 0.02;
    SUBCASE("paraboloid") {
        const ConstructionParams p = parab3(65536.0);
        const ExtensionRun run = make_extension(p, 200000, 3);
        const SlabSet la = build_lambda(p);
        const double nc = std::pow(kTwoPi, -0.5 * p.d);
        const double bound = nc * run.omega_meas.value;
        Rng rng(21);
        for (int i = 0; i < 40; ++i) {
            const Vec x = lambda_sample(la, rng);
            const ExtensionSample es = extension_value(run, x, 400, 33);
            const double ratio = std::abs(es.value) / bound;
            CHECK(ratio >= floor_ratio);
            CHECK(ratio <= 1.0 + 1e-12);
            CHECK(es.quadrature_stderr <= 0.01 * bound + 1e-15);
        }
    }
    SUBCASE("sphere") {
        const ConstructionParams p = sphere4();
        const ExtensionRun run = make_extension(p, 200000, 3);
        const SlabSet la = build_lambda(p);
        const double nc = std::pow(kTwoPi, -0.5 * p.d);
        const double bound = nc * run.omega_meas.value;
        Rng rng(22);
        for (int i = 0; i < 25; ++i) {
            const Vec x = lambda_sample(la, rng);
            const ExtensionSample es = extension_value(run, x, 600, 33);
            const double ratio = std::abs(es.value) / bound;
            CHECK(ratio >= floor_ratio);
            CHECK(ratio <= 1.0 + 1e-12);
        }
    }
    SUBCASE("conjugate symmetry under x -> -x") {
        const ConstructionParams p = parab3(65536.0);
        const ExtensionRun run = make_extension(p, 200000, 3);
        const SlabSet la = build_lambda(p);
        Rng rng(23);
        for (int i = 0; i < 10; ++i) {
            const Vec x = lambda_sample(la, rng);
            Vec xm = x;
            for (double& t : xm) t = -t;
            const ExtensionSample ep = extension_value(run, x, 300, 77);
            const ExtensionSample em = extension_value(run, xm, 300, 77);
            const double scale = std::max(1e-300, std::abs(ep.value.real()));
            CHECK(std::abs(em.value.real() - ep.value.real()) <= 1e-12 * scale);
            CHECK(std::abs(em.value.imag() + ep.value.imag()) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("modulus never exceeds the measure bound off the slab") {
    const ConstructionParams p = parab3(65536.0);
    const ExtensionRun run = make_extension(p, 200000, 3);
    const double bound = std::pow(kTwoPi, -0.5 * p.d) * run.omega_meas.value;
    Rng rng(5);
    for (int i = 0; i < 12; ++i) {
        const Vec x = rng.in_ball(p.d, 1.0);
        const ExtensionSample es = extension_value(run, x, 2000, 17);
        CHECK(std::abs(es.value) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("quadrature is seed-deterministic") {
    const ConstructionParams p = parab3(65536.0);
    const ExtensionRun run = make_extension(p, 100000, 3);
    const SlabSet la = build_lambda(p);
    Rng rng(31);
    const Vec x = lambda_sample(la, rng);
    const ExtensionSample e1 = extension_value(run, x, 200, 9);
    const ExtensionSample e2 = extension_value(run, x, 200, 9);
    CHECK(e1.value.real() == e2.value.real());
    CHECK(e1.value.imag() == e2.value.imag());
    CHECK(e1.quadrature_stderr == e2.quadrature_stderr);
}

TEST_CASE("l1 norm sits in the zero-phase window") {
    const ConstructionParams p = parab3(65536.0);
    const MeasureEstimate l1 = l1_norm_on_mu(p, 150, 256, 13);
    const MeasureEstimate meas = omega_measure(build_omega(p), 200000, 91);
    const MeasureEstimate lam = lambda_volume(build_lambda(p), 200000, 99);
    const double nc = std::pow(kTwoPi, -0.5 * p.d);
    const double ratio = l1.value / (meas.value * lam.value);
    CHECK(ratio > 0.9 * nc);
    CHECK(ratio < 1.1 * nc);
    CHECK(l1.value >= std::cos(0.01) * nc * meas.value * lam.value * 0.93);
    CHECK(l1.stderr_ > 0.0);
    CHECK(l1.stderr_ < 0.1 * l1.value);
    CHECK(!l1.exact);
}

TEST_CASE("degenerate width gives numerically zero l1 mass") {
    ConstructionParams p = parab3(65536.0);
    p.c = 1e-12;
    const MeasureEstimate l1 = l1_norm_on_mu(p, 25, 64, 3);
    CHECK(l1.value >= 0.0);
    CHECK(l1.value <= 1e-20);
}

TEST_CASE("phase and extension input validation") {
    const ConstructionParams p = parab3(65536.0);
    const ExtensionRun run = make_extension(p, 100000, 3);
    CHECK_THROWS_AS(extension_value(run, Vec(2, 0.0), 100, 1), std::domain_error);
    CHECK_THROWS_AS(extension_value(run, Vec{1.2, 0.0, 0.0}, 100, 1), std::domain_error);
    CHECK_THROWS_AS(phase_decompose(p, Vec(3, 0.0), Vec(3, 0.0)), std::domain_error);
    CHECK_THROWS_AS(phase_decompose(p, Vec(2, 0.0), Vec(2, 0.0)), std::domain_error);
    CHECK_THROWS_AS(l1_norm_on_mu(p, 0, 64, 1), std::domain_error);
    ConstructionParams s = sphere4();
    s.R = 65536.0;  // not of the admissible form
    CHECK_THROWS_AS(phase_decompose(s, Vec(4, 0.0), Vec(4, 0.0)), std::domain_error);
}
