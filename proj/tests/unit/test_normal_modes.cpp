#include "doctest.h"

#include <cmath>
#include <random>

#include "cavnet/errors.hpp"
#include "cavnet/normal_modes.hpp"

using namespace cavnet;

namespace {

// Distance between two unit vectors after removing their relative phase.
double phase_aligned_distance(const ModeVector& a, const ModeVector& b) {
    const complex overlap = a.dot(b);  // conj(a) . b
    const complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : complex(1.0);
    return (a * phase - b).norm();
}

}  // namespace

TEST_SUITE("normal_modes") {

TEST_CASE("symmetric algebra") {
    const ModeAlgebra m = mode_algebra(5.0, 5.0, 9.0, 9.0);
    CHECK(m.G == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(m.Z == doctest::Approx(std::sqrt(25.0 + 81.0 + 81.0)).epsilon(1e-15));
    CHECK(m.V_plus == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(m.V_minus == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(m.delta() == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(m.N2 == doctest::Approx(0.0).scale(1.0));
    CHECK(m.W2 == doctest::Approx(162.0));
}

TEST_CASE("equal atomic couplings give G = g") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 20.0);
    for (int n = 0; n < 200; ++n) {
        const double g = u(rng);
        CHECK(mode_algebra(g, g, u(rng), u(rng)).G == doctest::Approx(g).epsilon(1e-13));
    }
}

TEST_CASE("Z^2 + G^2 = 2 (g_bar^2 + v_bar^2)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 20.0);
    for (int n = 0; n < 1000; ++n) {
        const ModeAlgebra m = mode_algebra(u(rng), u(rng), u(rng), u(rng));
        CHECK(m.Z * m.Z + m.G * m.G == doctest::Approx(2.0 * (m.g_bar2 + m.v_bar2)).epsilon(1e-12));
    }
}

TEST_CASE("frozen eigenfrequencies") {
    const NormalModeSet s = analytic_modes(3.0, 7.0, 4.0, 11.0);
    const double expected[] = {-13.502115913214077, -3.5627048525146288, 0.0,
                               3.5627048525146288, 13.502115913214077};
    for (int i = 0; i < 5; ++i) {
        CHECK(s.modes[i].frequency == doctest::Approx(expected[i]).epsilon(1e-13).scale(1.0));
    }
    CHECK(s[ModeLabel::CavityDark].frequency == 0.0);
    CHECK(s[ModeLabel::BrightPlus].frequency == doctest::Approx(13.502115913214077).epsilon(1e-13));
}

TEST_CASE("symmetric frequencies are 0, +-G, +-Z") {
    const NormalModeSet s = analytic_modes(5.0, 5.0, 9.0, 9.0);
    CHECK(s[ModeLabel::BrightMinus].frequency == doctest::Approx(-13.674794331177344));
    CHECK(s[ModeLabel::FiberDarkMinus].frequency == doctest::Approx(-5.0));
    CHECK(s[ModeLabel::FiberDarkPlus].frequency == doctest::Approx(5.0));
    CHECK(s[ModeLabel::BrightPlus].frequency == doctest::Approx(13.674794331177344));
}

TEST_CASE("symmetric bright mode is proportional to (g, g, zeta, zeta, 2v)") {
    const double g = 5.0, v = 9.0;
    const NormalModeSet s = analytic_modes(g, g, v, v);
    const double zeta = s[ModeLabel::BrightPlus].frequency;
    ModeVector expect;
    expect << g, g, zeta, zeta, 2.0 * v;
    expect.normalize();
    CHECK(phase_aligned_distance(expect, s[ModeLabel::BrightPlus].vector) < 1e-12);
}

TEST_CASE("sign convention: leading component real and positive") {
    const NormalModeSet s = analytic_modes(3.0, 7.0, 4.0, 11.0);
    for (const NormalMode& m : s.modes) {
        int lead = 0;
        while (lead < 5 && std::abs(m.vector[lead]) < 1e-12) ++lead;
        REQUIRE(lead < 5);
        CHECK(m.vector[lead].real() > 0.0);
        CHECK(std::abs(m.vector[lead].imag()) < 1e-14);
    }
    const ModeVector v = canonical_phase(ModeVector::Constant(complex(0.0, -2.0)));
    CHECK(v[0].real() == doctest::Approx(1.0 / std::sqrt(5.0)));
    CHECK(v[0].imag() == 0.0);
}

TEST_CASE("analytic and numeric modes agree over random couplings") {
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> u(0.1, 20.0);
    double worst_freq = 0.0, worst_vec = 0.0, worst_orth = 0.0, worst_dark = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const double g1 = u(rng), g2 = u(rng), v1 = u(rng), v2 = u(rng);
        const NormalModeSet a = analytic_modes(g1, g2, v1, v2);
        const NormalModeSet b = numeric_modes(g1, g2, v1, v2);
        const CouplingMatrix h = coupling_matrix(g1, g2, v1, v2);
        const double scale = h.norm();
        for (int i = 0; i < 5; ++i) {
            worst_freq = std::max(worst_freq,
                                  std::abs(a.modes[i].frequency - b.modes[i].frequency) / scale);
            worst_vec = std::max(worst_vec, phase_aligned_distance(a.modes[i].vector, b.modes[i].vector));
            // Eigenvector equation
            const ModeVector r = h.cast<complex>() * a.modes[i].vector -
                                 a.modes[i].frequency * a.modes[i].vector;
            worst_vec = std::max(worst_vec, r.norm() / scale);
            for (int j = 0; j < 5; ++j) {
                const double target = i == j ? 1.0 : 0.0;
                worst_orth = std::max(worst_orth,
                                      std::abs(a.modes[i].vector.dot(a.modes[j].vector) - target));
            }
        }
        worst_dark = std::max(worst_dark, cavity_weight_fraction(a[ModeLabel::CavityDark].vector));
    }
    CHECK(worst_freq < 1e-10);
    CHECK(worst_vec < 1e-8);
    CHECK(worst_orth < 1e-10);
    CHECK(worst_dark < 1e-24);
}

TEST_CASE("cavity-dark mode is atoms plus fiber only") {
    const NormalModeSet s = analytic_modes(6.0, 7.0, 7.52, 4.64);
    const ModeVector& d = s[ModeLabel::CavityDark].vector;
    CHECK(d[basis::kCavity1] == complex(0.0));
    CHECK(d[basis::kCavity2] == complex(0.0));
    CHECK(fiber_weight_fraction(d) > 0.0);
}

TEST_CASE("fiber-dark modes leave the fiber empty for equal atomic couplings") {
    const NormalModeSet s = analytic_modes(5.0, 5.0, 9.45, 6.23);
    CHECK(fiber_weight_fraction(s[ModeLabel::FiberDarkPlus].vector) < 1e-20);
    CHECK(fiber_weight_fraction(s[ModeLabel::FiberDarkMinus].vector) < 1e-20);
    // Unequal couplings mix a little fiber in.
    const NormalModeSet t = analytic_modes(6.0, 7.0, 7.52, 4.64);
    CHECK(fiber_weight_fraction(t[ModeLabel::FiberDarkPlus].vector) > 1e-3);
}

TEST_CASE("closed forms require nonzero couplings") {
    CHECK_THROWS_AS(analytic_modes(0.0, 5.0, 9.0, 9.0), InvalidParameter);
    CHECK_THROWS_AS(analytic_modes(5.0, 5.0, 0.0, 9.0), InvalidParameter);
    CHECK_NOTHROW(numeric_modes(0.0, 5.0, 9.0, 9.0));
    CHECK_THROWS_AS(mode_algebra(-1.0, 5.0, 9.0, 9.0), InvalidParameter);
}

TEST_CASE("damped modes reduce to the coupling spectrum without damping") {
    ModelRates r;
    r.v1 = 9.0;
    r.v2 = 9.0;
    const auto d = complex_mode_frequencies(r, AtomEnsembleParams::collective(5.0, 5.0));
    const NormalModeSet s = analytic_modes(5.0, 5.0, 9.0, 9.0);
    for (int i = 0; i < 5; ++i) {
        CHECK(d[i].value.real() == doctest::Approx(s.modes[i].frequency).scale(1.0).epsilon(1e-10));
        CHECK(std::abs(d[i].value.imag()) < 1e-10);
    }
    const auto damped = complex_mode_frequencies(preset(PresetName::Fig2).rates,
                                                 preset(PresetName::Fig2).atoms);
    for (const auto& m : damped) CHECK(m.value.imag() >= 0.0);
}

}  // TEST_SUITE
