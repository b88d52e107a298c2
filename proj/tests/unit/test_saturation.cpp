#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "cavnet/errors.hpp"
#include "cavnet/linear_response.hpp"
#include "cavnet/saturation.hpp"

using namespace cavnet;

namespace {

ModelRates fig3_fitted() {
    const Preset p = preset(PresetName::Fig3);
    return apply_v_scaling(p.rates, p.fitted_v_scaling);
}

SaturationParams fig3_params() {
    const Preset p = preset(PresetName::Fig3);
    return SaturationParams::from(fig3_fitted(), p.atoms);
}

// Direct form of the bracket, fine away from X = 0.
complex bracket_direct(complex x, double d, double coop, double a) {
    const double s = 1.0 + d * d;
    const double x2 = std::norm(x);
    return complex(1.0, -d) * (2.0 * coop / (1.0 + a)) / x2 *
           (1.0 - s / std::sqrt((s + a * x2) * (s + x2)));
}

}  // namespace

TEST_SUITE("saturation") {

TEST_CASE("cooperativities of the fig3 ensembles") {
    const SaturationParams p = fig3_params();
    CHECK(p.coop1 == doctest::Approx(4.81).epsilon(1e-13));
    CHECK(p.coop2 == doctest::Approx(10.906040268456376).epsilon(1e-13));
    CHECK(p.n_sat_1 == 40.0);
    CHECK(p.n_sat_2 == 20.0);
    CHECK(p.geometric_factor == kDefaultGeometricFactor);
}

TEST_CASE("bracket: frozen value, weak-field limit and direct form") {
    CHECK(bracket_term(2.0, 0.0, 1.0, 0.17).real() ==
          doctest::Approx(0.27990052150804401).epsilon(1e-14));
    CHECK(std::abs(bracket_term(2.0, 0.0, 1.0, 0.17).imag()) < 1e-16);

    for (double d : {0.0, 0.7, -2.0}) {
        const complex lim = 3.0 * complex(1.0, -d) / (1.0 + d * d);
        CHECK(std::abs(bracket_term(0.0, d, 3.0, 0.17) - lim) < 1e-15);
        CHECK(std::abs(bracket_term(1e-9, d, 3.0, 0.17) - lim) < 1e-12);
    }

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int n = 0; n < 200; ++n) {
        const complex x(u(rng), u(rng));
        const double d = u(rng);
        const complex a = bracket_term(x, d, 2.0, 0.17);
        const complex b = bracket_direct(x, d, 2.0, 0.17);
        CHECK(std::abs(a - b) < 1e-12 * std::abs(b));
    }
}

TEST_CASE("bracket falls off monotonically with field strength") {
    double prev = bracket_term(0.0, 0.0, 1.0, 0.17).real();
    for (double x = 0.25; x < 200.0; x *= 1.5) {
        const double v = bracket_term(x, 0.0, 1.0, 0.17).real();
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("frozen fig3 states at y_b = 5") {
    const ModelRates r = fig3_fitted();
    const SaturationParams p = fig3_params();

    const SaturationState s0 = solve_saturated_state(5.0, r, p, Detunings::common(0.0));
    REQUIRE(s0.converged);
    CHECK(std::abs(s0.x1 - complex(-0.230859944919261, 0.0)) < 1e-12);
    CHECK(std::abs(s0.x2 - complex(-0.162659267351874, 0.0)) < 1e-12);
    CHECK(std::abs(s0.xb - complex(0.0, -0.487073993779252)) < 1e-12);

    const SaturationState s3 = solve_saturated_state(5.0, r, p, Detunings::common(3.0));
    REQUIRE(s3.converged);
    CHECK(std::abs(s3.x1 - complex(-0.20313412992628, 0.0552267081688817)) < 1e-12);
    CHECK(std::abs(s3.x2 - complex(-0.15060423156722, 0.0166614156535941)) < 1e-12);
    CHECK(std::abs(s3.xb - complex(-0.157860227167164, -0.229747064051665)) < 1e-12);
}

TEST_CASE("weak drive reproduces the linear model") {
    const ModelRates r = fig3_fitted();
    const SaturationParams p = fig3_params();
    const AtomEnsembleParams lin = p.linear_equivalent(r);
    for (double delta : {-7.0, 0.0, 2.5}) {
        const double yb = 1e-6;
        const SaturationState s = solve_saturated_state(yb, r, p, Detunings::common(delta));
        const DriveSpec drive =
            DriveSpec::at(InputPort::C, yb_to_drive_amplitude(yb, r, p), delta);
        const SteadyStateAmplitudes ref = steady_state(r, lin, drive);
        const SteadyStateAmplitudes got = to_amplitudes(s, p);
        CHECK(std::abs(got.a1 - ref.a1) < 1e-9 * std::abs(ref.b));
        CHECK(std::abs(got.a2 - ref.a2) < 1e-9 * std::abs(ref.b));
        CHECK(std::abs(got.b - ref.b) < 1e-9 * std::abs(ref.b));
    }
}

TEST_CASE("strong drive approaches the empty network") {
    const ModelRates r = fig3_fitted();
    const SaturationParams p = fig3_params();
    SaturationSystem sys(r, p, Detunings::common(0.0));
    const double yb = 1e4;
    const SaturationState s = solve_saturated_state(yb, r, p, Detunings::common(0.0));
    REQUIRE(s.converged);
    const auto empty = sys.empty_solution(yb);
    CHECK(std::abs(s.xb - empty[2]) / std::abs(empty[2]) < 1e-2);
}

TEST_CASE("residual vanishes at the solution and the Jacobian is consistent") {
    const ModelRates r = fig3_fitted();
    const SaturationParams p = fig3_params();
    SaturationSystem sys(r, p, Detunings::common(1.3));
    const SaturationState s = solve_saturated_state(20.0, r, p, Detunings::common(1.3));
    REQUIRE(s.converged);
    SaturationSystem::State x;
    x << s.x1, s.x2, s.xb;
    CHECK(sys.residual(x, 20.0).cwiseAbs().maxCoeff() < sys.tolerance(20.0, {}));

    // Finite-difference check of the real 6x6 Jacobian.
    const SaturationSystem::Jacobian j = sys.jacobian(x);
    const double h = 1e-6;
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) {
        SaturationSystem::State xp = x, xm = x;
        const complex step = k < 3 ? complex(h, 0.0) : complex(0.0, h);
        xp[k % 3] += step;
        xm[k % 3] -= step;
        const SaturationSystem::State dr = (sys.residual(xp, 20.0) - sys.residual(xm, 20.0)) / (2.0 * h);
        for (int i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(dr[i].real() - j(i, k)));
            worst = std::max(worst, std::abs(dr[i].imag() - j(i + 3, k)));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("continuation is path independent for a single-valued branch") {
    const ModelRates r = fig3_fitted();
    const SaturationParams p = fig3_params();
    SaturationContinuation up(SaturationSystem(r, p, Detunings::common(8.0)));
    up.advance_to(1.0);
    up.advance_to(50.0);
    const SaturationState a = up.advance_to(10.0);
    const SaturationState b = solve_saturated_state(10.0, r, p, Detunings::common(8.0));
    CHECK(std::abs(a.xb - b.xb) < 1e-9);
}

TEST_CASE("power conversion") {
    const ModelRates r = fig3_fitted();
    const SaturationParams p = fig3_params();
    const double lambda = 852.3e-9;
    CHECK(yb_to_power(power_to_yb(3e-9, r, p, lambda), r, p, lambda) ==
          doctest::Approx(3e-9).epsilon(1e-14));
    // y_b = 1e4 corresponds to about 9 mW for these rates.
    CHECK(yb_to_power(1e4, r, p, lambda) == doctest::Approx(9.06e-3).epsilon(5e-3));
    CHECK_THROWS_AS(power_to_yb(-1.0, r, p, lambda), InvalidParameter);
}

TEST_CASE("transmission curve decreases with power") {
    const ModelRates r = fig3_fitted();
    const SaturationParams p = fig3_params();
    SaturationCurveOptions opt;
    opt.points = 121;
    opt.threads = 4;
    const std::vector<double> powers{0.5e-9, 2e-9, 8e-9, 27e-9};
    const auto curve = saturation_curve(powers, r, p, opt);
    REQUIRE(curve.size() == 4);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve[i].converged);
        CHECK(curve[i].normalized_transmission > 0.0);
        if (i) CHECK(curve[i].normalized_transmission < curve[i - 1].normalized_transmission);
    }
}

TEST_CASE("invalid saturation inputs") {
    SaturationParams p = fig3_params();
    p.geometric_factor = 1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
    p = fig3_params();
    p.coop1 = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameter);
}

}  // TEST_SUITE
