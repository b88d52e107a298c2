#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "cavnet/errors.hpp"
#include "cavnet/rates.hpp"
#include "cavnet/units.hpp"

using namespace cavnet;

namespace {

// Values from an independent evaluation of the mirror / coupling formulas
// (double precision, c = c0 / 1.467, rates divided by 2*pi*1e6).
constexpr double kFig2Kappa1l = 1.3257271825922865;
constexpr double kFig2Kappa1r = 3.8004179234312216;
constexpr double kFig2Kappa2l = 1.6497938272259567;
constexpr double kFig2Kappa2r = 0.88381812172819119;
constexpr double kFig2V1 = 9.3963031824825425;
constexpr double kFig2V2 = 6.1909340792766132;
constexpr double kFig2KappaBs = 0.11674364914624023;
constexpr double kFig2FiberFsr = 72.984822767552842;

NetworkGeometry lossless_fig2() {
    NetworkGeometry g;
    g.loss1 = g.loss2 = g.loss_fiber = 0.0;
    return g;
}

}  // namespace

TEST_SUITE("rates") {

TEST_CASE("fig2 geometry gives the independently evaluated rates") {
    const ModelRates r = derive_rates(lossless_fig2(), 5.2, 0.36);
    CHECK(r.kappa_1l == doctest::Approx(kFig2Kappa1l).epsilon(1e-14));
    CHECK(r.kappa_1r == doctest::Approx(kFig2Kappa1r).epsilon(1e-14));
    CHECK(r.kappa_2l == doctest::Approx(kFig2Kappa2l).epsilon(1e-14));
    CHECK(r.kappa_2r == doctest::Approx(kFig2Kappa2r).epsilon(1e-14));
    CHECK(r.v1 == doctest::Approx(kFig2V1).epsilon(1e-14));
    CHECK(r.v2 == doctest::Approx(kFig2V2).epsilon(1e-14));
    CHECK(r.kappa_b_bs == doctest::Approx(kFig2KappaBs).epsilon(1e-14));
    CHECK(fiber_free_spectral_range(lossless_fig2()) == doctest::Approx(kFig2FiberFsr).epsilon(1e-14));
}

TEST_CASE("zero single-pass losses give zero loss rates") {
    const ModelRates r = derive_rates(lossless_fig2(), 5.2, 0.36);
    CHECK(r.kappa_1loss == 0.0);
    CHECK(r.kappa_2loss == 0.0);
    CHECK(r.kappa_b_loss == 0.0);
    CHECK(r.gamma_par == 5.2);
    CHECK(r.gamma_las == 0.36);
}

TEST_CASE("preset loss fractions reproduce the tabulated loss rates") {
    for (PresetName name : {PresetName::Fig2, PresetName::Fig3}) {
        const Preset p = preset(name);
        const ModelRates r = derive_rates(p.geometry, 5.2, 0.36);
        CHECK(r.kappa_1loss == doctest::Approx(p.rates.kappa_1loss).epsilon(1e-12));
        CHECK(r.kappa_2loss == doctest::Approx(p.rates.kappa_2loss).epsilon(1e-12));
        CHECK(r.kappa_b_loss == doctest::Approx(p.rates.kappa_b_loss).epsilon(1e-12));
    }
}

TEST_CASE("fig3 geometry reproduces its table within 2%") {
    const Preset p = preset(PresetName::Fig3);
    const ModelRates d = derive_rates(p.geometry, 5.2, 0.36);
    const ModelRates& t = p.rates;
    for (auto [a, b] : {std::pair{d.kappa_1l, t.kappa_1l}, {d.kappa_1r, t.kappa_1r},
                        {d.kappa_2l, t.kappa_2l}, {d.kappa_2r, t.kappa_2r},
                        {d.kappa_b_bs, t.kappa_b_bs}, {d.v1, t.v1}, {d.v2, t.v2}}) {
        CHECK(std::abs(a - b) / b < 0.02);
    }
}

TEST_CASE("presets carry the tabulated values verbatim") {
    const Preset f2 = preset("FIG2");
    CHECK(f2.rates.kappa_1r == 3.82);
    CHECK(f2.rates.v2 == 6.23);
    CHECK(f2.rates.gamma_par == 5.2);
    CHECK(f2.rates.gamma_las == 0.36);
    CHECK(f2.atoms.g_eff_1 == 5.0);
    CHECK(f2.atoms.g_eff_2 == 5.0);

    const Preset f3 = preset(PresetName::Fig3);
    CHECK(f3.rates.v1 == 7.52);
    CHECK(f3.rates.kappa_b_bs == 0.091);
    CHECK(f3.atoms.g_eff_1 == 6.0);
    CHECK(f3.atoms.g_eff_2 == 7.0);
    CHECK(f3.atoms.n_sat_1 == 40.0);
    CHECK(f3.atoms.n_eff_1 == 370.0);
    CHECK(f3.atoms.n_sat_2 == 20.0);
    CHECK(f3.atoms.n_eff_2 == 250.0);

    CHECK_THROWS_AS(preset("fig9"), InvalidParameter);
    CHECK(to_string(parse_preset_name("Fig3")) == "fig3");
}

TEST_CASE("coupling scaling touches only v") {
    const ModelRates r = preset(PresetName::Fig2).rates;
    CHECK(apply_v_scaling(r, 1.0) == r);
    const ModelRates s = apply_v_scaling(r, 1.075);
    CHECK(s.v1 == doctest::Approx(10.15875));
    CHECK(apply_v_scaling(preset(PresetName::Fig3).rates, 1.055).v1 == doctest::Approx(7.9336));
    ModelRates back = s;
    back.v1 = r.v1;
    back.v2 = r.v2;
    CHECK(back == r);
    CHECK_THROWS_AS(apply_v_scaling(r, 0.0), InvalidParameter);
}

TEST_CASE("totals equal their defining sums exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int n = 0; n < 1000; ++n) {
        ModelRates r;
        r.kappa_1l = u(rng);
        r.kappa_1loss = u(rng);
        r.kappa_2r = u(rng);
        r.kappa_2loss = u(rng);
        r.kappa_b_bs = u(rng);
        r.kappa_b_loss = u(rng);
        r.gamma_par = u(rng);
        r.gamma_las = u(rng);
        CHECK(r.kappa_1() == r.kappa_1l + r.kappa_1loss + r.gamma_las);
        CHECK(r.kappa_2() == r.kappa_2r + r.kappa_2loss + r.gamma_las);
        CHECK(r.kappa_b() == r.kappa_b_bs + r.kappa_b_loss + r.gamma_las);
        CHECK(r.gamma_perp() == r.gamma_par / 2.0 + r.gamma_las);
    }
}

TEST_CASE("doubling every length halves kappa and v") {
    NetworkGeometry g = preset(PresetName::Fig3).geometry;
    const ModelRates a = derive_rates(g, 5.2, 0.36);
    g.cavity1_length *= 2.0;
    g.cavity2_length *= 2.0;
    g.fiber_length *= 2.0;
    const ModelRates b = derive_rates(g, 5.2, 0.36);
    for (auto [x, y] : {std::pair{a.kappa_1l, b.kappa_1l}, {a.kappa_1r, b.kappa_1r},
                        {a.kappa_2l, b.kappa_2l}, {a.kappa_2r, b.kappa_2r},
                        {a.kappa_b_bs, b.kappa_b_bs}, {a.kappa_1loss, b.kappa_1loss},
                        {a.kappa_2loss, b.kappa_2loss}, {a.kappa_b_loss, b.kappa_b_loss},
                        {a.v1, b.v1}, {a.v2, b.v2}}) {
        CHECK(y == doctest::Approx(0.5 * x).epsilon(1e-14));
    }
}

TEST_CASE("v1 squared equals kappa_1r times the fiber FSR over pi") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> len(0.2, 5.0), refl(0.0, 0.99);
    for (int n = 0; n < 200; ++n) {
        NetworkGeometry g;
        g.cavity1_length = len(rng);
        g.cavity2_length = len(rng);
        g.fiber_length = len(rng);
        g.reflectance = {refl(rng), refl(rng), refl(rng), refl(rng)};
        const ModelRates r = derive_rates(g, 5.2, 0.36);
        const double fsr = fiber_free_spectral_range(g);
        CHECK(r.v1 * r.v1 == doctest::Approx(r.kappa_1r / std::numbers::pi * fsr).epsilon(1e-13));
    }
}

TEST_CASE("raising a reflectance lowers its rates") {
    const NetworkGeometry base = lossless_fig2();
    const ModelRates r0 = derive_rates(base, 5.2, 0.36);
    for (int i = 0; i < 4; ++i) {
        NetworkGeometry g = base;
        g.reflectance[i] += 0.05;
        const ModelRates r = derive_rates(g, 5.2, 0.36);
        switch (i) {
        case 0: CHECK(r.kappa_1l < r0.kappa_1l); break;
        case 1: CHECK(r.kappa_1r < r0.kappa_1r); CHECK(r.v1 < r0.v1); break;
        case 2: CHECK(r.kappa_2l < r0.kappa_2l); CHECK(r.v2 < r0.v2); break;
        case 3: CHECK(r.kappa_2r < r0.kappa_2r); break;
        }
    }
}

TEST_CASE("invalid geometry is rejected") {
    NetworkGeometry g;
    g.reflectance[0] = 1.2;
    CHECK_THROWS_AS(derive_rates(g, 5.2, 0.36), InvalidGeometry);
    g = NetworkGeometry{};
    g.loss_fiber = 1.0;
    CHECK_THROWS_AS(g.validate(), InvalidGeometry);
    g = NetworkGeometry{};
    g.fiber_length = 0.0;
    CHECK_THROWS_AS(g.validate(), InvalidGeometry);
    g = NetworkGeometry{};
    g.fiber_index = 0.9;
    CHECK_THROWS_AS(g.validate(), InvalidGeometry);
    CHECK_THROWS_AS(derive_rates(NetworkGeometry{}, -1.0, 0.0), InvalidParameter);
}

TEST_CASE("ensemble coupling relations") {
    const Preset p = preset(PresetName::Fig3);
    const double gperp = p.rates.gamma_perp();
    const double gpar = p.rates.gamma_par;
    const AtomEnsembleParams a = p.atoms.with_couplings_from_saturation(gperp, gpar);
    CHECK(a.g0_1 * a.g0_1 == doctest::Approx(gperp * gpar / (4.0 * 40.0)));
    CHECK(a.g_eff_1 == doctest::Approx(a.g0_1 * std::sqrt(370.0)));
    CHECK_NOTHROW(a.validate(gperp, gpar));

    AtomEnsembleParams bad = a;
    bad.g_eff_1 *= 1.0 + 1e-9;
    CHECK_THROWS_AS(bad.validate(gperp, gpar), InvalidParameter);
    bad = a;
    bad.n_sat_2 *= 1.0 + 1e-9;
    CHECK_THROWS_AS(bad.validate(gperp, gpar), InvalidParameter);
    bad = a;
    bad.n_eff_1 = -1.0;
    CHECK_THROWS_AS(bad.validate(gperp, gpar), InvalidParameter);
}

TEST_CASE("unit conversion round trip") {
    CHECK(units::to_si(1.0) == doctest::Approx(2.0 * std::numbers::pi * 1e6));
    CHECK(units::to_model(units::to_si(3.7)) == doctest::Approx(3.7).epsilon(1e-15));
    const double loss = single_pass_loss_for_rate(0.24, 1.40, 1.467);
    NetworkGeometry g;
    g.loss_fiber = loss;
    CHECK(derive_rates(g, 0.0, 0.0).kappa_b_loss == doctest::Approx(0.24).epsilon(1e-14));
}

}  // TEST_SUITE
