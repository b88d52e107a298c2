#ifndef CAVNET_RATES_HPP
#define CAVNET_RATES_HPP

#include <array>
#include <string>
#include <string_view>

namespace cavnet {

/// Physical description of the three-cavity fiber network.
///
/// Mirror indices follow the chain order: mirror 1 is the input coupler of
/// cavity 1 (port A), mirrors 2 and 3 couple cavities 1 and 2 to the link
/// fiber, mirror 4 is the output coupler of cavity 2 (port B).
struct NetworkGeometry {
    double cavity1_length = 0.92;  // m
    double cavity2_length = 1.38;  // m
    double fiber_length = 1.40;    // m
    std::array<double, 4> reflectance{0.85, 0.57, 0.72, 0.85};
    double loss1 = 0.0;       // single-pass intensity loss, cavity 1
    double loss2 = 0.0;       // single-pass intensity loss, cavity 2
    double loss_fiber = 0.0;  // single-pass intensity loss, link fiber
    double bs_tap = 0.01;     // beamsplitter outcoupling fraction
    double fiber_index = 1.467;
    double wavelength = 852.3e-9;  // m, Cs D2

    /// Speed of light inside the fiber.
    double fiber_light_speed() const;

    /// Throws InvalidGeometry naming the first offending field.
    void validate() const;
};

/// Model-level rates in units of 2*pi*MHz.
struct ModelRates {
    double kappa_1l = 0.0;
    double kappa_1r = 0.0;
    double kappa_2l = 0.0;
    double kappa_2r = 0.0;
    double kappa_1loss = 0.0;
    double kappa_2loss = 0.0;
    double kappa_b_bs = 0.0;
    double kappa_b_loss = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double gamma_par = 0.0;  // free-space population decay
    double gamma_las = 0.0;  // probe laser linewidth (HWHM)

    // Total amplitude damping seen by each oscillator, laser dephasing included.
    double kappa_1() const { return kappa_1l + kappa_1loss + gamma_las; }
    double kappa_2() const { return kappa_2r + kappa_2loss + gamma_las; }
    double kappa_b() const { return kappa_b_bs + kappa_b_loss + gamma_las; }
    double gamma_perp() const { return gamma_par / 2.0 + gamma_las; }

    /// Throws InvalidParameter if any rate is negative or non-finite.
    void validate() const;

    bool operator==(const ModelRates&) const = default;
};

/// Collective and single-atom coupling data for both ensembles.
///
/// Zero means "not set" for the optional single-atom quantities (g0, N_eff,
/// n_sat); the collective couplings g_eff drive the linear model.
struct AtomEnsembleParams {
    double g_eff_1 = 0.0;
    double g_eff_2 = 0.0;
    double g0_1 = 0.0;
    double g0_2 = 0.0;
    double n_eff_1 = 0.0;
    double n_eff_2 = 0.0;
    double n_sat_1 = 0.0;
    double n_sat_2 = 0.0;

    static AtomEnsembleParams collective(double g1, double g2);

    /// Fills g0 from n_sat = gamma_perp * gamma_par / (4 g0^2) and sets
    /// g_eff = g0 * sqrt(N_eff). Requires n_sat and N_eff to be set.
    AtomEnsembleParams with_couplings_from_saturation(double gamma_perp,
                                                      double gamma_par) const;

    /// Checks non-negativity and, where both sides are populated, the
    /// g_eff = g0 sqrt(N_eff) and n_sat = gamma_perp gamma_par / (4 g0^2)
    /// relations to 1e-12 relative.
    void validate(double gamma_perp, double gamma_par) const;

    bool operator==(const AtomEnsembleParams&) const = default;
};

ModelRates derive_rates(const NetworkGeometry& geometry, double gamma_par,
                        double gamma_las);

ModelRates apply_v_scaling(ModelRates rates, double factor);

/// Single-pass loss fraction alpha that yields the given loss rate
/// (2*pi*MHz) for a segment of the given length.
double single_pass_loss_for_rate(double loss_rate, double length,
                                 double fiber_index);

/// Fiber-mode free spectral range in model units (angular, pi c / L_f).
double fiber_free_spectral_range(const NetworkGeometry& geometry);

enum class PresetName { Fig2, Fig3 };

struct Preset {
    PresetName name;
    NetworkGeometry geometry;
    ModelRates rates;           // tabulated, not re-derived
    AtomEnsembleParams atoms;
    double fitted_v_scaling;    // coupling scale used for the fitted curves
};

Preset preset(PresetName name);

/// Accepts "fig2" / "fig3" (case-insensitive); throws InvalidParameter.
Preset preset(std::string_view name);

PresetName parse_preset_name(std::string_view name);
std::string to_string(PresetName name);

}  // namespace cavnet

#endif  // CAVNET_RATES_HPP
