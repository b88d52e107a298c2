#ifndef CAVNET_ENSEMBLE_ORACLE_HPP
#define CAVNET_ENSEMBLE_ORACLE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cavnet/normal_modes.hpp"
#include "cavnet/rates.hpp"

namespace cavnet {

/// A finite ensemble of atoms with couplings g_j^2 = g0^2 w(theta_j),
/// w(theta) = A + (1 - A) cos^2(theta).
struct EnsembleSample {
    std::vector<double> thetas;  // [0, pi)
    double g0 = 1.0;             // peak single-atom coupling, 2*pi*MHz
    double geometric_factor = 0.17;

    std::size_t size() const { return thetas.size(); }
    double weight(std::size_t j) const;

    /// Reproducible for a given seed.
    static EnsembleSample uniform_random(std::size_t m, double g0, std::uint64_t seed,
                                         double geometric_factor = 0.17);
    void validate() const;
};

/// Mean value with the standard error of the mean of its real and imaginary parts.
struct MonteCarloEstimate {
    complex value{};
    complex std_error{};
    std::size_t samples = 0;
};

/// Steady-state saturable response of one two-level atom driven by a cavity
/// field a: g^2 (gamma_perp - i Delta_a) / (gamma_perp^2 + Delta_a^2 + 4 (gamma_perp/gamma_par) g^2 |a|^2).
complex two_level_response(double g, double gamma_perp, double gamma_par, double delta_a,
                           complex a);

/// Plain sum of two_level_response over the sample at cavity amplitude a.
complex ensemble_response_sum(const EnsembleSample& sample, double gamma_perp, double gamma_par,
                              double delta_a, complex a);

/// The same sum expressed in the normalized units of bracket_term: the
/// field is a = X sqrt(n_sat) with n_sat = gamma_perp gamma_par / (4 g0^2),
/// the result is divided by kappa and rescaled from M sampled atoms to an
/// ensemble with effective atom number n_eff.
MonteCarloEstimate discrete_susceptibility_sum(const EnsembleSample& sample, complex x,
                                               double delta_a_norm, const ModelRates& rates,
                                               double kappa, double n_eff);

/// Periodic trapezoid average over theta of the bracket integrand.
complex bracket_by_quadrature(complex x, double delta_a_norm, double coop,
                              double geometric_factor, std::size_t nodes = 4096);

/// |(1/pi) int_0^pi dtheta / (a + b cos^2 theta) - 1/sqrt(a (a + b))|
double average_identity_check(double a, double b, std::size_t nodes = 4096);

}  // namespace cavnet

#endif  // CAVNET_ENSEMBLE_ORACLE_HPP
