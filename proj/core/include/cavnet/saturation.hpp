#ifndef CAVNET_SATURATION_HPP
#define CAVNET_SATURATION_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavnet/linear_response.hpp"
#include "cavnet/rates.hpp"

namespace cavnet {

inline constexpr double kDefaultGeometricFactor = 0.17;

/// Dimensionless inputs of the normalized saturation equations.
struct SaturationParams {
    double coop1 = 0.0;
    double coop2 = 0.0;
    double geometric_factor = kDefaultGeometricFactor;
    double n_sat_1 = 1.0;
    double n_sat_2 = 1.0;

    /// C_l = N_l,eff g_l,(0)^2 / (kappa_l gamma_perp). When g0 is unset it
    /// is recovered from n_sat = gamma_perp gamma_par / (4 g0^2).
    static SaturationParams from(const ModelRates& rates, const AtomEnsembleParams& atoms,
                                 double geometric_factor = kDefaultGeometricFactor);

    /// Collective couplings equivalent to the cooperativities in the weak-drive limit.
    AtomEnsembleParams linear_equivalent(const ModelRates& rates) const;

    void validate() const;
};

/// Ensemble-averaged saturable atomic term of one cavity equation:
///
///   (1 - i d) (2C / (1 + A)) |X|^-2 [1 - (1 + d^2) / sqrt((1 + d^2 + A|X|^2)(1 + d^2 + |X|^2))]
///
/// evaluated in a rationalized form that is smooth through X = 0, where it
/// tends to C (1 - i d) / (1 + d^2).
complex bracket_term(complex x, double delta_a_norm, double coop, double geometric_factor);

struct SaturationState {
    complex x1{};
    complex x2{};
    complex xb{};
    double y_b = 0.0;
    bool converged = false;
    int iterations = 0;       // Newton iterations summed over the continuation
    double residual = 0.0;    // max |equation defect|
    bool bistable = false;    // a second, distinct solution was found
};

struct SaturationSolverOptions {
    double tolerance = 1e-10;  // scaled by max(1, y_b)
    int max_newton_iterations = 50;
    int max_continuation_steps = 100000;
    double start_fraction = 1e-3;  // continuation starts at y_b * start_fraction
    double max_growth = 4.0;       // largest multiplicative y_b step
    bool check_bistability = true;
};

/// Normalized steady-state equations at fixed detunings.
class SaturationSystem {
public:
    using State = Eigen::Matrix<complex, 3, 1>;         // (X1, X2, Xb)
    using Jacobian = Eigen::Matrix<double, 6, 6>;       // d(Re,Im residual)/d(Re,Im X)

    SaturationSystem(const ModelRates& rates, const SaturationParams& params,
                     const Detunings& detuning);

    State residual(const State& x, double y_b) const;
    Jacobian jacobian(const State& x) const;

    /// Weak-drive solution (atomic terms at their |X| -> 0 limit).
    State linear_solution(double y_b) const;
    /// Fully saturated (empty-cavity) solution.
    State empty_solution(double y_b) const;

    struct NewtonResult {
        State x;
        bool converged = false;
        int iterations = 0;
        double residual = 0.0;
        double jacobian_determinant = 0.0;
    };

    /// Damped Newton: the step length halves while the residual fails to decrease.
    NewtonResult newton(State guess, double y_b, const SaturationSolverOptions& options) const;

    double tolerance(double y_b, const SaturationSolverOptions& options) const;

private:
    State solve_linear(double y_b, bool with_atoms) const;

    complex self1_, self2_, selfb_;           // 1 + i Delta/kappa
    complex couple1_, couple2_;               // X_b coefficient in cavity equations
    complex fiber1_, fiber2_;                 // X_l coefficient in the fiber equation
    double delta_a_norm_;
    SaturationParams params_;
};

/// Sequential continuation in y_b; each target reuses the previous solution.
class SaturationContinuation {
public:
    SaturationContinuation(SaturationSystem system, SaturationSolverOptions options = {});

    /// Advances (upward or downward) to y_b. Throws ConvergenceError.
    const SaturationState& advance_to(double y_b);
    const SaturationState& state() const { return state_; }

private:
    SaturationSystem system_;
    SaturationSolverOptions options_;
    SaturationState state_;
    double last_determinant_ = 0.0;
    bool fold_seen_ = false;
};

SaturationState solve_saturated_state(double y_b, const ModelRates& rates,
                                      const SaturationParams& params,
                                      const Detunings& detuning = {},
                                      const SaturationSolverOptions& options = {});

/// Physical drive amplitude E_b (2*pi*MHz) for a normalized drive y_b.
double yb_to_drive_amplitude(double y_b, const ModelRates& rates, const SaturationParams& params);

/// Inverts P_in,C = kappa_b^2 / (2 kappa_b,bs) (2 pi hbar c / lambda) sqrt(n1 n2) y_b^2.
double power_to_yb(double watts, const ModelRates& rates, const SaturationParams& params,
                   double wavelength);
double yb_to_power(double y_b, const ModelRates& rates, const SaturationParams& params,
                   double wavelength);

/// Physical amplitudes a1, a2, b for a normalized state (atoms left at zero).
SteadyStateAmplitudes to_amplitudes(const SaturationState& state, const SaturationParams& params);

/// Field emitted at the beamsplitter, 2 kappa_b,bs |b|^2, in rate units.
double emitted_flux_c(const SaturationState& state, const ModelRates& rates,
                      const SaturationParams& params);

struct SaturationCurveOptions {
    double delta_min = -30.0;
    double delta_max = 30.0;
    std::size_t points = 241;
    double wavelength = 852.3e-9;
    SaturationSolverOptions solver;
    unsigned threads = 1;
};

struct SaturatedSpectra {
    std::vector<double> deltas;
    std::vector<double> y_b;                   // per power
    std::vector<std::vector<double>> flux_c;   // [power][delta]
    std::vector<std::vector<bool>> bistable;   // [power][delta]
};

/// C->C spectra for each power (sorted ascending); each detuning is
/// continued across the power list independently.
SaturatedSpectra saturated_spectra(std::span<const double> powers, const ModelRates& rates,
                                   const SaturationParams& params,
                                   const SaturationCurveOptions& options);

struct SaturationPoint {
    double power_w = 0.0;
    double y_b = 0.0;
    double normalized_transmission = 0.0;
    double flux0 = 0.0;
    double bright_avg = 0.0;
    bool converged = false;
    bool bistable = false;
};

/// On-resonance C->C flux over the mean of the two bright-mode peaks.
std::vector<SaturationPoint> saturation_curve(std::span<const double> powers,
                                              const ModelRates& rates,
                                              const SaturationParams& params,
                                              const SaturationCurveOptions& options = {});

}  // namespace cavnet

#endif  // CAVNET_SATURATION_HPP
