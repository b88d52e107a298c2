#ifndef CAVNET_LINEAR_RESPONSE_HPP
#define CAVNET_LINEAR_RESPONSE_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "cavnet/normal_modes.hpp"
#include "cavnet/rates.hpp"

namespace cavnet {

/// Port A drives cavity 1 through mirror 1; port C drives the link fiber
/// through the beamsplitter.
enum class InputPort { A, C };

/// A: reflection at mirror 1, B: transmission through mirror 4,
/// C: beamsplitter tap of the link fiber.
enum class OutputPort { A, B, C };

/// Oscillator detunings, omega_oscillator - omega_probe, in 2*pi*MHz.
struct Detunings {
    double cavity1 = 0.0;
    double cavity2 = 0.0;
    double fiber = 0.0;
    double atom = 0.0;

    /// All oscillators on a common resonance, probed at detuning delta.
    static Detunings common(double delta) { return {delta, delta, delta, delta}; }
};

struct DriveSpec {
    InputPort port = InputPort::A;
    double amplitude = 1.0;  // E_1 or E_b, 2*pi*MHz, real and positive
    Detunings detuning;

    static DriveSpec at(InputPort port, double amplitude, double delta) {
        return {port, amplitude, Detunings::common(delta)};
    }
};

/// Complex drive terms (E1, E2, Eb) as they enter the equations of motion.
struct DriveTerms {
    complex e1{};
    complex e2{};
    complex eb{};

    static DriveTerms from(const DriveSpec& drive);
};

struct SteadyStateAmplitudes {
    complex sigma1{};
    complex sigma2{};
    complex a1{};
    complex a2{};
    complex b{};

    ModeVector as_vector() const;
    static SteadyStateAmplitudes from_vector(const ModeVector& v);
};

/// Direct solve of the 5x5 linear system. Throws SingularSystem.
SteadyStateAmplitudes steady_state(const ModelRates& rates, const AtomEnsembleParams& atoms,
                                   const DriveSpec& drive);

/// Same solution from the nested closed forms for <a2> = A/B, <a1>, <b>
/// and the adiabatically eliminated atomic polarizations. Throws
/// SingularSystem naming the vanishing factor.
SteadyStateAmplitudes steady_state_analytic(const ModelRates& rates,
                                            const AtomEnsembleParams& atoms,
                                            const DriveTerms& drive, const Detunings& detuning);

SteadyStateAmplitudes steady_state_analytic(const ModelRates& rates,
                                            const AtomEnsembleParams& atoms,
                                            const DriveSpec& drive);

/// How the beamsplitter port is detected when it is also the driven port.
enum class PortDetection {
    /// x_out = x_in + sqrt(2 kappa) x: the output shares the input channel.
    SameChannel,
    /// Only the field emitted by the oscillator, |sqrt(2 kappa) x|^2.
    EmittedOnly,
};

/// Output photon flux |<x_out>|^2 in rate units.
double output_flux(const SteadyStateAmplitudes& state, const DriveSpec& drive,
                   const ModelRates& rates, OutputPort port,
                   PortDetection detection = PortDetection::SameChannel);

/// |<x_in>|^2 for the driven port.
double input_flux(const DriveSpec& drive, const ModelRates& rates);

struct SpectrumRow {
    double delta = 0.0;
    double flux_a = 0.0;
    double flux_b = 0.0;
    double flux_c = 0.0;
    SteadyStateAmplitudes amplitudes;
};

struct Spectrum {
    std::vector<SpectrumRow> rows;

    std::vector<double> deltas() const;
    std::vector<double> flux(OutputPort port) const;
};

struct SweepOptions {
    InputPort input = InputPort::A;
    double delta_min = -30.0;
    double delta_max = 30.0;
    std::size_t points = 600;
    double amplitude = 1.0;
    /// Detection at C when C is also the input: the fiber-coupler output arm
    /// is distinct from the input arm, so no input interference by default.
    PortDetection c_detection = PortDetection::EmittedOnly;
    unsigned threads = 1;
};

/// Uniform detuning grid, rows in grid order. Throws SingularSystem with
/// the offending detuning attached.
Spectrum sweep_spectrum(const ModelRates& rates, const AtomEnsembleParams& atoms,
                        const SweepOptions& options);

/// Divides every flux by the largest flux of the empty-cavity (g = 0)
/// response over the same grid and ports.
Spectrum normalize_to_empty_peak(Spectrum spectrum, const ModelRates& rates,
                                 const SweepOptions& options);

}  // namespace cavnet

#endif  // CAVNET_LINEAR_RESPONSE_HPP
