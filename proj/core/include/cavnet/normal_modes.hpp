#ifndef CAVNET_NORMAL_MODES_HPP
#define CAVNET_NORMAL_MODES_HPP

#include <array>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "cavnet/rates.hpp"

namespace cavnet {

using complex = std::complex<double>;

/// Single-excitation amplitudes ordered (sigma1, sigma2, a1, a2, b).
using ModeVector = Eigen::Matrix<complex, 5, 1>;
using CouplingMatrix = Eigen::Matrix<double, 5, 5>;

namespace basis {
inline constexpr int kSigma1 = 0;
inline constexpr int kSigma2 = 1;
inline constexpr int kCavity1 = 2;
inline constexpr int kCavity2 = 3;
inline constexpr int kFiber = 4;
}  // namespace basis

/// Auxiliary combinations entering the closed-form diagonalization.
///
/// N and W only ever appear squared and N^2 is negative whenever g1 < g2
/// with enough fiber coupling, so both are stored as signed squares.
struct ModeAlgebra {
    double g_bar2 = 0.0;
    double g_tilde2 = 0.0;
    double v_bar2 = 0.0;
    double v_tilde2 = 0.0;
    double delta2 = 0.0;  // delta^2 = sqrt((g~^2 + v~^2)^2 + v1^2 v2^2)
    double G = 0.0;
    double Z = 0.0;
    double N2 = 0.0;
    double W2 = 0.0;
    double V_plus = 0.0;
    double V_minus = 0.0;

    double delta() const;
};

ModeAlgebra mode_algebra(double g1, double g2, double v1, double v2);

enum class ModeLabel {
    BrightMinus,
    FiberDarkMinus,
    CavityDark,
    FiberDarkPlus,
    BrightPlus,
    Unlabeled,
};

std::string to_string(ModeLabel label);

struct NormalMode {
    ModeLabel label = ModeLabel::Unlabeled;
    double frequency = 0.0;  // relative to the common resonance, 2*pi*MHz
    ModeVector vector = ModeVector::Zero();
};

/// Five modes sorted by ascending frequency.
struct NormalModeSet {
    std::array<NormalMode, 5> modes;
    /// Largest deviation from unit norm of the closed-form vectors before
    /// renormalization (zero for the numeric path).
    double stated_norm_defect = 0.0;

    /// Throws std::out_of_range if no mode carries the label.
    const NormalMode& operator[](ModeLabel label) const;
};

CouplingMatrix coupling_matrix(double g1, double g2, double v1, double v2);

/// Closed-form modes; requires g1, g2 > 0 and v1, v2 > 0.
NormalModeSet analytic_modes(double g1, double g2, double v1, double v2);

/// Eigendecomposition of the real-symmetric coupling matrix.
NormalModeSet numeric_modes(double g1, double g2, double v1, double v2);

/// Fiber weight |b|^2 relative to the total weight of the vector.
double fiber_weight_fraction(const ModeVector& vector);

/// Photon weight |a1|^2 + |a2|^2 relative to the total weight.
double cavity_weight_fraction(const ModeVector& vector);

/// Fixes the global phase so the first non-negligible component (sigma1
/// first) is real and positive, then normalizes.
ModeVector canonical_phase(ModeVector vector);

struct DampedMode {
    complex value;  // real: frequency, imag: amplitude half-linewidth (>= 0)
    ModeVector vector;
};

/// Eigenvalues of the damped single-excitation dynamics at zero detuning,
/// sorted by real part.
std::array<DampedMode, 5> complex_mode_frequencies(const ModelRates& rates,
                                                   const AtomEnsembleParams& atoms);

}  // namespace cavnet

#endif  // CAVNET_NORMAL_MODES_HPP
