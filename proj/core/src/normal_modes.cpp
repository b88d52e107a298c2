#include "cavnet/normal_modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cavnet/errors.hpp"

namespace cavnet {

namespace {

constexpr double kFingerprintTolerance = 1e-8;

void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw InvalidParameter(std::string(name) + " must be a finite rate >= 0");
    }
}

std::array<NormalMode, 5> sorted_by_frequency(std::array<NormalMode, 5> modes) {
    std::stable_sort(modes.begin(), modes.end(), [](const NormalMode& a, const NormalMode& b) {
        return a.frequency < b.frequency;
    });
    return modes;
}

}  // namespace

double ModeAlgebra::delta() const { return std::sqrt(delta2); }

ModeAlgebra mode_algebra(double g1, double g2, double v1, double v2) {
    require_non_negative(g1, "g1");
    require_non_negative(g2, "g2");
    require_non_negative(v1, "v1");
    require_non_negative(v2, "v2");

    ModeAlgebra m;
    m.g_bar2 = 0.5 * (g1 * g1 + g2 * g2);
    m.g_tilde2 = 0.5 * (g1 * g1 - g2 * g2);
    m.v_bar2 = 0.5 * (v1 * v1 + v2 * v2);
    m.v_tilde2 = 0.5 * (v1 * v1 - v2 * v2);

    const double s = m.g_tilde2 + m.v_tilde2;
    const double p = v1 * v2;
    m.delta2 = std::hypot(s, p);

    // delta^2 +- s, evaluated without cancellation.
    const double v_plus2 = s >= 0.0 ? m.delta2 + s : (m.delta2 > 0.0 ? p * p / (m.delta2 - s) : 0.0);
    const double v_minus2 = s <= 0.0 ? m.delta2 - s : p * p / (m.delta2 + s);
    m.V_plus = std::sqrt(v_plus2);
    m.V_minus = std::sqrt(v_minus2);

    const double z2 = m.g_bar2 + m.v_bar2 + m.delta2;
    m.Z = std::sqrt(z2);
    // G^2 Z^2 is the determinant-like invariant g1^2 g2^2 + g1^2 v2^2 + g2^2 v1^2.
    const double gz2 = g1 * g1 * g2 * g2 + g1 * g1 * v2 * v2 + g2 * g2 * v1 * v1;
    m.G = z2 > 0.0 ? std::sqrt(gz2 / z2) : 0.0;

    m.N2 = m.g_tilde2 - m.v_bar2 + m.delta2;
    m.W2 = -m.g_tilde2 + m.v_bar2 + m.delta2;
    return m;
}

std::string to_string(ModeLabel label) {
    switch (label) {
    case ModeLabel::BrightMinus: return "BrightMinus";
    case ModeLabel::FiberDarkMinus: return "FiberDarkMinus";
    case ModeLabel::CavityDark: return "CavityDark";
    case ModeLabel::FiberDarkPlus: return "FiberDarkPlus";
    case ModeLabel::BrightPlus: return "BrightPlus";
    case ModeLabel::Unlabeled: return "Unlabeled";
    }
    return "Unlabeled";
}

const NormalMode& NormalModeSet::operator[](ModeLabel label) const {
    for (const auto& mode : modes) {
        if (mode.label == label) return mode;
    }
    throw std::out_of_range("no normal mode labeled " + to_string(label));
}

CouplingMatrix coupling_matrix(double g1, double g2, double v1, double v2) {
    using namespace basis;
    CouplingMatrix h = CouplingMatrix::Zero();
    h(kSigma1, kCavity1) = h(kCavity1, kSigma1) = g1;
    h(kSigma2, kCavity2) = h(kCavity2, kSigma2) = g2;
    h(kCavity1, kFiber) = h(kFiber, kCavity1) = v1;
    h(kCavity2, kFiber) = h(kFiber, kCavity2) = v2;
    return h;
}

double fiber_weight_fraction(const ModeVector& vector) {
    return std::norm(vector(basis::kFiber)) / vector.squaredNorm();
}

double cavity_weight_fraction(const ModeVector& vector) {
    return (std::norm(vector(basis::kCavity1)) + std::norm(vector(basis::kCavity2))) /
           vector.squaredNorm();
}

ModeVector canonical_phase(ModeVector vector) {
    const double norm = vector.norm();
    if (norm == 0.0) return vector;
    vector /= norm;
    for (Eigen::Index i = 0; i < vector.size(); ++i) {
        const double magnitude = std::abs(vector(i));
        if (magnitude > 1e-12) {
            vector *= std::conj(vector(i)) / magnitude;
            vector(i) = magnitude;
            break;
        }
    }
    return vector;
}

NormalModeSet analytic_modes(double g1, double g2, double v1, double v2) {
    if (!(g1 > 0.0 && g2 > 0.0)) {
        throw InvalidParameter(
            "closed-form modes need both ensembles coupled (g1, g2 > 0); use numeric_modes");
    }
    if (!(v1 > 0.0 && v2 > 0.0)) {
        throw InvalidParameter("closed-form modes need v1, v2 > 0");
    }
    const ModeAlgebra m = mode_algebra(g1, g2, v1, v2);
    const double G = m.G;
    const double Z = m.Z;
    const double d = m.delta();
    const double vp = m.V_plus;
    const double vm = m.V_minus;

    auto make = [](double s1, double s2, double c1, double c2, double b) {
        ModeVector v;
        v << s1, s2, c1, c2, b;
        return v;
    };

    std::array<NormalMode, 5> modes;
    modes[0] = {ModeLabel::CavityDark, 0.0,
                make(g2 * v1, g1 * v2, 0.0, 0.0, -g1 * g2) / (G * Z)};
    std::size_t k = 1;
    for (int sign : {+1, -1}) {
        modes[k++] = {sign > 0 ? ModeLabel::FiberDarkPlus : ModeLabel::FiberDarkMinus, sign * G,
                      make(g1 * vm, -g2 * vp, sign * G * vm, -sign * G * vp,
                           -(m.N2 / vp) * v2) /
                          (2.0 * d * G)};
        modes[k++] = {sign > 0 ? ModeLabel::BrightPlus : ModeLabel::BrightMinus, sign * Z,
                      make(g1 * vp, g2 * vm, sign * Z * vp, sign * Z * vm, (m.W2 / vm) * v2) /
                          (2.0 * d * Z)};
    }

    NormalModeSet set;
    for (auto& mode : modes) {
        set.stated_norm_defect =
            std::max(set.stated_norm_defect, std::abs(mode.vector.norm() - 1.0));
        const bool dark = mode.label == ModeLabel::CavityDark;
        mode.vector = canonical_phase(mode.vector);
        if (dark) {
            // Exact zeros survive normalization; keep them bit-exact.
            mode.vector(basis::kCavity1) = 0.0;
            mode.vector(basis::kCavity2) = 0.0;
        }
    }
    set.modes = sorted_by_frequency(modes);
    return set;
}

NormalModeSet numeric_modes(double g1, double g2, double v1, double v2) {
    require_non_negative(g1, "g1");
    require_non_negative(g2, "g2");
    require_non_negative(v1, "v1");
    require_non_negative(v2, "v2");

    Eigen::SelfAdjointEigenSolver<CouplingMatrix> solver(coupling_matrix(g1, g2, v1, v2));
    NormalModeSet set;
    for (int i = 0; i < 5; ++i) {
        set.modes[i].frequency = solver.eigenvalues()(i);
        set.modes[i].vector = canonical_phase(solver.eigenvectors().col(i).cast<complex>());
    }

    if (!(g1 > 0.0 && g2 > 0.0 && v1 > 0.0 && v2 > 0.0)) {
        return set;  // degenerate coupling: frequency order only
    }

    std::array<int, 5> order{};
    std::iota(order.begin(), order.end(), 0);
    auto cavity_weight = [&](int i) { return cavity_weight_fraction(set.modes[i].vector); };
    auto fiber_weight = [&](int i) { return fiber_weight_fraction(set.modes[i].vector); };

    const int dark = *std::min_element(order.begin(), order.end(), [&](int a, int b) {
        return cavity_weight(a) < cavity_weight(b);
    });
    if (cavity_weight(dark) < kFingerprintTolerance) {
        std::vector<int> rest;
        for (int i : order) {
            if (i != dark) rest.push_back(i);
        }
        std::sort(rest.begin(), rest.end(),
                  [&](int a, int b) { return fiber_weight(a) < fiber_weight(b); });
        set.modes[dark].label = ModeLabel::CavityDark;
        for (std::size_t j = 0; j < rest.size(); ++j) {
            const bool fiber_dark = j < 2;
            const bool plus = set.modes[rest[j]].frequency > set.modes[dark].frequency;
            set.modes[rest[j]].label =
                fiber_dark ? (plus ? ModeLabel::FiberDarkPlus : ModeLabel::FiberDarkMinus)
                           : (plus ? ModeLabel::BrightPlus : ModeLabel::BrightMinus);
        }
    }

    // Fallback, and sanity of the fingerprint result: ascending frequency
    // must read -Z, -G, 0, +G, +Z.
    static constexpr ModeLabel kByOrder[] = {ModeLabel::BrightMinus, ModeLabel::FiberDarkMinus,
                                             ModeLabel::CavityDark, ModeLabel::FiberDarkPlus,
                                             ModeLabel::BrightPlus};
    bool consistent = true;
    for (int i = 0; i < 5; ++i) consistent = consistent && set.modes[i].label == kByOrder[i];
    if (!consistent) {
        for (int i = 0; i < 5; ++i) set.modes[i].label = kByOrder[i];
    }
    return set;
}

std::array<DampedMode, 5> complex_mode_frequencies(const ModelRates& rates,
                                                   const AtomEnsembleParams& atoms) {
    rates.validate();
    using CMatrix = Eigen::Matrix<complex, 5, 5>;
    CMatrix drift = coupling_matrix(atoms.g_eff_1, atoms.g_eff_2, rates.v1, rates.v2).cast<complex>();
    const complex i(0.0, 1.0);
    const double damping[5] = {rates.gamma_perp(), rates.gamma_perp(), rates.kappa_1(),
                               rates.kappa_2(), rates.kappa_b()};
    for (int k = 0; k < 5; ++k) drift(k, k) -= i * damping[k];

    Eigen::ComplexEigenSolver<CMatrix> solver(drift);
    std::array<DampedMode, 5> out;
    for (int k = 0; k < 5; ++k) {
        const complex lambda = solver.eigenvalues()(k);
        out[k].value = complex(lambda.real(), -lambda.imag());
        out[k].vector = canonical_phase(solver.eigenvectors().col(k));
    }
    std::sort(out.begin(), out.end(), [](const DampedMode& a, const DampedMode& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

}  // namespace cavnet
