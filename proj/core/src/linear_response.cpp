#include "cavnet/linear_response.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include <Eigen/LU>

#include "cavnet/errors.hpp"

namespace cavnet {

namespace {

using CMatrix5 = Eigen::Matrix<complex, 5, 5>;

constexpr complex kI{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_damped(const ModelRates& rates) {
    rates.validate();
    if (!(rates.kappa_1() > 0.0 && rates.kappa_2() > 0.0 && rates.kappa_b() > 0.0)) {
        throw InvalidParameter("total cavity and fiber damping rates must be positive");
    }
}

// Ratio g^2 / K that vanishes for an uncoupled ensemble even when K = 0.
complex coupling_term(double coupling, complex denominator, const char* name, double delta) {
    if (coupling == 0.0) return {0.0, 0.0};
    if (denominator == complex(0.0, 0.0)) {
        throw SingularSystem(std::string("vanishing denominator: ") + name, delta);
    }
    return coupling * coupling / denominator;
}

void require_nonzero(complex value, double scale, const char* name, double delta) {
    if (!(std::abs(value) > 1e-14 * scale)) {
        throw SingularSystem(std::string("vanishing denominator: ") + name, delta);
    }
}

}  // namespace

DriveTerms DriveTerms::from(const DriveSpec& drive) {
    DriveTerms terms;
    if (drive.port == InputPort::A) {
        terms.e1 = drive.amplitude;
    } else {
        terms.eb = drive.amplitude;
    }
    return terms;
}

ModeVector SteadyStateAmplitudes::as_vector() const {
    ModeVector v;
    v << sigma1, sigma2, a1, a2, b;
    return v;
}

SteadyStateAmplitudes SteadyStateAmplitudes::from_vector(const ModeVector& v) {
    return {v(basis::kSigma1), v(basis::kSigma2), v(basis::kCavity1), v(basis::kCavity2),
            v(basis::kFiber)};
}

SteadyStateAmplitudes steady_state(const ModelRates& rates, const AtomEnsembleParams& atoms,
                                   const DriveSpec& drive) {
    require_damped(rates);
    const Detunings& d = drive.detuning;
    CMatrix5 m =
        kI * coupling_matrix(atoms.g_eff_1, atoms.g_eff_2, rates.v1, rates.v2).cast<complex>();
    const complex diagonal[5] = {rates.gamma_perp() + kI * d.atom,
                                 rates.gamma_perp() + kI * d.atom,
                                 rates.kappa_1() + kI * d.cavity1,
                                 rates.kappa_2() + kI * d.cavity2,
                                 rates.kappa_b() + kI * d.fiber};
    for (int k = 0; k < 5; ++k) m(k, k) += diagonal[k];

    const DriveTerms e = DriveTerms::from(drive);
    ModeVector rhs;
    rhs << 0.0, 0.0, -kI * e.e1, -kI * e.e2, -kI * e.eb;

    Eigen::PartialPivLU<CMatrix5> lu(m);
    if (!(lu.rcond() > 1e-14)) {
        std::ostringstream msg;
        msg << "steady-state system is singular at delta = " << d.cavity1;
        throw SingularSystem(msg.str(), d.cavity1);
    }
    return SteadyStateAmplitudes::from_vector(lu.solve(rhs));
}

SteadyStateAmplitudes steady_state_analytic(const ModelRates& rates,
                                            const AtomEnsembleParams& atoms,
                                            const DriveTerms& drive, const Detunings& d) {
    require_damped(rates);
    const double delta = d.cavity1;
    const double g1 = atoms.g_eff_1;
    const double g2 = atoms.g_eff_2;
    const double v1 = rates.v1;
    const double v2 = rates.v2;

    const complex k1 = rates.kappa_1() + kI * d.cavity1;
    const complex k2 = rates.kappa_2() + kI * d.cavity2;
    const complex kb = rates.kappa_b() + kI * d.fiber;
    const complex ka = rates.gamma_perp() + kI * d.atom;
    require_nonzero(kb, std::abs(rates.kappa_b()) + std::abs(d.fiber), "kappa_b + i Delta_b",
                    delta);

    const complex atom1 = coupling_term(g1, ka, "gamma_perp + i Delta_a", delta);
    const complex atom2 = coupling_term(g2, ka, "gamma_perp + i Delta_a", delta);

    // Cavity-1 self-energy with the fiber and atom 1 eliminated.
    const complex d1 = k1 + atom1 + v1 * v1 / kb;
    require_nonzero(d1, std::abs(k1) + std::abs(atom1) + v1 * v1 / std::abs(kb),
                    "kappa_1 + i Delta_1 + |g1|^2/(gamma_perp + i Delta_a) + |v1|^2/(kappa_b + i Delta_b)",
                    delta);

    const complex numerator = kI * drive.e2 + drive.eb * (v2 / kb) * (k1 + atom1) / d1 -
                              kI * drive.e1 * (v2 / kb) * v1 / d1;
    const complex denominator = -k2 - v2 * v2 / kb - atom2 + (v1 * v1 * v2 * v2) / (kb * kb * d1);
    require_nonzero(denominator,
                    std::abs(k2) + v2 * v2 / std::abs(kb) + std::abs(atom2) +
                        v1 * v1 * v2 * v2 / std::norm(kb) / std::abs(d1),
                    "B", delta);

    SteadyStateAmplitudes out;
    out.a2 = numerator / denominator;
    out.a1 = -(kI * drive.e1 + drive.eb * v1 / kb + v1 * v2 / kb * out.a2) / d1;
    out.b = -kI * drive.eb / kb - kI * v1 / kb * out.a1 - kI * v2 / kb * out.a2;
    out.sigma1 = g1 == 0.0 ? complex{} : -kI * g1 * out.a1 / ka;
    out.sigma2 = g2 == 0.0 ? complex{} : -kI * g2 * out.a2 / ka;
    return out;
}

SteadyStateAmplitudes steady_state_analytic(const ModelRates& rates,
                                            const AtomEnsembleParams& atoms,
                                            const DriveSpec& drive) {
    return steady_state_analytic(rates, atoms, DriveTerms::from(drive), drive.detuning);
}

double output_flux(const SteadyStateAmplitudes& state, const DriveSpec& drive,
                   const ModelRates& rates, OutputPort port, PortDetection detection) {
    auto input_amplitude = [&](double coupling) -> complex {
        if (coupling <= 0.0) {
            throw InvalidParameter("driven port has zero outcoupling rate");
        }
        return kI * drive.amplitude / std::sqrt(2.0 * coupling);
    };
    switch (port) {
    case OutputPort::A: {
        const complex in = drive.port == InputPort::A && detection == PortDetection::SameChannel
                               ? input_amplitude(rates.kappa_1l)
                               : complex{};
        return std::norm(in + std::sqrt(2.0 * rates.kappa_1l) * state.a1);
    }
    case OutputPort::B:
        return std::norm(std::sqrt(2.0 * rates.kappa_2r) * state.a2);
    case OutputPort::C: {
        const complex in = drive.port == InputPort::C && detection == PortDetection::SameChannel
                               ? input_amplitude(rates.kappa_b_bs)
                               : complex{};
        return std::norm(in + std::sqrt(2.0 * rates.kappa_b_bs) * state.b);
    }
    }
    return kNaN;
}

double input_flux(const DriveSpec& drive, const ModelRates& rates) {
    const double coupling = drive.port == InputPort::A ? rates.kappa_1l : rates.kappa_b_bs;
    if (coupling <= 0.0) throw InvalidParameter("driven port has zero outcoupling rate");
    return drive.amplitude * drive.amplitude / (2.0 * coupling);
}

std::vector<double> Spectrum::deltas() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row.delta);
    return out;
}

std::vector<double> Spectrum::flux(OutputPort port) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        out.push_back(port == OutputPort::A   ? row.flux_a
                      : port == OutputPort::B ? row.flux_b
                                              : row.flux_c);
    }
    return out;
}

Spectrum sweep_spectrum(const ModelRates& rates, const AtomEnsembleParams& atoms,
                        const SweepOptions& options) {
    if (options.points < 2) throw InvalidParameter("sweep needs at least two points");
    if (!(options.delta_min < options.delta_max)) {
        throw InvalidParameter("sweep range must satisfy delta_min < delta_max");
    }
    require_damped(rates);

    const std::size_t n = options.points;
    const double step = (options.delta_max - options.delta_min) / static_cast<double>(n - 1);
    Spectrum spectrum;
    spectrum.rows.resize(n);

    auto evaluate = [&](std::size_t i) {
        const double delta = i + 1 == n ? options.delta_max : options.delta_min + step * i;
        const DriveSpec drive = DriveSpec::at(options.input, options.amplitude, delta);
        SpectrumRow& row = spectrum.rows[i];
        row.delta = delta;
        row.amplitudes = steady_state(rates, atoms, drive);
        row.flux_a = output_flux(row.amplitudes, drive, rates, OutputPort::A);
        row.flux_b = output_flux(row.amplitudes, drive, rates, OutputPort::B);
        row.flux_c = output_flux(row.amplitudes, drive, rates, OutputPort::C, options.c_detection);
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) evaluate(i);
        return spectrum;
    }

    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) evaluate(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
    return spectrum;
}

Spectrum normalize_to_empty_peak(Spectrum spectrum, const ModelRates& rates,
                                 const SweepOptions& options) {
    const Spectrum empty = sweep_spectrum(rates, AtomEnsembleParams{}, options);
    double peak_a = 0.0, peak_b = 0.0, peak_c = 0.0;
    for (const auto& row : empty.rows) {
        peak_a = std::max(peak_a, row.flux_a);
        peak_b = std::max(peak_b, row.flux_b);
        peak_c = std::max(peak_c, row.flux_c);
    }
    for (auto& row : spectrum.rows) {
        if (peak_a > 0.0) row.flux_a /= peak_a;
        if (peak_b > 0.0) row.flux_b /= peak_b;
        if (peak_c > 0.0) row.flux_c /= peak_c;
    }
    return spectrum;
}

}  // namespace cavnet
