#include "cavnet/saturation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/LU>

#include "cavnet/errors.hpp"
#include "cavnet/peaks.hpp"
#include "cavnet/units.hpp"

namespace cavnet {

namespace {

constexpr complex kI{0.0, 1.0};

struct BracketParts {
    double h = 0.0;        // envelope h(x), bracket = k h(x)
    double h_prime = 0.0;  // dh/dx
};

// h(x) = x^-1 [1 - s / R] with R = sqrt((s + A x)(s + x)), rewritten as
// ((1 + A) s + A x) / (R (R + s)) so that x = 0 is an ordinary point.
BracketParts bracket_envelope(double x, double s, double a) {
    const double r = std::sqrt((s + a * x) * (s + x));
    const double num = (1.0 + a) * s + a * x;
    const double den = r * (r + s);
    const double r_prime = ((1.0 + a) * s + 2.0 * a * x) / (2.0 * r);
    const double den_prime = r_prime * (2.0 * r + s);
    return {num / den, (a * den - num * den_prime) / (den * den)};
}

complex bracket_prefactor(double delta_a_norm, double coop, double a) {
    return complex(1.0, -delta_a_norm) * (2.0 * coop / (1.0 + a));
}

double max_abs(const SaturationSystem::State& r) {
    return std::max({std::abs(r(0)), std::abs(r(1)), std::abs(r(2))});
}

void require_sorted_powers(std::span<const double> powers) {
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!(powers[i] > 0.0) || !std::isfinite(powers[i])) {
            throw InvalidParameter("powers must be positive");
        }
        if (i > 0 && powers[i] < powers[i - 1]) {
            throw InvalidParameter("powers must be sorted ascending");
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

SaturationParams SaturationParams::from(const ModelRates& rates, const AtomEnsembleParams& atoms,
                                        double geometric_factor) {
    const double gperp = rates.gamma_perp();
    auto g0_squared = [&](double g0, double n_sat) {
        if (g0 > 0.0) return g0 * g0;
        if (n_sat > 0.0) return gperp * rates.gamma_par / (4.0 * n_sat);
        return 0.0;
    };
    SaturationParams p;
    p.geometric_factor = geometric_factor;
    p.n_sat_1 = atoms.n_sat_1 > 0.0 ? atoms.n_sat_1 : gperp * rates.gamma_par / (4.0 * atoms.g0_1 * atoms.g0_1);
    p.n_sat_2 = atoms.n_sat_2 > 0.0 ? atoms.n_sat_2 : gperp * rates.gamma_par / (4.0 * atoms.g0_2 * atoms.g0_2);
    p.coop1 = atoms.n_eff_1 * g0_squared(atoms.g0_1, atoms.n_sat_1) / (rates.kappa_1() * gperp);
    p.coop2 = atoms.n_eff_2 * g0_squared(atoms.g0_2, atoms.n_sat_2) / (rates.kappa_2() * gperp);
    p.validate();
    return p;
}

AtomEnsembleParams SaturationParams::linear_equivalent(const ModelRates& rates) const {
    return AtomEnsembleParams::collective(std::sqrt(coop1 * rates.kappa_1() * rates.gamma_perp()),
                                          std::sqrt(coop2 * rates.kappa_2() * rates.gamma_perp()));
}

void SaturationParams::validate() const {
    if (!(coop1 >= 0.0 && coop2 >= 0.0) || !std::isfinite(coop1) || !std::isfinite(coop2)) {
        throw InvalidParameter("cooperativities must be finite and >= 0");
    }
    if (!(geometric_factor > 0.0 && geometric_factor < 1.0)) {
        throw InvalidParameter("geometric factor must lie in (0, 1)");
    }
    if (!(n_sat_1 > 0.0 && n_sat_2 > 0.0) || !std::isfinite(n_sat_1) || !std::isfinite(n_sat_2)) {
        throw InvalidParameter("saturation photon numbers must be positive");
    }
}

complex bracket_term(complex x, double delta_a_norm, double coop, double geometric_factor) {
    const double s = 1.0 + delta_a_norm * delta_a_norm;
    return bracket_prefactor(delta_a_norm, coop, geometric_factor) *
           bracket_envelope(std::norm(x), s, geometric_factor).h;
}

// ---------------------------------------------------------------------------
// Normalized system

SaturationSystem::SaturationSystem(const ModelRates& rates, const SaturationParams& params,
                                   const Detunings& d)
    : params_(params) {
    rates.validate();
    params.validate();
    const double k1 = rates.kappa_1();
    const double k2 = rates.kappa_2();
    const double kb = rates.kappa_b();
    const double gperp = rates.gamma_perp();
    if (!(k1 > 0.0 && k2 > 0.0 && kb > 0.0 && gperp > 0.0)) {
        throw InvalidParameter("saturation model needs positive kappa_1, kappa_2, kappa_b, gamma_perp");
    }
    const double q = std::pow(params.n_sat_2 / params.n_sat_1, 0.25);
    self1_ = complex(1.0, d.cavity1 / k1);
    self2_ = complex(1.0, d.cavity2 / k2);
    selfb_ = complex(1.0, d.fiber / kb);
    couple1_ = kI * (rates.v1 / k1) * q;
    couple2_ = kI * (rates.v2 / k2) / q;
    fiber1_ = kI * (rates.v1 / kb) / q;
    fiber2_ = kI * (rates.v2 / kb) * q;
    delta_a_norm_ = d.atom / gperp;
}

SaturationSystem::State SaturationSystem::residual(const State& x, double y_b) const {
    const double a = params_.geometric_factor;
    State r;
    r(0) = x(0) * (self1_ + bracket_term(x(0), delta_a_norm_, params_.coop1, a)) + couple1_ * x(2);
    r(1) = x(1) * (self2_ + bracket_term(x(1), delta_a_norm_, params_.coop2, a)) + couple2_ * x(2);
    r(2) = selfb_ * x(2) + fiber1_ * x(0) + fiber2_ * x(1) + kI * y_b;
    return r;
}

SaturationSystem::Jacobian SaturationSystem::jacobian(const State& x) const {
    const double a = params_.geometric_factor;
    const double s = 1.0 + delta_a_norm_ * delta_a_norm_;

    // Complex partial derivatives with respect to Re X_k and Im X_k.
    Eigen::Matrix<complex, 3, 3> d_re = Eigen::Matrix<complex, 3, 3>::Zero();
    Eigen::Matrix<complex, 3, 3> d_im = Eigen::Matrix<complex, 3, 3>::Zero();

    const double coops[2] = {params_.coop1, params_.coop2};
    const complex selfs[2] = {self1_, self2_};
    const complex couples[2] = {couple1_, couple2_};
    for (int l = 0; l < 2; ++l) {
        const complex k = bracket_prefactor(delta_a_norm_, coops[l], a);
        const BracketParts env = bracket_envelope(std::norm(x(l)), s, a);
        const complex diag = selfs[l] + k * env.h;
        const complex radial = x(l) * k * env.h_prime * 2.0;
        d_re(l, l) = diag + radial * x(l).real();
        d_im(l, l) = kI * diag + radial * x(l).imag();
        d_re(l, 2) = couples[l];
        d_im(l, 2) = kI * couples[l];
    }
    d_re(2, 0) = fiber1_;
    d_re(2, 1) = fiber2_;
    d_re(2, 2) = selfb_;
    d_im(2, 0) = kI * fiber1_;
    d_im(2, 1) = kI * fiber2_;
    d_im(2, 2) = kI * selfb_;

    Jacobian j;
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
            j(row, col) = d_re(row, col).real();
            j(row, col + 3) = d_im(row, col).real();
            j(row + 3, col) = d_re(row, col).imag();
            j(row + 3, col + 3) = d_im(row, col).imag();
        }
    }
    return j;
}

SaturationSystem::State SaturationSystem::solve_linear(double y_b, bool with_atoms) const {
    const complex atomic = complex(1.0, delta_a_norm_);
    Eigen::Matrix<complex, 3, 3> m = Eigen::Matrix<complex, 3, 3>::Zero();
    m(0, 0) = self1_ + (with_atoms ? params_.coop1 / atomic : 0.0);
    m(1, 1) = self2_ + (with_atoms ? params_.coop2 / atomic : 0.0);
    m(0, 2) = couple1_;
    m(1, 2) = couple2_;
    m(2, 0) = fiber1_;
    m(2, 1) = fiber2_;
    m(2, 2) = selfb_;
    State rhs(0.0, 0.0, -kI * y_b);
    return m.partialPivLu().solve(rhs);
}

SaturationSystem::State SaturationSystem::linear_solution(double y_b) const {
    return solve_linear(y_b, true);
}

SaturationSystem::State SaturationSystem::empty_solution(double y_b) const {
    return solve_linear(y_b, false);
}

double SaturationSystem::tolerance(double y_b, const SaturationSolverOptions& options) const {
    return options.tolerance * std::max(1.0, std::abs(y_b));
}

SaturationSystem::NewtonResult SaturationSystem::newton(State guess, double y_b,
                                                        const SaturationSolverOptions& options) const {
    using Vector6 = Eigen::Matrix<double, 6, 1>;
    auto pack = [](const State& z) {
        Vector6 v;
        v << z(0).real(), z(1).real(), z(2).real(), z(0).imag(), z(1).imag(), z(2).imag();
        return v;
    };
    auto unpack = [](const Vector6& v) {
        return State(complex(v(0), v(3)), complex(v(1), v(4)), complex(v(2), v(5)));
    };

    const double tol = tolerance(y_b, options);
    NewtonResult result;
    result.x = guess;
    State r = residual(result.x, y_b);
    result.residual = max_abs(r);

    for (int it = 0; it < options.max_newton_iterations; ++it) {
        const Jacobian j = jacobian(result.x);
        const Eigen::PartialPivLU<Jacobian> lu(j);
        result.jacobian_determinant = lu.determinant();
        if (result.residual < tol) {
            result.converged = true;
            return result;
        }
        const Vector6 step = lu.solve(-pack(r));
        if (!step.allFinite()) break;

        const Vector6 x0 = pack(result.x);
        double lambda = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            const State trial = unpack(x0 + lambda * step);
            const State trial_r = residual(trial, y_b);
            const double trial_norm = max_abs(trial_r);
            if (trial_norm < result.residual) {
                result.x = trial;
                r = trial_r;
                result.residual = trial_norm;
                improved = true;
                break;
            }
        }
        ++result.iterations;
        if (!improved) break;
    }
    if (result.residual < tol) {
        result.converged = true;
        result.jacobian_determinant = jacobian(result.x).partialPivLu().determinant();
    }
    return result;
}

// ---------------------------------------------------------------------------
// Continuation

SaturationContinuation::SaturationContinuation(SaturationSystem system,
                                               SaturationSolverOptions options)
    : system_(std::move(system)), options_(options) {
    state_.converged = true;
    last_determinant_ = system_.jacobian(SaturationSystem::State::Zero()).determinant();
}

const SaturationState& SaturationContinuation::advance_to(double y_b) {
    if (!(y_b >= 0.0) || !std::isfinite(y_b)) {
        throw InvalidParameter("normalized drive y_b must be finite and >= 0");
    }
    using State = SaturationSystem::State;
    State x(state_.x1, state_.x2, state_.xb);
    double y = state_.y_b;

    if (y_b == 0.0) {
        state_ = SaturationState{};
        state_.converged = true;
        return state_;
    }

    if (y == 0.0) {
        // The weak-drive solution is exact as y_b -> 0; seed there.
        y = y_b * options_.start_fraction;
        const auto seeded = system_.newton(system_.linear_solution(y), y, options_);
        if (!seeded.converged) {
            throw ConvergenceError("saturation solver failed at the continuation seed",
                                   seeded.residual);
        }
        x = seeded.x;
        state_.iterations += seeded.iterations;
        last_determinant_ = seeded.jacobian_determinant;
    }

    double growth = options_.max_growth;
    int steps = 0;
    double last_residual = 0.0;
    while (y != y_b) {
        if (++steps > options_.max_continuation_steps) {
            throw ConvergenceError("saturation continuation exceeded its step budget", last_residual);
        }
        const double next = y_b > y ? std::min(y_b, y * growth) : std::max(y_b, y / growth);
        // Linear predictor: amplitudes scale with the drive below saturation.
        const auto step = system_.newton(x * (next / y), next, options_);
        if (!step.converged) {
            last_residual = step.residual;
            growth = std::sqrt(growth);
            if (growth - 1.0 < 1e-9) {
                std::ostringstream msg;
                msg << "saturation continuation stalled at y_b = " << y << " (target " << y_b
                    << ", residual " << step.residual << ")";
                throw ConvergenceError(msg.str(), step.residual);
            }
            continue;
        }
        if (step.jacobian_determinant * last_determinant_ < 0.0) fold_seen_ = true;
        last_determinant_ = step.jacobian_determinant;
        state_.iterations += step.iterations;
        last_residual = step.residual;
        x = step.x;
        y = next;
        if (step.iterations <= 3) growth = std::min(options_.max_growth, growth * growth);
    }

    state_.x1 = x(0);
    state_.x2 = x(1);
    state_.xb = x(2);
    state_.y_b = y_b;
    state_.residual = max_abs(system_.residual(x, y_b));
    state_.converged = state_.residual < system_.tolerance(y_b, options_);
    state_.bistable = state_.bistable || fold_seen_;
    return state_;
}

SaturationState solve_saturated_state(double y_b, const ModelRates& rates,
                                      const SaturationParams& params, const Detunings& detuning,
                                      const SaturationSolverOptions& options) {
    SaturationSystem system(rates, params, detuning);
    SaturationContinuation continuation(system, options);
    SaturationState state = continuation.advance_to(y_b);
    if (!options.check_bistability || y_b == 0.0) return state;

    // A solution reachable from the saturated (empty-cavity) side that differs
    // from the continued branch signals bistability.
    const auto upper = system.newton(system.empty_solution(y_b), y_b, options);
    if (upper.converged) {
        const SaturationSystem::State lower(state.x1, state.x2, state.xb);
        const double scale = 1.0 + lower.norm();
        if ((upper.x - lower).norm() > 1e-6 * scale) {
            state.bistable = true;
            if (upper.x.norm() < lower.norm()) {
                state.x1 = upper.x(0);
                state.x2 = upper.x(1);
                state.xb = upper.x(2);
                state.residual = upper.residual;
            }
        }
    }
    return state;
}

// ---------------------------------------------------------------------------
// Physical conversions

double yb_to_drive_amplitude(double y_b, const ModelRates& rates, const SaturationParams& params) {
    return y_b * rates.kappa_b() * std::pow(params.n_sat_1 * params.n_sat_2, 0.25);
}

namespace {

double watts_per_yb_squared(const ModelRates& rates, const SaturationParams& params,
                            double wavelength) {
    if (!(rates.kappa_b_bs > 0.0)) throw InvalidParameter("kappa_b,bs must be positive");
    if (!(wavelength > 0.0)) throw InvalidParameter("wavelength must be positive");
    const double kb = units::to_si(rates.kappa_b());
    const double kbs = units::to_si(rates.kappa_b_bs);
    const double photon_energy =
        2.0 * std::numbers::pi * units::kHbar * units::kSpeedOfLight / wavelength;
    return kb * kb / (2.0 * kbs) * photon_energy * std::sqrt(params.n_sat_1 * params.n_sat_2);
}

}  // namespace

double power_to_yb(double watts, const ModelRates& rates, const SaturationParams& params,
                   double wavelength) {
    if (!(watts >= 0.0)) throw InvalidParameter("input power must be >= 0");
    return std::sqrt(watts / watts_per_yb_squared(rates, params, wavelength));
}

double yb_to_power(double y_b, const ModelRates& rates, const SaturationParams& params,
                   double wavelength) {
    return y_b * y_b * watts_per_yb_squared(rates, params, wavelength);
}

SteadyStateAmplitudes to_amplitudes(const SaturationState& state, const SaturationParams& params) {
    SteadyStateAmplitudes out;
    out.a1 = state.x1 * std::sqrt(params.n_sat_1);
    out.a2 = state.x2 * std::sqrt(params.n_sat_2);
    out.b = state.xb * std::pow(params.n_sat_1 * params.n_sat_2, 0.25);
    return out;
}

double emitted_flux_c(const SaturationState& state, const ModelRates& rates,
                      const SaturationParams& params) {
    return 2.0 * rates.kappa_b_bs * std::norm(to_amplitudes(state, params).b);
}

// ---------------------------------------------------------------------------
// Spectra and the saturation curve

namespace {

SaturatedSpectra spectra_at(std::vector<double> deltas, std::span<const double> powers,
                            const ModelRates& rates, const SaturationParams& params,
                            const SaturationCurveOptions& options) {
    require_sorted_powers(powers);
    SaturatedSpectra out;
    out.deltas = std::move(deltas);
    for (double p : powers) out.y_b.push_back(power_to_yb(p, rates, params, options.wavelength));
    out.flux_c.assign(powers.size(), std::vector<double>(out.deltas.size(), 0.0));
    out.bistable.assign(powers.size(), std::vector<bool>(out.deltas.size(), false));

    // Columns are independent; each runs its own continuation across powers.
    auto column = [&](std::size_t j) {
        const double delta = out.deltas[j];
        SaturationSystem system(rates, params, Detunings::common(delta));
        SaturationContinuation continuation(system, options.solver);
        for (std::size_t i = 0; i < powers.size(); ++i) {
            try {
                const SaturationState& s = continuation.advance_to(out.y_b[i]);
                out.flux_c[i][j] = emitted_flux_c(s, rates, params);
                out.bistable[i][j] = s.bistable;
            } catch (const ConvergenceError& e) {
                std::ostringstream msg;
                msg << e.what() << " [power " << powers[i] << " W, delta " << delta << "]";
                throw ConvergenceError(msg.str(), e.residual());
            }
        }
    };

    const std::size_t n = out.deltas.size();
    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, n));
    if (workers == 1) {
        for (std::size_t j = 0; j < n; ++j) column(j);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t j = w; j < n; j += workers) column(j);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<double> uniform_grid(const SaturationCurveOptions& options) {
    if (options.points < 3) throw InvalidParameter("saturation grid needs at least 3 points");
    if (!(options.delta_min < 0.0 && options.delta_max > 0.0)) {
        throw InvalidParameter("saturation grid must straddle zero detuning");
    }
    std::vector<double> grid(options.points);
    const double step = (options.delta_max - options.delta_min) / (options.points - 1.0);
    for (std::size_t i = 0; i < options.points; ++i) grid[i] = options.delta_min + step * i;
    grid.back() = options.delta_max;
    return grid;
}

}  // namespace

SaturatedSpectra saturated_spectra(std::span<const double> powers, const ModelRates& rates,
                                   const SaturationParams& params,
                                   const SaturationCurveOptions& options) {
    return spectra_at(uniform_grid(options), powers, rates, params, options);
}

std::vector<SaturationPoint> saturation_curve(std::span<const double> powers,
                                              const ModelRates& rates,
                                              const SaturationParams& params,
                                              const SaturationCurveOptions& options) {
    std::vector<double> deltas = uniform_grid(options);
    const std::size_t grid_size = deltas.size();
    deltas.push_back(0.0);  // exact resonance, evaluated alongside the grid
    const SaturatedSpectra spectra = spectra_at(deltas, powers, rates, params, options);
    const std::span<const double> grid(spectra.deltas.data(), grid_size);

    std::vector<SaturationPoint> curve;
    curve.reserve(powers.size());
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const std::span<const double> flux(spectra.flux_c[i].data(), grid_size);
        auto side_peak = [&](bool positive) {
            std::size_t best = grid_size;
            for (std::size_t j = 0; j < grid_size; ++j) {
                if ((grid[j] > 0.0) != positive || grid[j] == 0.0) continue;
                if (best == grid_size || flux[j] > flux[best]) best = j;
            }
            return quadratic_peak(grid, flux, best).value;
        };
        SaturationPoint point;
        point.power_w = powers[i];
        point.y_b = spectra.y_b[i];
        point.flux0 = spectra.flux_c[i].back();
        point.bright_avg = 0.5 * (side_peak(false) + side_peak(true));
        point.normalized_transmission = point.flux0 / point.bright_avg;
        point.converged = true;
        point.bistable = std::any_of(spectra.bistable[i].begin(), spectra.bistable[i].end(),
                                     [](bool b) { return b; });
        curve.push_back(point);
    }
    return curve;
}

}  // namespace cavnet
