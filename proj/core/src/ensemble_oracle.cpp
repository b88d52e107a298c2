#include "cavnet/ensemble_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cavnet/errors.hpp"

namespace cavnet {

namespace {

constexpr double kPi = std::numbers::pi;

// Trapezoid rule on a periodic integrand is spectrally accurate; nodes at
// theta_k = pi (k + 1/2) / n avoid double-counting the endpoint.
template <class F>
auto periodic_average(F&& f, std::size_t nodes) {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t k = 0; k < nodes; ++k) {
        sum += f(kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(nodes));
    }
    return sum / static_cast<double>(nodes);
}

}  // namespace

double EnsembleSample::weight(std::size_t j) const {
    const double c = std::cos(thetas[j]);
    return geometric_factor + (1.0 - geometric_factor) * c * c;
}

EnsembleSample EnsembleSample::uniform_random(std::size_t m, double g0, std::uint64_t seed,
                                              double geometric_factor) {
    EnsembleSample sample;
    sample.g0 = g0;
    sample.geometric_factor = geometric_factor;
    sample.thetas.resize(m);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, kPi);
    for (auto& t : sample.thetas) t = uniform(rng);
    sample.validate();
    return sample;
}

void EnsembleSample::validate() const {
    if (thetas.empty()) throw InvalidParameter("ensemble sample needs at least one atom");
    if (!(g0 > 0.0)) throw InvalidParameter("g0 must be positive");
    if (!(geometric_factor >= 0.0 && geometric_factor <= 1.0)) {
        throw InvalidParameter("geometric factor must lie in [0, 1]");
    }
}

complex two_level_response(double g, double gamma_perp, double gamma_par, double delta_a,
                           complex a) {
    const double g2 = g * g;
    const double den = gamma_perp * gamma_perp + delta_a * delta_a +
                       4.0 * (gamma_perp / gamma_par) * g2 * std::norm(a);
    return g2 * complex(gamma_perp, -delta_a) / den;
}

complex ensemble_response_sum(const EnsembleSample& sample, double gamma_perp, double gamma_par,
                              double delta_a, complex a) {
    sample.validate();
    complex sum{};
    for (std::size_t j = 0; j < sample.size(); ++j) {
        sum += two_level_response(sample.g0 * std::sqrt(sample.weight(j)), gamma_perp, gamma_par,
                                  delta_a, a);
    }
    return sum;
}

MonteCarloEstimate discrete_susceptibility_sum(const EnsembleSample& sample, complex x,
                                               double delta_a_norm, const ModelRates& rates,
                                               double kappa, double n_eff) {
    sample.validate();
    const double gperp = rates.gamma_perp();
    const double gpar = rates.gamma_par;
    if (!(gperp > 0.0 && gpar > 0.0 && kappa > 0.0 && n_eff > 0.0)) {
        throw InvalidParameter("gamma_perp, gamma_par, kappa and n_eff must be positive");
    }
    const double delta_a = delta_a_norm * gperp;
    const double n_sat = gperp * gpar / (4.0 * sample.g0 * sample.g0);
    const complex a = x * std::sqrt(n_sat);
    const double m = static_cast<double>(sample.size());
    // Each sampled atom stands for 2 n_eff / ((1 + A) M) atoms: <w> = (1 + A)/2.
    const double per_atom = 2.0 * n_eff / ((1.0 + sample.geometric_factor) * m) / kappa;

    double sum_re = 0.0, sum_im = 0.0, sq_re = 0.0, sq_im = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
        const complex t = two_level_response(sample.g0 * std::sqrt(sample.weight(j)), gperp, gpar,
                                             delta_a, a);
        sum_re += t.real();
        sum_im += t.imag();
        sq_re += t.real() * t.real();
        sq_im += t.imag() * t.imag();
    }
    const double mean_re = sum_re / m;
    const double mean_im = sum_im / m;
    auto sem = [&](double sq, double mean) {
        if (sample.size() < 2) return 0.0;
        const double var = std::max(0.0, (sq - m * mean * mean) / (m - 1.0));
        return std::sqrt(var / m);
    };
    const double scale = per_atom * m;
    return {complex(mean_re, mean_im) * scale,
            complex(sem(sq_re, mean_re), sem(sq_im, mean_im)) * scale, sample.size()};
}

complex bracket_by_quadrature(complex x, double delta_a_norm, double coop,
                              double geometric_factor, std::size_t nodes) {
    const double s = 1.0 + delta_a_norm * delta_a_norm;
    const double xx = std::norm(x);
    const double avg = periodic_average(
        [&](double theta) {
            const double c = std::cos(theta);
            const double w = geometric_factor + (1.0 - geometric_factor) * c * c;
            return w / (s + w * xx);
        },
        nodes);
    return complex(1.0, -delta_a_norm) * (2.0 * coop / (1.0 + geometric_factor)) * avg;
}

double average_identity_check(double a, double b, std::size_t nodes) {
    if (!(a > 0.0 && a + b > 0.0)) throw InvalidParameter("need a > 0 and a + b > 0");
    const double numeric = periodic_average(
        [&](double theta) {
            const double c = std::cos(theta);
            return 1.0 / (a + b * c * c);
        },
        nodes);
    return std::abs(numeric - 1.0 / std::sqrt(a * (a + b)));
}

}  // namespace cavnet
