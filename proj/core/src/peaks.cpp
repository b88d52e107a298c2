#include "cavnet/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavnet {

namespace {

std::vector<Extremum> extrema(std::span<const double> x, std::span<const double> y,
                              double rel_tol, double sign) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y sizes differ");
    std::vector<Extremum> out;
    const std::size_t n = y.size();
    if (n < 3) return out;

    auto same = [&](std::size_t a, std::size_t b) {
        return std::abs(y[a] - y[b]) <= rel_tol * std::max(std::abs(y[a]), std::abs(y[b]));
    };

    std::size_t i = 1;
    while (i + 1 < n) {
        std::size_t j = i;
        while (j + 1 < n && same(j + 1, i)) ++j;
        if (j + 1 < n && sign * (y[i] - y[i - 1]) > 0.0 && sign * (y[j] - y[j + 1]) > 0.0) {
            out.push_back({i, j, 0.5 * (x[i] + x[j]), y[i]});
        }
        i = j + 1;
    }
    return out;
}

}  // namespace

std::vector<Extremum> local_maxima(std::span<const double> x, std::span<const double> y,
                                   double rel_tol) {
    return extrema(x, y, rel_tol, +1.0);
}

std::vector<Extremum> local_minima(std::span<const double> x, std::span<const double> y,
                                   double rel_tol) {
    return extrema(x, y, rel_tol, -1.0);
}

RefinedPeak quadratic_peak(std::span<const double> x, std::span<const double> y, std::size_t i) {
    if (i == 0 || i + 1 >= y.size()) return {x[i], y[i]};
    const double ym = y[i - 1];
    const double y0 = y[i];
    const double yp = y[i + 1];
    const double curvature = ym - 2.0 * y0 + yp;
    if (curvature == 0.0) return {x[i], y0};
    const double h = x[i + 1] - x[i];
    const double offset = 0.5 * (ym - yp) / curvature;  // in grid steps
    return {x[i] + offset * h, y0 - 0.25 * (ym - yp) * offset};
}

}  // namespace cavnet
