#ifndef CAVNET_PEAKS_HPP
#define CAVNET_PEAKS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace cavnet {

struct Extremum {
    std::size_t first = 0;  // first grid index of the (possibly flat) extremum
    std::size_t last = 0;   // last grid index, == first unless a plateau
    double position = 0.0;  // abscissa of the plateau midpoint
    double value = 0.0;
};

/// Interior local maxima. Neighbouring samples equal to within
/// rel_tol are merged into a plateau, so a peak straddled symmetrically by
/// two grid points is reported once at their midpoint.
std::vector<Extremum> local_maxima(std::span<const double> x, std::span<const double> y,
                                   double rel_tol = 1e-9);

std::vector<Extremum> local_minima(std::span<const double> x, std::span<const double> y,
                                   double rel_tol = 1e-9);

struct RefinedPeak {
    double position = 0.0;
    double value = 0.0;
};

/// Vertex of the parabola through samples (i-1, i, i+1) on a uniform grid;
/// falls back to the sample itself at the grid edges.
RefinedPeak quadratic_peak(std::span<const double> x, std::span<const double> y, std::size_t i);

}  // namespace cavnet

#endif  // CAVNET_PEAKS_HPP
