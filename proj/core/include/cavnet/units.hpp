#ifndef CAVNET_UNITS_HPP
#define CAVNET_UNITS_HPP

#include <numbers>

// Every rate in the library is an angular frequency whose numeric value is
// expressed in units of 2*pi*MHz (so a value of 5.2 means 2*pi * 5.2e6 rad/s).
// SI conversion only happens where absolute power enters.

namespace cavnet::units {

inline constexpr double kSpeedOfLight = 299792458.0;     // m/s, vacuum
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kTwoPiMHz = 2.0 * std::numbers::pi * 1.0e6;  // rad/s per unit

/// rad/s -> model units (2*pi*MHz)
constexpr double to_model(double per_second) { return per_second / kTwoPiMHz; }

/// model units (2*pi*MHz) -> rad/s
constexpr double to_si(double model_rate) { return model_rate * kTwoPiMHz; }

}  // namespace cavnet::units

#endif  // CAVNET_UNITS_HPP
