#ifndef CAVNET_ERRORS_HPP
#define CAVNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cavnet {

/// Geometry or parameter value outside its physical domain.
class InvalidGeometry : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Negative or otherwise unusable rate passed to a model routine.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Linear steady-state system (or one of its nested denominators) is singular.
class SingularSystem : public std::runtime_error {
public:
    SingularSystem(const std::string& what, double delta)
        : std::runtime_error(what), delta_(delta) {}

    /// Probe detuning at which the failure occurred (NaN when not applicable).
    double delta() const noexcept { return delta_; }

private:
    double delta_;
};

/// Nonlinear solver gave up before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace cavnet

#endif  // CAVNET_ERRORS_HPP
