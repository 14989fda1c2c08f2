#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qle {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Complex = std::complex<double>;

/// Execution policy for ensemble/sweep kernels. Parallel uses OpenMP with
/// per-task result slots and a serial reduction in task-index order, so both
/// policies produce bit-identical output.
enum class ExecPolicy { Serial, Parallel };

/// Reduce x to [0, 2*pi).
inline double mod_2pi(double x) {
    double y = std::fmod(x, kTwoPi);
    if (y < 0.0) y += kTwoPi;
    return y;
}

struct RepresentationError : std::logic_error {
    using std::logic_error::logic_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct WindowError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AliasingError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace qle
