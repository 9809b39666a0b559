#pragma once

#include <cmath>
#include <numbers>

namespace diffsimo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Canonical wrap to (-pi, pi]. std::remainder is exact, so the only fix-up is
// the closed/open end.
inline double wrap_phase(double phase) {
    double r = std::remainder(phase, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

// Wrap for arguments already within (-3 pi, 3 pi], e.g. a difference of two
// wrapped phases. Same result as wrap_phase on that range.
inline double wrap_near(double phase) {
    if (phase > kPi) return phase - kTwoPi;
    if (phase <= -kPi) return phase + kTwoPi;
    return phase;
}

// Absolute circular distance in [0, pi].
inline double circular_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

}  // namespace diffsimo
