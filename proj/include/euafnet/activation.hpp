#pragma once

#include <cmath>
#include <stdexcept>

namespace euafnet {

// Hybrid activation: a period-2 triangle wave on [0, inf) and the bounded
// rational curve x / (|x| + 1) on (-inf, 0).  The two branches meet at 0.
// Output always lies in (-1, 1].
//
// On [0, 1] the wave is the identity, on [1, 2] it is 2 - x, and it repeats
// with period 2.  Nonnegative inputs within 1e-12 of an even integer are
// snapped to the wave's zero so that periodicity is exact at the seams even
// when the argument carries accumulated rounding error.
inline double euaf(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("euaf: non-finite input");
  }
  if (x >= 0.0) {
    const double nearest_even = 2.0 * std::round(0.5 * x);
    if (std::abs(x - nearest_even) <= 1e-12) {
      return 0.0;
    }
    const double v = std::abs(x - 2.0 * std::floor(0.5 * (x + 1.0)));
    // Guard against the one-ulp overshoot that floor rounding can produce
    // just below odd integers; the exact value never exceeds 1.
    return v > 1.0 ? 1.0 : v;
  }
  return x / (1.0 - x);
}

// Analytic slope of euaf away from its kinks (the nonnegative integers).
// For x < 0 the curve is differentiable everywhere with slope 1/(|x|+1)^2.
inline double euaf_slope(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("euaf_slope: non-finite input");
  }
  if (x < 0.0) {
    const double q = 1.0 - x;
    return 1.0 / (q * q);
  }
  const double phase = x - 2.0 * std::floor(0.5 * x);  // in [0, 2)
  return phase < 1.0 ? 1.0 : -1.0;
}

}  // namespace euafnet
