#pragma once

#include <cmath>
#include <numbers>

namespace pockets {

/// sin(pi*x) with exact zeros at integers and exact +-1 at half-integers.
inline double sinpi(double x) {
    const double n = std::nearbyint(2.0 * x);
    const double r = x - 0.5 * n;  // |r| <= 1/4, exact
    const double t = std::numbers::pi * r;
    switch (static_cast<long long>(n) & 3) {
    case 0: return std::sin(t);
    case 1: return std::cos(t);
    case 2: return -std::sin(t);
    default: return -std::cos(t);
    }
}

/// cos(pi*x) with exact zeros at half-integers.
inline double cospi(double x) {
    const double n = std::nearbyint(2.0 * x);
    const double r = x - 0.5 * n;
    const double t = std::numbers::pi * r;
    switch (static_cast<long long>(n) & 3) {
    case 0: return std::cos(t);
    case 1: return -std::sin(t);
    case 2: return -std::cos(t);
    default: return std::sin(t);
    }
}

// Branch-free sin(2*pi*x) for the integrator's inner loop. The reduction to
// |s| <= 1/2 is exact, so the phase never loses bits as the lift x grows,
// and the loop over a batch of points vectorizes.
inline double sin_turns(double x) {
    const double r = 2.0 * (x - std::nearbyint(x));  // in [-1, 1]
    const double s = std::fabs(r) > 0.5 ? std::copysign(1.0, r) - r : r;
    const double t = std::numbers::pi * s;
    const double t2 = t * t;
    // Taylor series through t^23; truncation error < 1e-20 on |t| <= pi/2.
    double p = -1.0 / 25852016738884976640000.0;
    p = 1.0 / 51090942171709440000.0 + t2 * p;
    p = -1.0 / 121645100408832000.0 + t2 * p;
    p = 1.0 / 355687428096000.0 + t2 * p;
    p = -1.0 / 1307674368000.0 + t2 * p;
    p = 1.0 / 6227020800.0 + t2 * p;
    p = -1.0 / 39916800.0 + t2 * p;
    p = 1.0 / 362880.0 + t2 * p;
    p = -1.0 / 5040.0 + t2 * p;
    p = 1.0 / 120.0 + t2 * p;
    p = -1.0 / 6.0 + t2 * p;
    p = 1.0 + t2 * p;
    return t * p;
}

inline double cos_turns(double x) { return sin_turns(x + 0.25); }

}  // namespace pockets
