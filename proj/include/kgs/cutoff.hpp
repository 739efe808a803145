#pragma once

// Smooth bump psi: even, supported in (-2, 2), equal to 1 on [-1, 1], and the
// dyadic shells psi_N(r) = psi(r/N) - psi(2r/N), psi_1 = psi.

#include <cmath>

namespace kgs {

inline double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

inline double psi(double r) {
    const double a = std::abs(r);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double up = glue(2.0 - a);
    return up / (up + glue(a - 1.0));
}

inline bool is_dyadic(double n) {
    if (!(n >= 1.0) || !std::isfinite(n)) return false;
    int e = 0;
    return std::frexp(n, &e) == 0.5;
}

/// Caller guarantees N is dyadic.
inline double psi_dyadic(double N, double r) {
    if (N == 1.0) return psi(r);
    return psi(r / N) - psi(2.0 * r / N);
}

}  // namespace kgs
