#pragma once

// Change of unknowns between (u, n, dt n) and (u, n+, n-), with
// n+- = n +- i A^{-1/2} dt n and A = 1 - Laplacian.

#include "kgs/spectral.hpp"

namespace kgs {

struct Regularity {
    double s = 0.0;      // Schrödinger component
    double sigma = 0.0;  // wave component
};

struct SecondOrderState {
    SpectralField u;
    SpectralField n;
    SpectralField dt_n;
    Regularity regularity{};
};

struct FirstOrderState {
    SpectralField u;
    SpectralField n_plus;
    SpectralField n_minus;
    Regularity regularity{};

    const Grid& grid() const noexcept { return u.grid(); }
};

/// Above this relative imaginary residue the reconstructed wave field is
/// rejected as not real.
inline constexpr double kRealityTolerance = 1e-8;

/// Output fields are in spectral representation.
FirstOrderState to_first_order(const SecondOrderState& state);

/// Throws ConsistencyError when n or dt n comes out non-real.
SecondOrderState to_second_order(const FirstOrderState& state);

/// n = (n+ + n-) / 2 as a spectral field, without the reality check.
SpectralField wave_average(const SpectralField& n_plus, const SpectralField& n_minus);

}  // namespace kgs
