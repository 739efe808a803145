#pragma once

// Smooth, band-limited initial data used by the drivers and experiments.

#include <array>

#include "kgs/reduction.hpp"

namespace kgs {

struct PacketSpec {
    std::array<double, 3> offset{0.0, 0.0, 0.0};      // from the torus center
    std::array<double, 3> wavevector{0.0, 0.0, 0.0};  // carrier frequency
    double width = 1.0;
};

/// exp(-|x - c|^2 / (2 w^2)) exp(i k.x), truncated to the dealiased band and
/// scaled to the given H^s norm. Spectral representation.
SpectralField gaussian_packet(const Grid& grid, const PacketSpec& packet, double norm, double s = 0.0);

/// u0 a packet with ||u0||_{L^2} = u_norm; n0 a real packet with
/// ||n+||_{H^sigma} = ||n-||_{H^sigma} = wave_norm / 2 and dt n(0) = 0.
FirstOrderState gaussian_state(const Grid& grid, double u_norm, double wave_norm, double sigma,
                               const PacketSpec& u_packet = {}, const PacketSpec& n_packet = {});

}  // namespace kgs
