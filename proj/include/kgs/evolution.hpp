#pragma once

// Time integration of the first-order system
//   dt u   = i Lap u - i k1 n u,             n = (n+ + n-)/2
//   dt n+- = -+ i A^{1/2} n+- +- i k2 A^{-1/2} |u|^2
// in Duhamel form, and Picard iterates of the same integral equations.

#include <vector>

#include "kgs/reduction.hpp"

namespace kgs {

/// Multipliers of the two Yukawa terms. (1, 1) is the system above; -1 flips
/// the sign of n u or |u|^2, and 0 switches the term off.
struct CouplingSigns {
    double schrodinger = 1.0;
    double wave = 1.0;
};

struct TimeGrid {
    double dt;
    long steps;

    TimeGrid(double dt, long steps);
    static TimeGrid covering(double t_end, long steps) { return TimeGrid(t_end / steps, steps); }
    double t_end() const noexcept { return dt * static_cast<double>(steps); }
    double time(long k) const noexcept { return dt * static_cast<double>(k); }
};

/// 0.5 (period / M)^2.
double default_dt(const Grid& grid);

struct Diagnostics {
    double time = 0.0;
    double charge = 0.0;
    double schrodinger_norm = 0.0;
    double wave_plus_norm = 0.0;
    double wave_minus_norm = 0.0;
};

Diagnostics diagnose(const FirstOrderState& state, double time);

struct Trajectory {
    /// Stored states and their times; every `state_stride`-th step is kept.
    std::vector<FirstOrderState> states;
    std::vector<double> state_times;
    /// One entry per step including t = 0.
    std::vector<Diagnostics> diagnostics;
    long state_stride = 1;

    double charge_drift() const;
};

struct IntegratorOptions {
    CouplingSigns signs{};
    /// Fixed-point corrections of the implicit midpoint equation per step.
    int sweeps = 6;
    /// Stop sweeping early once the update falls below this relative size.
    double sweep_tolerance = 0.0;
    long state_stride = 1;
};

/// P(n u) with n = (n+ + n-)/2, as a dealiased spectral field.
SpectralField coupling_schrodinger(const SpectralField& u, const SpectralField& n_plus, const SpectralField& n_minus);
/// +- A^{-1/2} P(|u|^2) as a spectral field (real in physical space).
SpectralField coupling_wave(const SpectralField& u, WaveSign sign);

/// One interaction-picture midpoint step.
FirstOrderState step(const FirstOrderState& state, double dt, const IntegratorOptions& options = {});

Trajectory simulate(const FirstOrderState& initial, const TimeGrid& tg, const IntegratorOptions& options = {});

/// order 1 is the free evolution; order k uses order k-1 inside the Duhamel
/// integrals, evaluated by cumulative trapezoid on the time grid.
Trajectory picard_iterate(int order, const FirstOrderState& initial, const TimeGrid& tg,
                          const CouplingSigns& signs = {}, long state_stride = 1);

/// Free evolution of every component over time t.
FirstOrderState free_evolution(const FirstOrderState& state, double t);

/// Max over stored times of the relative mismatch between the trajectory and
/// the trapezoid-rule Duhamel formula applied to itself (needs stride 1).
double duhamel_residual(const Trajectory& trajectory, const CouplingSigns& signs = {});

/// Relative L^2 distance of two states over the three components.
double state_distance(const FirstOrderState& a, const FirstOrderState& b);

}  // namespace kgs
