#pragma once

// Fields sampled on grid x uniform time window, with the joint (xi, tau)
// transform. Storage is time-major: sample k occupies
// values[k*M^D, (k+1)*M^D). Time frequencies are tau_l = 2 pi l / T_w in FFT
// ordering, with the same exp(-i tau t) kernel as space, so a free
// Schrödinger solution sits at tau = -|xi|^2.

#include "kgs/spectral.hpp"

namespace kgs {

enum class Dispersion { schrodinger, wave_plus, wave_minus };

/// tau + |xi|^2, tau + |xi| or tau - |xi|.
double modulation(Dispersion kind, double tau, double xi_squared) noexcept;

struct TimeWindow {
    double start = 0.0;
    double length = 8.0;
    int samples = 256;

    double step() const noexcept { return length / samples; }
    double time(int k) const noexcept { return start + k * step(); }
    double center() const noexcept { return start + 0.5 * length; }
    int mode(int l) const noexcept { return l < samples / 2 ? l : l - samples; }
    double tau(int l) const noexcept { return 2.0 * M_PI * mode(l) / length; }
    bool operator==(const TimeWindow&) const = default;
};

/// psi((t - c) / (T_w / 4)) with c the window center: 1 on the middle half of
/// the window, vanishing at its ends.
double window_cutoff(const TimeWindow& window, double t) noexcept;

class SpaceTimeField {
public:
    SpaceTimeField(Grid grid, TimeWindow window, Representation rep);
    SpaceTimeField(Grid grid, TimeWindow window, std::vector<complex> values, Representation rep);

    /// Physical samples f(t_k) for k = 0..M_t-1.
    static SpaceTimeField sample(const Grid& grid, const TimeWindow& window,
                                 const std::function<SpectralField(double)>& f);
    /// Free evolution of the data under the given dispersion, sampled on the window.
    static SpaceTimeField free_solution(const SpectralField& data, const TimeWindow& window, Dispersion kind);

    const Grid& grid() const noexcept { return grid_; }
    const TimeWindow& window() const noexcept { return window_; }
    Representation representation() const noexcept { return rep_; }
    std::span<complex> values() noexcept { return values_; }
    std::span<const complex> values() const noexcept { return values_; }
    complex& operator[](std::size_t i) noexcept { return values_[i]; }
    const complex& operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t spatial_size() const noexcept { return grid_.size(); }
    int time_samples() const noexcept { return window_.samples; }

    /// Time (or tau) index and spatial index of a linear position.
    int time_index(std::size_t linear) const noexcept { return static_cast<int>(linear / grid_.size()); }
    std::size_t spatial_index(std::size_t linear) const noexcept { return linear % grid_.size(); }

    /// Copy of sample k as a spatial field (physical representation only).
    SpectralField slice(int k) const;

    SpaceTimeField to_spectral() const;
    SpaceTimeField to_physical() const;

    /// Physical multiplication by g(t).
    SpaceTimeField times(const std::function<double(double)>& g) const;
    /// Multiplied by window_cutoff.
    SpaceTimeField windowed() const;

    SpaceTimeField& operator+=(const SpaceTimeField& other);
    SpaceTimeField& operator*=(complex s) noexcept;

    /// Space-time L^2 norm (quadrature in physical, Parseval-scaled in spectral).
    double l2_norm() const;

    bool compatible(const SpaceTimeField& other) const noexcept {
        return grid_ == other.grid_ && window_ == other.window_;
    }

private:
    Grid grid_;
    TimeWindow window_;
    std::vector<complex> values_;
    Representation rep_;
};

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator*(complex s, SpaceTimeField a);

/// Pointwise physical product a*b, or a*conj(b).
SpaceTimeField product(const SpaceTimeField& a, const SpaceTimeField& b, bool conjugate_second = false);

/// Spectrum zero-padded (or truncated) onto a grid with M' points per axis and
/// M_t' time samples; the trigonometric interpolant is unchanged when it fits.
SpaceTimeField resample(const SpaceTimeField& f, int points, int time_samples);

/// Multiplies spectral values by symbol(tau, spatial index); keeps representation.
SpaceTimeField apply_space_time_multiplier(const SpaceTimeField& f,
                                           const std::function<double(double, std::size_t)>& symbol);

}  // namespace kgs
