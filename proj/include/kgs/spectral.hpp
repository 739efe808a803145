#pragma once

// Periodic-grid discretization, spectral transforms, Fourier multipliers and
// the free Schrödinger / Klein-Gordon half-wave propagators.
//
// Conventions:
//   x_j     = j * (period / M),  j = 0..M-1 on every axis
//   xi_k    = 2 pi k / period,   k in {-M/2, ..., M/2-1} (FFT ordering in storage)
//   f_hat_k = M^{-D} sum_j f(x_j) exp(-i xi_k . x_j)
// so that f(x) = sum_k f_hat_k exp(i xi_k . x) and
// ||f||_{L^2}^2 = period^D * sum_k |f_hat_k|^2.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kgs/errors.hpp"

namespace kgs {

using complex = std::complex<double>;

/// Japanese bracket <x> = sqrt(1 + x^2).
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

class Grid {
public:
    Grid(int dimension, int points_per_axis, double period);

    int dimension() const noexcept { return dim_; }
    int points() const noexcept { return points_; }
    double period() const noexcept { return period_; }
    double spacing() const noexcept { return period_ / points_; }
    std::size_t size() const noexcept { return size_; }
    double volume() const noexcept { return std::pow(period_, dim_); }
    /// Quadrature weight (period/M)^D of one grid cell.
    double cell_volume() const noexcept { return std::pow(spacing(), dim_); }
    std::span<const int> extents() const noexcept { return {extents_.data(), static_cast<std::size_t>(dim_)}; }

    /// Signed mode number of storage index i along one axis.
    int mode(int i) const noexcept { return i < points_ / 2 ? i : i - points_; }
    bool is_nyquist(int i) const noexcept { return i == points_ / 2; }
    double wavenumber(int k) const noexcept { return 2.0 * M_PI * k / period_; }

    std::array<int, 3> axis_indices(std::size_t linear) const noexcept;
    std::array<int, 3> modes(std::size_t linear) const noexcept;
    std::array<double, 3> xi(std::size_t linear) const noexcept;
    double xi_squared(std::size_t linear) const noexcept;
    std::array<double, 3> position(std::size_t linear) const noexcept;
    /// Linear index of the signed mode vector (components taken modulo M).
    std::size_t linear_from_modes(const std::array<int, 3>& k) const noexcept;
    /// Index of the mode -k under the storage aliasing (Hermitian partner).
    std::size_t mirror(std::size_t linear) const noexcept;
    bool touches_nyquist(std::size_t linear) const noexcept;

    bool operator==(const Grid& other) const noexcept {
        return dim_ == other.dim_ && points_ == other.points_ && period_ == other.period_;
    }

private:
    int dim_;
    int points_;
    double period_;
    std::size_t size_;
    std::array<int, 3> extents_{};
};

enum class Representation { physical, spectral };
enum class Direction { to_spectral, to_physical };

class SpectralField {
public:
    SpectralField(Grid grid, Representation rep);
    SpectralField(Grid grid, std::vector<complex> values, Representation rep);

    static SpectralField zeros(const Grid& grid, Representation rep = Representation::spectral) {
        return SpectralField(grid, rep);
    }
    /// Samples f on the physical grid.
    static SpectralField from_function(const Grid& grid,
                                       const std::function<complex(const std::array<double, 3>&)>& f);
    /// exp(i xi_k . x) with unit amplitude, in physical representation.
    static SpectralField plane_wave(const Grid& grid, const std::array<int, 3>& k);

    const Grid& grid() const noexcept { return grid_; }
    Representation representation() const noexcept { return rep_; }
    std::span<complex> values() noexcept { return values_; }
    std::span<const complex> values() const noexcept { return values_; }
    complex& operator[](std::size_t i) noexcept { return values_[i]; }
    const complex& operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }

    SpectralField to_spectral() const;
    SpectralField to_physical() const;
    SpectralField in(Representation rep) const { return rep == Representation::spectral ? to_spectral() : to_physical(); }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(complex scale) noexcept;

    /// Physical-space L^2 norm by grid quadrature (any representation).
    double l2_norm() const;
    /// Largest |v| over stored values, in the current representation.
    double max_abs() const noexcept;

private:
    void require_compatible(const SpectralField& other) const;

    Grid grid_;
    std::vector<complex> values_;
    Representation rep_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(complex s, SpectralField a);
SpectralField conj(const SpectralField& f);

/// Toggles the representation; the field must currently be in the source
/// representation of `direction`.
SpectralField transform(const SpectralField& field, Direction direction);

/// Multiplies spectral values by symbol(index). The result keeps the input's
/// representation.
SpectralField apply_multiplier(const SpectralField& field,
                               const std::function<complex(std::size_t)>& symbol);

/// <xi>^s = (1 + |xi|^2)^{s/2}.
SpectralField bessel_multiplier(const SpectralField& field, double s);
/// A^p = (1 - Laplacian)^p, symbol <xi>^{2p}.
SpectralField half_wave_power(const SpectralField& field, double p);
/// exp(i t Laplacian), symbol exp(-i t |xi|^2).
SpectralField free_schrodinger(const SpectralField& field, double t);

enum class WaveSign { plus = +1, minus = -1 };
inline double sign_value(WaveSign s) { return s == WaveSign::plus ? 1.0 : -1.0; }

/// exp(-+ i t A^{1/2}), symbol exp(-+ i t <xi>); `plus` selects the minus
/// exponent (the n_+ propagator).
SpectralField free_half_wave(const SpectralField& field, double t, WaveSign sign);

/// Discrete H^s norm: period^{D/2} * || <xi>^s f_hat ||_{l^2}.
double sobolev_norm(const SpectralField& field, double s);

/// Largest imaginary part of the physical values relative to the L^2-type size.
double imaginary_residue(const SpectralField& field);

/// 2/3-rule: zero every mode with |k_i| > M/3 on some axis (Nyquist included).
void dealias_in_place(SpectralField& spectral);
bool in_dealiased_band(const Grid& grid, std::size_t linear) noexcept;

/// Pointwise product a*b in physical space, returned dealiased in spectral form.
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

}  // namespace kgs
