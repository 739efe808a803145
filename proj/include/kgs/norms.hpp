#pragma once

// Discrete Bourgain norms, restricted-interval surrogates, mixed
// space-time Lebesgue norms and Strichartz admissibility arithmetic.

#include <limits>
#include <optional>
#include <vector>

#include "kgs/space_time.hpp"

namespace kgs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultEpsilon = 0.01;

struct BourgainSpec {
    double regularity = 0.0;
    double b = 0.0;
    Dispersion kind = Dispersion::schrodinger;
    double epsilon = kDefaultEpsilon;

    /// Throws ContractViolation outside epsilon in (0, 0.1], b in (-1, 1.5).
    void validate() const;
    /// The exponent a+ (direction +1) or a- (direction -1).
    static double decorate(double a, int direction, double epsilon = kDefaultEpsilon) {
        return a + direction * epsilon;
    }
};

/// sqrt(period^D T_w sum <xi>^{2s} <modulation>^{2b} |f_hat|^2).
double bourgain_norm(const SpaceTimeField& f, const BourgainSpec& spec);

/// psi((t - T/2) / (T/2)): equal to 1 on [0, T], supported in (-T/2, 3T/2).
double interval_cutoff(double T, double t) noexcept;

/// The cutoff extension of u from [0, T] evaluated on u's window; the window
/// must contain (-T/2, 3T/2).
SpaceTimeField interval_extension(const SpaceTimeField& u, double T);

/// Upper-bound surrogate for the X^{s,b}[0, T] norm: bourgain_norm of the
/// cutoff extension.
double restricted_norm(const SpaceTimeField& u, double T, const BourgainSpec& spec);

/// Same surrogate for a field given by its time samples; samples on a window
/// of length 4T centered at T/2.
double restricted_norm(const std::function<SpectralField(double)>& u, const Grid& grid, double T,
                       const BourgainSpec& spec, int time_samples = 256);

/// Continuum H^b(R) norm of the interval cutoff, by quadrature of its
/// Fourier transform. A free solution has restricted norm close to this
/// times ||u0||_{H^s} for the matching dispersion.
double cutoff_sobolev_norm(double T, double b);

/// || ||f(t)||_{L^r_x} ||_{L^q_t(I)}; r or q may be kInfinity (maximum). Over
/// the whole window the periodic rectangle rule is used; over a
/// subinterval the composite trapezoid on the samples inside it.
double strichartz_norm(const SpaceTimeField& f, double q, double r,
                       std::optional<std::pair<double, double>> interval = std::nullopt);

/// Spatial L^r norm with grid quadrature weights.
double lebesgue_norm(const SpectralField& f, double r);

bool schrodinger_admissible(double q, double r, int D, double tolerance = 1e-12);

struct WaveAdmissibility {
    bool admissible;
    double mu;        // D(1/2 - 1/r) - 1/q
    double mu_dual;   // 1 + rho - D(1/2 - 1/r~) + 1/q~
};

/// Klein-Gordon pair conditions with the mu-matching relation, each checked
/// to the given tolerance.
WaveAdmissibility wave_admissible(double q, double r, double q_tilde, double r_tilde, double rho, int D,
                                  double tolerance = 1e-12);

/// Least-squares slope of log y against log x.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SlopeReport {
    std::vector<double> T;
    std::vector<double> ratio;  // restricted norm at b' over restricted norm at b
    double slope;
};

/// Fits the T-exponent of ||psi_T u||_{X^{s,b'}} / ||psi_T u||_{X^{s,b}} over
/// the ladder; u is sampled on a window of length 4T per rung.
SlopeReport time_localization_slope(const std::function<SpectralField(double)>& u, const Grid& grid, double s,
                                    double b, double b_prime, const std::vector<double>& ladder,
                                    Dispersion kind = Dispersion::schrodinger, int time_samples = 256);

}  // namespace kgs
