#pragma once

// The trilinear form over {xi1 + xi2 + xi3 = 0, tau1 + tau2 + tau3 = 0},
// bilinear ratios of the Schrödinger-wave and wave-output estimates, the
// threshold scan over refinements and the second-Picard-iterate probe.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kgs/evolution.hpp"
#include "kgs/norms.hpp"

namespace kgs {

/// Sum of f_hat(k3) g1_hat(k1) g2_hat(k2) over integer modes with
/// k1 + k2 + k3 = 0 (no wrap-around), computed as a zero-padded linear
/// convolution of g1 and g2 paired with f.
complex trilinear_form(const SpaceTimeField& f, const SpaceTimeField& g1, const SpaceTimeField& g2);

/// Integral of the product of the three trigonometric interpolants over
/// torus x window, divided by period^D T_w. Equals trilinear_form.
complex trilinear_form_physical(const SpaceTimeField& f, const SpaceTimeField& g1, const SpaceTimeField& g2);

/// Direct triple loop; only for tiny grids.
complex trilinear_form_brute_force(const SpaceTimeField& f, const SpaceTimeField& g1, const SpaceTimeField& g2);

/// Product of two fields computed without aliasing: both are resampled onto
/// a grid with twice the points per axis and twice the time samples.
SpaceTimeField padded_product(const SpaceTimeField& a, const SpaceTimeField& b, bool conjugate_second = false);

struct RatioOptions {
    /// Evaluate products on a doubled grid; off when the supports are known
    /// to be alias free.
    bool pad = true;
    Dispersion wave = Dispersion::wave_plus;
};

/// ||u n||_{X^{s,b_out}} / (||u||_{X^{s,b_in}} ||n||_{X_+-^{sigma,b_in}}).
double bilinear_ratio_schrodinger(const SpaceTimeField& u, const SpaceTimeField& n, double s, double sigma,
                                  double b_out, double b_in, const RatioOptions& options = {});

/// ||u1 conj(u2)||_{X_+-^{sigma-1,b_out}} / (||u1||_{X^{s,b_in}} ||u2||_{X^{s,b_in}}).
double bilinear_ratio_wave_output(const SpaceTimeField& u1, const SpaceTimeField& u2, double s, double sigma,
                                  double b_out, double b_in, const RatioOptions& options = {});

/// The same wave-output ratio through duality: |I(conj n, u1, conj u2)|
/// against the dual-weighted n with n_hat = W^2 F_hat, where F = u1 conj(u2)
/// and W the output weight.
double bilinear_ratio_wave_output_dual(const SpaceTimeField& u1, const SpaceTimeField& u2, double s, double sigma,
                                       double b_out, double b_in, Dispersion wave = Dispersion::wave_plus);

/// Space-time field carried by a finite set of spatial modes, each with its
/// time samples on a window. Exact for pieces whose products stay inside the
/// grid band, and far cheaper than the dense layout when supports are thin.
struct ModalField {
    using Mode = std::array<int, 3>;

    int dimension = 2;
    double period = 2.0 * M_PI;
    TimeWindow window;
    std::map<Mode, std::vector<complex>> series;

    /// sum_k c_k exp(i xi_k x - i t omega(xi_k)) times the window cutoff.
    static ModalField windowed_free(const std::map<Mode, complex>& coefficients, int dimension, double period,
                                    const TimeWindow& window, Dispersion kind);

    double xi_squared(const Mode& k) const noexcept;
    /// Joint spectrum on the dense grid; every mode must fit in it.
    SpaceTimeField to_dense(const Grid& grid) const;
};

ModalField product(const ModalField& a, const ModalField& b, bool conjugate_second = false);
double bourgain_norm(const ModalField& f, const BourgainSpec& spec);

struct EnsembleSpec {
    int samples = 200;
    std::uint64_t seed = 20240611;
    int dimension = 2;
    double amplitude = 1.0;
    /// Torus side and time window of every refinement level.
    double period = 16.0 * M_PI;
    double window_length = 8.0;
    int time_samples = 256;
    /// Input and output modulation exponents, 1/2- and -1/2+ by default.
    double b_in = 0.5 - kDefaultEpsilon;
    double b_out = -0.5 + kDefaultEpsilon;
};

struct ExponentPair {
    double s;
    double sigma;
};

struct RatioReport {
    ExponentPair exponents;
    double b_in;
    double b_out;
    std::vector<int> refinements;
    std::vector<double> frequency;          // N at each level
    std::vector<double> sup_schrodinger;    // Schrödinger-wave family
    std::vector<double> sup_wave_output;    // wave-output family
    double growth_factor;                   // max over families of last/first sup
    std::optional<double> growth_exponent;  // least-squares power of N, set from 3 levels
    int samples;
    std::uint64_t seed;
};

/// Pieces of both families are Gaussian random coefficients on a frequency
/// patch, evolved freely and multiplied by the window cutoff. The
/// Schrödinger-wave family puts u on the resonant line xi_1 ~ N/2 and n near
/// -N e1; the wave-output family puts u1, u2 near N e1. Frequencies are
/// N = M/4 in wavenumber units.
std::vector<RatioReport> threshold_scan(const std::vector<ExponentPair>& exponents, const std::vector<int>& refinements,
                                        const EnsembleSpec& ensemble, int workers = 1);

struct ProbeSpec {
    double period = 8.0 * M_PI;
    int points = 512;
    double t_end = 1.0;
    double dt = 0.01;
    double width = 1.0;       // spatial Gaussian width of the packets
    double amplitude = 1.0;   // overall data amplitude after normalization
};

struct ProbeReport {
    ExponentPair exponents;
    std::vector<double> lambda;
    std::vector<double> schrodinger_term;  // ||u^(2)(t*)||_{H^s}
    std::vector<double> wave_term;         // ||n_+^(2)(t*)||_{H^sigma} + ||n_-^(2)(t*)||_{H^sigma}
    double schrodinger_power;
    double wave_power;
    double power;  // max of the two fitted powers
};

/// Data for one rung: u0 a packet at frequency lambda e1 with ||u0||_{H^s} = a,
/// n+-(0) a packet at the unit frequency e2 (resonant with u0 for the n u
/// term) with ||n+-||_{H^sigma} = a.
FirstOrderState concentrated_data(const ProbeSpec& spec, double lambda, const ExponentPair& exponents);

/// Second-order part of the solution at t*: picard_iterate(2) minus the free evolution.
FirstOrderState second_order_part(const FirstOrderState& data, const ProbeSpec& spec);

ProbeReport picard_c2_probe(const std::vector<double>& lambda, const ExponentPair& exponents, const ProbeSpec& spec);

}  // namespace kgs
