#include "kgs/estimates.hpp"

namespace kgs {
namespace {

void require_same_layout(const SpaceTimeField& f, const SpaceTimeField& g1, const SpaceTimeField& g2) {
    if (!f.compatible(g1) || !f.compatible(g2)) throw ContractViolation("trilinear form: incompatible fields");
}

int signed_mode(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

SpaceTimeField padded_product(const SpaceTimeField& a, const SpaceTimeField& b, bool conjugate_second) {
    if (!a.compatible(b)) throw ContractViolation("padded product: incompatible fields");
    const int m = a.grid().points();
    const int mt = a.time_samples();
    return product(resample(a, 2 * m, 2 * mt), resample(b, 2 * m, 2 * mt), conjugate_second);
}

complex trilinear_form(const SpaceTimeField& f, const SpaceTimeField& g1, const SpaceTimeField& g2) {
    require_same_layout(f, g1, g2);
    const SpaceTimeField conv = padded_product(g1, g2).to_spectral();
    const SpaceTimeField fs = f.to_spectral();
    const Grid& g = f.grid();
    const Grid& gp = conv.grid();
    const int mt = f.time_samples();
    const int mtp = conv.time_samples();
    complex sum{};
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const complex v = fs[i];
        if (v == complex{}) continue;
        const int kt = signed_mode(fs.time_index(i), mt);
        auto k = g.modes(fs.spatial_index(i));
        for (auto& c : k) c = -c;
        const std::size_t lt = static_cast<std::size_t>((-kt + mtp) % mtp);
        sum += v * conv[lt * gp.size() + gp.linear_from_modes(k)];
    }
    return sum;
}

complex trilinear_form_physical(const SpaceTimeField& f, const SpaceTimeField& g1, const SpaceTimeField& g2) {
    require_same_layout(f, g1, g2);
    const int m = 2 * f.grid().points();
    const int mt = 2 * f.time_samples();
    const SpaceTimeField a = resample(f, m, mt).to_physical();
    const SpaceTimeField b = resample(g1, m, mt).to_physical();
    const SpaceTimeField c = resample(g2, m, mt).to_physical();
    complex sum{};
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i] * c[i];
    // Quadrature weight over the volume, divided by the volume again.
    return sum / static_cast<double>(a.size());
}

complex trilinear_form_brute_force(const SpaceTimeField& f, const SpaceTimeField& g1, const SpaceTimeField& g2) {
    require_same_layout(f, g1, g2);
    const SpaceTimeField a = f.to_spectral();
    const SpaceTimeField b = g1.to_spectral();
    const SpaceTimeField c = g2.to_spectral();
    const Grid& g = f.grid();
    const int m = g.points();
    const int mt = f.time_samples();
    complex sum{};
    for (std::size_t i1 = 0; i1 < b.size(); ++i1) {
        const int t1 = signed_mode(b.time_index(i1), mt);
        const auto k1 = g.modes(b.spatial_index(i1));
        for (std::size_t i2 = 0; i2 < c.size(); ++i2) {
            const int t3 = -t1 - signed_mode(c.time_index(i2), mt);
            if (t3 < -mt / 2 || t3 >= mt / 2) continue;
            const auto k2 = g.modes(c.spatial_index(i2));
            std::array<int, 3> k3{0, 0, 0};
            bool inside = true;
            for (int d = 0; d < g.dimension(); ++d) {
                k3[d] = -k1[d] - k2[d];
                inside = inside && k3[d] >= -m / 2 && k3[d] < m / 2;
            }
            if (!inside) continue;
            const std::size_t lt = static_cast<std::size_t>((t3 + mt) % mt);
            sum += a[lt * g.size() + g.linear_from_modes(k3)] * b[i1] * c[i2];
        }
    }
    return sum;
}

double bilinear_ratio_schrodinger(const SpaceTimeField& u, const SpaceTimeField& n, double s, double sigma,
                                  double b_out, double b_in, const RatioOptions& options) {
    const SpaceTimeField un = options.pad ? padded_product(u, n) : product(u, n);
    const double top = bourgain_norm(un, {s, b_out, Dispersion::schrodinger});
    const double bottom =
        bourgain_norm(u, {s, b_in, Dispersion::schrodinger}) * bourgain_norm(n, {sigma, b_in, options.wave});
    if (bottom == 0.0) throw DegenerateInput("bilinear ratio: zero input");
    return top / bottom;
}

double bilinear_ratio_wave_output(const SpaceTimeField& u1, const SpaceTimeField& u2, double s, double sigma,
                                  double b_out, double b_in, const RatioOptions& options) {
    const SpaceTimeField f = options.pad ? padded_product(u1, u2, true) : product(u1, u2, true);
    const double top = bourgain_norm(f, {sigma - 1.0, b_out, options.wave});
    const double bottom =
        bourgain_norm(u1, {s, b_in, Dispersion::schrodinger}) * bourgain_norm(u2, {s, b_in, Dispersion::schrodinger});
    if (bottom == 0.0) throw DegenerateInput("bilinear ratio: zero input");
    return top / bottom;
}

double bilinear_ratio_wave_output_dual(const SpaceTimeField& u1, const SpaceTimeField& u2, double s, double sigma,
                                       double b_out, double b_in, Dispersion wave) {
    const SpaceTimeField f = padded_product(u1, u2, true);
    const Grid& g = f.grid();
    SpaceTimeField n = apply_space_time_multiplier(f, [&](double tau, std::size_t i) {
        const double xi2 = g.xi_squared(i);
        const double m = modulation(wave, tau, xi2);
        return std::pow(1.0 + xi2, sigma - 1.0) * std::pow(1.0 + m * m, b_out);
    });
    const double dual_norm = bourgain_norm(n, {1.0 - sigma, -b_out, wave});
    if (dual_norm == 0.0) throw DegenerateInput("bilinear ratio: zero product");
    SpaceTimeField n_bar = n.to_physical();
    for (auto& v : n_bar.values()) v = std::conj(v);
    SpaceTimeField u2_bar = resample(u2, g.points(), f.time_samples()).to_physical();
    for (auto& v : u2_bar.values()) v = std::conj(v);
    const SpaceTimeField u1_up = resample(u1, g.points(), f.time_samples());
    const double pairing = std::abs(trilinear_form(n_bar, u1_up, u2_bar)) * g.volume() * f.window().length;
    const double bottom =
        bourgain_norm(u1, {s, b_in, Dispersion::schrodinger}) * bourgain_norm(u2, {s, b_in, Dispersion::schrodinger});
    if (bottom == 0.0) throw DegenerateInput("bilinear ratio: zero input");
    return pairing / dual_norm / bottom;
}

}  // namespace kgs
