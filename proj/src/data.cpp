#include "kgs/data.hpp"

namespace kgs {

SpectralField gaussian_packet(const Grid& grid, const PacketSpec& p, double norm, double s) {
    if (!(p.width > 0.0)) throw ContractViolation("packet: width must be positive");
    if (!(norm >= 0.0)) throw ContractViolation("packet: norm must be nonnegative");
    const double half = 0.5 * grid.period();
    const int d = grid.dimension();
    SpectralField f = SpectralField::from_function(grid, [&](const std::array<double, 3>& x) {
        double r2 = 0.0, phase = 0.0;
        for (int a = 0; a < d; ++a) {
            // Nearest periodic image of the center keeps the bump smooth across the seam.
            double y = x[a] - half - p.offset[a];
            y -= grid.period() * std::round(y / grid.period());
            r2 += y * y;
            phase += p.wavevector[a] * x[a];
        }
        return std::polar(std::exp(-0.5 * r2 / (p.width * p.width)), phase);
    }).to_spectral();
    dealias_in_place(f);
    const double current = sobolev_norm(f, s);
    if (current == 0.0) throw DegenerateInput("packet: nothing left inside the dealiased band");
    f *= norm / current;
    return f;
}

FirstOrderState gaussian_state(const Grid& grid, double u_norm, double wave_norm, double sigma,
                               const PacketSpec& u_packet, const PacketSpec& n_packet) {
    PacketSpec real_packet = n_packet;
    real_packet.wavevector = {0.0, 0.0, 0.0};
    SpectralField n = gaussian_packet(grid, real_packet, 0.5 * wave_norm, sigma);
    // Tiny imaginary roundoff from the spectral scaling is removed in physical space.
    n = n.to_physical();
    for (auto& v : n.values()) v = v.real();
    n = n.to_spectral();
    const SecondOrderState s{gaussian_packet(grid, u_packet, u_norm, 0.0), n, SpectralField::zeros(grid),
                             {0.0, sigma}};
    return to_first_order(s);
}

}  // namespace kgs
