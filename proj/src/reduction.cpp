#include "kgs/reduction.hpp"

namespace kgs {
namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what) {
    if (!(a.grid() == b.grid())) throw ContractViolation(std::string("reduction: grid mismatch in ") + what);
}

}  // namespace

FirstOrderState to_first_order(const SecondOrderState& state) {
    require_same_grid(state.u, state.n, "n");
    require_same_grid(state.u, state.dt_n, "dt_n");
    const SpectralField n = state.n.to_spectral();
    const SpectralField m = half_wave_power(state.dt_n.to_spectral(), -0.5);
    SpectralField plus = n;
    SpectralField minus = n;
    const complex i{0.0, 1.0};
    for (std::size_t k = 0; k < n.size(); ++k) {
        plus[k] += i * m[k];
        minus[k] -= i * m[k];
    }
    return {state.u.to_spectral(), std::move(plus), std::move(minus), state.regularity};
}

SpectralField wave_average(const SpectralField& n_plus, const SpectralField& n_minus) {
    require_same_grid(n_plus, n_minus, "n_minus");
    SpectralField n = n_plus.to_spectral();
    const SpectralField m = n_minus.to_spectral();
    for (std::size_t k = 0; k < n.size(); ++k) n[k] = 0.5 * (n[k] + m[k]);
    return n;
}

SecondOrderState to_second_order(const FirstOrderState& state) {
    require_same_grid(state.u, state.n_plus, "n_plus");
    SpectralField n = wave_average(state.n_plus, state.n_minus);
    SpectralField diff = state.n_plus.to_spectral();
    const SpectralField m = state.n_minus.to_spectral();
    // (n+ - n-) / (2i) = -i (n+ - n-) / 2
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = complex(0.0, -0.5) * (diff[k] - m[k]);
    SpectralField dt_n = half_wave_power(diff, 0.5);
    if (imaginary_residue(n) > kRealityTolerance) throw ConsistencyError("reduction: n is not real");
    if (imaginary_residue(dt_n) > kRealityTolerance) throw ConsistencyError("reduction: dt n is not real");
    return {state.u.to_spectral(), std::move(n), std::move(dt_n), state.regularity};
}

}  // namespace kgs
