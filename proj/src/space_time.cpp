#include "kgs/space_time.hpp"

#include "kgs/cutoff.hpp"
#include "kgs/fft.hpp"

namespace kgs {
namespace {

std::vector<int> joint_extents(const Grid& g, const TimeWindow& w) {
    std::vector<int> ext{w.samples};
    for (int e : g.extents()) ext.push_back(e);
    return ext;
}

void check_window(const TimeWindow& w) {
    if (w.samples < 2 || (w.samples & (w.samples - 1)) != 0)
        throw ContractViolation("time window: sample count must be a power of two");
    if (!(w.length > 0.0) || !std::isfinite(w.length) || !std::isfinite(w.start))
        throw ContractViolation("time window: length must be positive");
}

int signed_mode(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

double modulation(Dispersion kind, double tau, double xi_squared) noexcept {
    switch (kind) {
        case Dispersion::schrodinger: return tau + xi_squared;
        case Dispersion::wave_plus: return tau + std::sqrt(xi_squared);
        case Dispersion::wave_minus: return tau - std::sqrt(xi_squared);
    }
    return tau;
}

double window_cutoff(const TimeWindow& window, double t) noexcept {
    return psi((t - window.center()) / (0.25 * window.length));
}

SpaceTimeField::SpaceTimeField(Grid grid, TimeWindow window, Representation rep)
    : grid_(grid), window_(window), rep_(rep) {
    check_window(window_);
    values_.assign(grid_.size() * static_cast<std::size_t>(window_.samples), complex{});
}

SpaceTimeField::SpaceTimeField(Grid grid, TimeWindow window, std::vector<complex> values, Representation rep)
    : grid_(grid), window_(window), values_(std::move(values)), rep_(rep) {
    check_window(window_);
    if (values_.size() != grid_.size() * static_cast<std::size_t>(window_.samples))
        throw ContractViolation("space-time field: value count does not match grid and window");
}

SpaceTimeField SpaceTimeField::sample(const Grid& grid, const TimeWindow& window,
                                      const std::function<SpectralField(double)>& f) {
    SpaceTimeField out(grid, window, Representation::physical);
    const std::size_t n = grid.size();
    for (int k = 0; k < window.samples; ++k) {
        const SpectralField s = f(window.time(k)).to_physical();
        if (!(s.grid() == grid)) throw ContractViolation("space-time sample: grid mismatch");
        std::copy(s.values().begin(), s.values().end(), out.values_.begin() + static_cast<std::ptrdiff_t>(k * n));
    }
    return out;
}

SpaceTimeField SpaceTimeField::free_solution(const SpectralField& data, const TimeWindow& window, Dispersion kind) {
    const SpectralField spec = data.to_spectral();
    return sample(data.grid(), window, [&](double t) {
        switch (kind) {
            case Dispersion::schrodinger: return free_schrodinger(spec, t);
            case Dispersion::wave_plus: return free_half_wave(spec, t, WaveSign::plus);
            case Dispersion::wave_minus: break;
        }
        return free_half_wave(spec, t, WaveSign::minus);
    });
}

SpectralField SpaceTimeField::slice(int k) const {
    if (rep_ != Representation::physical) throw ContractViolation("slice: physical representation required");
    if (k < 0 || k >= window_.samples) throw ContractViolation("slice: time index out of range");
    const auto n = grid_.size();
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>(k * n);
    return SpectralField(grid_, std::vector<complex>(first, first + static_cast<std::ptrdiff_t>(n)),
                         Representation::physical);
}

SpaceTimeField SpaceTimeField::to_spectral() const {
    if (rep_ == Representation::spectral) return *this;
    SpaceTimeField out = *this;
    fft::forward_normalized(out.values_, joint_extents(grid_, window_));
    out.rep_ = Representation::spectral;
    return out;
}

SpaceTimeField SpaceTimeField::to_physical() const {
    if (rep_ == Representation::physical) return *this;
    SpaceTimeField out = *this;
    fft::backward(out.values_, joint_extents(grid_, window_));
    out.rep_ = Representation::physical;
    return out;
}

SpaceTimeField SpaceTimeField::times(const std::function<double(double)>& g) const {
    SpaceTimeField out = to_physical();
    const std::size_t n = grid_.size();
    for (int k = 0; k < window_.samples; ++k) {
        const double gk = g(window_.time(k));
        for (std::size_t i = 0; i < n; ++i) out.values_[k * n + i] *= gk;
    }
    return out;
}

SpaceTimeField SpaceTimeField::windowed() const {
    const TimeWindow w = window_;
    return times([w](double t) { return window_cutoff(w, t); });
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& other) {
    if (!compatible(other) || rep_ != other.rep_) throw ContractViolation("space-time field: incompatible sum");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(complex s) noexcept {
    for (auto& v : values_) v *= s;
    return *this;
}

double SpaceTimeField::l2_norm() const {
    double sum = 0.0;
    for (const auto& v : values_) sum += std::norm(v);
    const double total = grid_.volume() * window_.length;
    if (rep_ == Representation::spectral) return std::sqrt(sum * total);
    return std::sqrt(sum * total / static_cast<double>(values_.size()));
}

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
SpaceTimeField operator*(complex s, SpaceTimeField a) { return a *= s; }

SpaceTimeField product(const SpaceTimeField& a, const SpaceTimeField& b, bool conjugate_second) {
    if (!a.compatible(b)) throw ContractViolation("space-time product: incompatible fields");
    SpaceTimeField out = a.to_physical();
    const SpaceTimeField pb = b.to_physical();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= conjugate_second ? std::conj(pb[i]) : pb[i];
    return out;
}

SpaceTimeField resample(const SpaceTimeField& f, int points, int time_samples) {
    const Grid& g = f.grid();
    const Grid g2(g.dimension(), points, g.period());
    TimeWindow w2 = f.window();
    w2.samples = time_samples;
    const SpaceTimeField spec = f.to_spectral();
    SpaceTimeField out(g2, w2, Representation::spectral);
    const int mt = f.time_samples();
    for (int l = 0; l < mt; ++l) {
        const int kt = signed_mode(l, mt);
        if (kt < -time_samples / 2 || kt >= time_samples / 2) continue;
        const std::size_t lt = static_cast<std::size_t>((kt + time_samples) % time_samples);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto k = g.modes(i);
            bool fits = true;
            for (int a = 0; a < g.dimension(); ++a) fits = fits && k[a] >= -points / 2 && k[a] < points / 2;
            if (!fits) continue;
            out[lt * g2.size() + g2.linear_from_modes(k)] = spec[static_cast<std::size_t>(l) * g.size() + i];
        }
    }
    return f.representation() == Representation::spectral ? out : out.to_physical();
}

SpaceTimeField apply_space_time_multiplier(const SpaceTimeField& f,
                                           const std::function<double(double, std::size_t)>& symbol) {
    SpaceTimeField s = f.to_spectral();
    const std::size_t n = f.spatial_size();
    for (int l = 0; l < f.time_samples(); ++l) {
        const double tau = f.window().tau(l);
        for (std::size_t i = 0; i < n; ++i) s[static_cast<std::size_t>(l) * n + i] *= symbol(tau, i);
    }
    return f.representation() == Representation::spectral ? s : s.to_physical();
}

}  // namespace kgs
