#include "kgs/spectral.hpp"

#include <algorithm>

#include "kgs/fft.hpp"

namespace kgs {

Grid::Grid(int dimension, int points_per_axis, double period)
    : dim_(dimension), points_(points_per_axis), period_(period) {
    if (dim_ != 2 && dim_ != 3) throw UnsupportedDimension("grid: dimension must be 2 or 3");
    if (points_ < 8 || (points_ & (points_ - 1)) != 0)
        throw ContractViolation("grid: points per axis must be a power of two >= 8");
    if (!(period_ > 0.0) || !std::isfinite(period_)) throw ContractViolation("grid: period must be positive");
    size_ = 1;
    for (int a = 0; a < dim_; ++a) {
        extents_[a] = points_;
        size_ *= static_cast<std::size_t>(points_);
    }
}

std::array<int, 3> Grid::axis_indices(std::size_t linear) const noexcept {
    std::array<int, 3> idx{0, 0, 0};
    const auto m = static_cast<std::size_t>(points_);
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(linear % m);
        linear /= m;
    }
    return idx;
}

std::array<int, 3> Grid::modes(std::size_t linear) const noexcept {
    auto idx = axis_indices(linear);
    for (int a = 0; a < dim_; ++a) idx[a] = mode(idx[a]);
    return idx;
}

std::array<double, 3> Grid::xi(std::size_t linear) const noexcept {
    const auto k = modes(linear);
    return {wavenumber(k[0]), wavenumber(k[1]), dim_ == 3 ? wavenumber(k[2]) : 0.0};
}

double Grid::xi_squared(std::size_t linear) const noexcept {
    const auto x = xi(linear);
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
}

std::array<double, 3> Grid::position(std::size_t linear) const noexcept {
    const auto idx = axis_indices(linear);
    const double h = spacing();
    return {idx[0] * h, idx[1] * h, dim_ == 3 ? idx[2] * h : 0.0};
}

std::size_t Grid::linear_from_modes(const std::array<int, 3>& k) const noexcept {
    std::size_t linear = 0;
    for (int a = 0; a < dim_; ++a) {
        int i = k[a] % points_;
        if (i < 0) i += points_;
        linear = linear * static_cast<std::size_t>(points_) + static_cast<std::size_t>(i);
    }
    return linear;
}

std::size_t Grid::mirror(std::size_t linear) const noexcept {
    auto k = modes(linear);
    for (auto& c : k) c = -c;
    return linear_from_modes(k);
}

bool Grid::touches_nyquist(std::size_t linear) const noexcept {
    const auto idx = axis_indices(linear);
    for (int a = 0; a < dim_; ++a)
        if (is_nyquist(idx[a])) return true;
    return false;
}

SpectralField::SpectralField(Grid grid, Representation rep)
    : grid_(grid), values_(grid.size(), complex{0.0, 0.0}), rep_(rep) {}

SpectralField::SpectralField(Grid grid, std::vector<complex> values, Representation rep)
    : grid_(grid), values_(std::move(values)), rep_(rep) {
    if (values_.size() != grid_.size()) throw ContractViolation("field: value count does not match grid");
}

SpectralField SpectralField::from_function(const Grid& grid,
                                           const std::function<complex(const std::array<double, 3>&)>& f) {
    SpectralField out(grid, Representation::physical);
    for (std::size_t i = 0; i < grid.size(); ++i) out.values_[i] = f(grid.position(i));
    return out;
}

SpectralField SpectralField::plane_wave(const Grid& grid, const std::array<int, 3>& k) {
    const std::array<double, 3> xi{grid.wavenumber(k[0]), grid.wavenumber(k[1]),
                                   grid.dimension() == 3 ? grid.wavenumber(k[2]) : 0.0};
    return from_function(grid, [&](const std::array<double, 3>& x) {
        return std::polar(1.0, xi[0] * x[0] + xi[1] * x[1] + xi[2] * x[2]);
    });
}

SpectralField SpectralField::to_spectral() const {
    if (rep_ == Representation::spectral) return *this;
    return transform(*this, Direction::to_spectral);
}

SpectralField SpectralField::to_physical() const {
    if (rep_ == Representation::physical) return *this;
    return transform(*this, Direction::to_physical);
}

void SpectralField::require_compatible(const SpectralField& other) const {
    if (!(grid_ == other.grid_)) throw ContractViolation("field: grid mismatch");
    if (rep_ != other.rep_) throw ContractViolation("field: representation mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(complex scale) noexcept {
    for (auto& v : values_) v *= scale;
    return *this;
}

double SpectralField::l2_norm() const {
    double sum = 0.0;
    for (const auto& v : values_) sum += std::norm(v);
    if (rep_ == Representation::physical) return std::sqrt(sum * grid_.cell_volume());
    return std::sqrt(sum * grid_.volume());
}

double SpectralField::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(complex s, SpectralField a) { return a *= s; }

SpectralField conj(const SpectralField& f) {
    SpectralField p = f.to_physical();
    for (auto& v : p.values()) v = std::conj(v);
    return f.representation() == Representation::spectral ? p.to_spectral() : p;
}

SpectralField transform(const SpectralField& field, Direction direction) {
    const bool forward = direction == Direction::to_spectral;
    const auto expected = forward ? Representation::physical : Representation::spectral;
    if (field.representation() != expected)
        throw ContractViolation("transform: field is not in the source representation");
    std::vector<complex> data(field.values().begin(), field.values().end());
    if (forward)
        fft::forward_normalized(data, field.grid().extents());
    else
        fft::backward(data, field.grid().extents());
    return SpectralField(field.grid(), std::move(data),
                         forward ? Representation::spectral : Representation::physical);
}

SpectralField apply_multiplier(const SpectralField& field, const std::function<complex(std::size_t)>& symbol) {
    SpectralField s = field.to_spectral();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= symbol(i);
    return field.representation() == Representation::spectral ? s : s.to_physical();
}

SpectralField bessel_multiplier(const SpectralField& field, double s) {
    const Grid& g = field.grid();
    return apply_multiplier(field, [&](std::size_t i) { return std::pow(1.0 + g.xi_squared(i), 0.5 * s); });
}

SpectralField half_wave_power(const SpectralField& field, double p) {
    const Grid& g = field.grid();
    return apply_multiplier(field, [&](std::size_t i) { return std::pow(1.0 + g.xi_squared(i), p); });
}

SpectralField free_schrodinger(const SpectralField& field, double t) {
    const Grid& g = field.grid();
    return apply_multiplier(field, [&](std::size_t i) { return std::polar(1.0, -t * g.xi_squared(i)); });
}

SpectralField free_half_wave(const SpectralField& field, double t, WaveSign sign) {
    const Grid& g = field.grid();
    const double sgn = sign_value(sign);
    return apply_multiplier(field, [&](std::size_t i) {
        return std::polar(1.0, -sgn * t * std::sqrt(1.0 + g.xi_squared(i)));
    });
}

double sobolev_norm(const SpectralField& field, double s) {
    const SpectralField spec = field.to_spectral();
    const Grid& g = spec.grid();
    double sum = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) sum += std::pow(1.0 + g.xi_squared(i), s) * std::norm(spec[i]);
    return std::sqrt(sum * g.volume());
}

double imaginary_residue(const SpectralField& field) {
    const SpectralField p = field.to_physical();
    double im = 0.0, total = 0.0;
    for (const auto& v : p.values()) {
        im += v.imag() * v.imag();
        total += std::norm(v);
    }
    if (total == 0.0) return 0.0;
    return std::sqrt(im / total);
}

bool in_dealiased_band(const Grid& grid, std::size_t linear) noexcept {
    const auto k = grid.modes(linear);
    const int cutoff = grid.points() / 3;
    for (int a = 0; a < grid.dimension(); ++a)
        if (std::abs(k[a]) > cutoff || grid.is_nyquist(grid.axis_indices(linear)[a])) return false;
    return true;
}

void dealias_in_place(SpectralField& spectral) {
    if (spectral.representation() != Representation::spectral)
        throw ContractViolation("dealias: spectral representation required");
    const Grid& g = spectral.grid();
    for (std::size_t i = 0; i < spectral.size(); ++i)
        if (!in_dealiased_band(g, i)) spectral[i] = 0.0;
}

SpectralField dealiased_product(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid())) throw ContractViolation("product: grid mismatch");
    SpectralField pa = a.to_physical();
    const SpectralField pb = b.to_physical();
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
    SpectralField out = transform(pa, Direction::to_spectral);
    dealias_in_place(out);
    return out;
}

}  // namespace kgs
