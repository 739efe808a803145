#include "kgs/norms.hpp"

#include <algorithm>
#include <numeric>

#include "kgs/cutoff.hpp"
#include "kgs/fft.hpp"

namespace kgs {

void BourgainSpec::validate() const {
    if (!(epsilon > 0.0 && epsilon <= 0.1)) throw ContractViolation("bourgain spec: epsilon must lie in (0, 0.1]");
    if (!(b > -1.0 && b < 1.5)) throw ContractViolation("bourgain spec: b must lie in (-1, 1.5)");
    if (!std::isfinite(regularity)) throw ContractViolation("bourgain spec: regularity must be finite");
}

double bourgain_norm(const SpaceTimeField& f, const BourgainSpec& spec) {
    spec.validate();
    const SpaceTimeField s = f.to_spectral();
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    std::vector<double> xi2(n), space_weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        xi2[i] = g.xi_squared(i);
        space_weight[i] = std::pow(1.0 + xi2[i], spec.regularity);
    }
    double sum = 0.0;
    for (int l = 0; l < f.time_samples(); ++l) {
        const double tau = f.window().tau(l);
        const complex* row = s.values().data() + static_cast<std::size_t>(l) * n;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::norm(row[i]);
            if (a == 0.0) continue;
            const double m = modulation(spec.kind, tau, xi2[i]);
            sum += space_weight[i] * std::pow(1.0 + m * m, spec.b) * a;
        }
    }
    return std::sqrt(sum * g.volume() * f.window().length);
}

double interval_cutoff(double T, double t) noexcept { return psi((t - 0.5 * T) / (0.5 * T)); }

SpaceTimeField interval_extension(const SpaceTimeField& u, double T) {
    if (!(T > 0.0)) throw ContractViolation("restricted norm: T must be positive");
    const TimeWindow& w = u.window();
    if (w.start > -0.5 * T + 1e-12 * T || w.start + w.length < 1.5 * T - 1e-12 * T)
        throw ContractViolation("restricted norm: window does not contain the cutoff support (-T/2, 3T/2)");
    return u.times([T](double t) { return interval_cutoff(T, t); });
}

double restricted_norm(const SpaceTimeField& u, double T, const BourgainSpec& spec) {
    return bourgain_norm(interval_extension(u, T), spec);
}

namespace {

TimeWindow rung_window(double T, int samples) { return TimeWindow{-1.5 * T, 4.0 * T, samples}; }

}  // namespace

double restricted_norm(const std::function<SpectralField(double)>& u, const Grid& grid, double T,
                       const BourgainSpec& spec, int time_samples) {
    return restricted_norm(SpaceTimeField::sample(grid, rung_window(T, time_samples), u), T, spec);
}

double cutoff_sobolev_norm(double T, double b) {
    // Long periodic window, so the discrete tau sum is a fine Riemann sum of
    // the continuum integral.
    const int n = 1 << 17;
    const TimeWindow w{-32.0 * T, 64.0 * T, n};
    std::vector<complex> data(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) data[static_cast<std::size_t>(k)] = interval_cutoff(T, w.time(k));
    const int ext[1] = {n};
    fft::forward_normalized(data, ext);
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
        const double tau = w.tau(l);
        sum += std::pow(1.0 + tau * tau, b) * std::norm(data[static_cast<std::size_t>(l)]);
    }
    return std::sqrt(sum * w.length);
}

double lebesgue_norm(const SpectralField& f, double r) {
    if (!(r >= 1.0)) throw ContractViolation("lebesgue norm: r must be at least 1");
    const SpectralField p = f.to_physical();
    if (std::isinf(r)) return p.max_abs();
    double sum = 0.0;
    for (const auto& v : p.values()) sum += std::pow(std::abs(v), r);
    return std::pow(sum * f.grid().cell_volume(), 1.0 / r);
}

double strichartz_norm(const SpaceTimeField& f, double q, double r, std::optional<std::pair<double, double>> interval) {
    if (!(q >= 1.0) || !(r >= 1.0)) throw ContractViolation("strichartz norm: exponents must be at least 1");
    const SpaceTimeField p = f.to_physical();
    const TimeWindow& w = f.window();
    std::vector<double> times, values;
    for (int k = 0; k < w.samples; ++k) {
        const double t = w.time(k);
        if (interval && (t < interval->first - 1e-12 || t > interval->second + 1e-12)) continue;
        times.push_back(t);
        values.push_back(lebesgue_norm(p.slice(k), r));
    }
    if (values.empty()) throw ContractViolation("strichartz norm: no samples in the interval");
    if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    if (!interval) {
        for (double v : values) sum += std::pow(v, q) * w.step();
    } else {
        if (values.size() < 2) throw ContractViolation("strichartz norm: interval needs two samples");
        for (std::size_t k = 1; k < values.size(); ++k)
            sum += 0.5 * (times[k] - times[k - 1]) * (std::pow(values[k - 1], q) + std::pow(values[k], q));
    }
    return std::pow(sum, 1.0 / q);
}

namespace {

double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

bool exponent_in_range(double x) { return x >= 2.0 && !std::isnan(x); }

}  // namespace

bool schrodinger_admissible(double q, double r, int D, double tolerance) {
    if (!exponent_in_range(q) || !exponent_in_range(r)) return false;
    if (D == 2 && std::isinf(r)) return false;
    return std::abs(2.0 * reciprocal(q) + D * reciprocal(r) - 0.5 * D) <= tolerance;
}

WaveAdmissibility wave_admissible(double q, double r, double q_tilde, double r_tilde, double rho, int D,
                                  double tolerance) {
    if (D < 2) throw ContractViolation("wave admissibility: D must be at least 2");
    const double mu = D * (0.5 - reciprocal(r)) - reciprocal(q);
    const double mu_dual = 1.0 + rho - D * (0.5 - reciprocal(r_tilde)) + reciprocal(q_tilde);
    const auto pair_ok = [&](double a, double b) {
        return exponent_in_range(a) && exponent_in_range(b) && !std::isinf(b) &&
               std::abs(2.0 * reciprocal(a) + (D - 1) * reciprocal(b) - 0.5 * (D - 1)) <= tolerance;
    };
    const bool ok = pair_ok(q, r) && pair_ok(q_tilde, r_tilde) && std::abs(mu - mu_dual) <= tolerance;
    return {ok, mu, mu_dual};
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DegenerateInput("slope fit: needs at least two points");
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i]))
            throw DegenerateInput("slope fit: values must be positive and finite");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        sx += lx.back();
        sy += ly.back();
    }
    const double n = static_cast<double>(x.size());
    sx /= n;
    sy /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - sx) * (lx[i] - sx);
        sxy += (lx[i] - sx) * (ly[i] - sy);
    }
    if (sxx == 0.0) throw DegenerateInput("slope fit: abscissae coincide");
    return sxy / sxx;
}

SlopeReport time_localization_slope(const std::function<SpectralField(double)>& u, const Grid& grid, double s,
                                    double b, double b_prime, const std::vector<double>& ladder, Dispersion kind,
                                    int time_samples) {
    if (!(0.0 <= b_prime && b_prime <= b && b < 0.5))
        throw ContractViolation("time localization: requires 0 <= b' <= b < 1/2");
    SlopeReport out{ladder, {}, 0.0};
    for (double T : ladder) {
        const auto field = SpaceTimeField::sample(grid, rung_window(T, time_samples), u);
        const auto ext = interval_extension(field, T);
        const double high = bourgain_norm(ext, {s, b, kind});
        const double low = bourgain_norm(ext, {s, b_prime, kind});
        if (high == 0.0) throw DegenerateInput("time localization: zero field");
        out.ratio.push_back(low / high);
    }
    out.slope = fit_log_slope(out.T, out.ratio);
    return out;
}

}  // namespace kgs
