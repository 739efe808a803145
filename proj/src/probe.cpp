#include <algorithm>
#include <random>
#include <thread>

#include "kgs/cutoff.hpp"
#include "kgs/estimates.hpp"
#include "kgs/fft.hpp"

namespace kgs {
namespace {

double dispersion_frequency(Dispersion kind, double xi2) {
    switch (kind) {
        case Dispersion::schrodinger: return xi2;
        case Dispersion::wave_plus: return std::sqrt(1.0 + xi2);
        case Dispersion::wave_minus: break;
    }
    return -std::sqrt(1.0 + xi2);
}

// |time spectrum|^2 of every mode, reused across exponent pairs.
struct ModalSpectrum {
    std::vector<double> xi2;
    std::vector<std::vector<double>> power;
    TimeWindow window;
    double volume;
};

ModalSpectrum spectrum(const ModalField& f) {
    ModalSpectrum out{{}, {}, f.window, std::pow(f.period, f.dimension) * f.window.length};
    const std::array<int, 1> ext{f.window.samples};
    std::vector<complex> buf;
    for (const auto& [k, series] : f.series) {
        buf.assign(series.begin(), series.end());
        fft::forward_normalized(buf, ext);
        std::vector<double> p(buf.size());
        for (std::size_t l = 0; l < buf.size(); ++l) p[l] = std::norm(buf[l]);
        out.xi2.push_back(f.xi_squared(k));
        out.power.push_back(std::move(p));
    }
    return out;
}

double norm_of(const ModalSpectrum& sp, double s, double b, Dispersion kind) {
    double sum = 0.0;
    for (std::size_t j = 0; j < sp.xi2.size(); ++j) {
        double row = 0.0;
        const auto& p = sp.power[j];
        for (int l = 0; l < sp.window.samples; ++l) {
            const double m = modulation(kind, sp.window.tau(l), sp.xi2[j]);
            row += std::pow(1.0 + m * m, b) * p[static_cast<std::size_t>(l)];
        }
        sum += std::pow(1.0 + sp.xi2[j], s) * row;
    }
    return std::sqrt(sum * sp.volume);
}

}  // namespace

ModalField ModalField::windowed_free(const std::map<Mode, complex>& coefficients, int dimension, double period,
                                     const TimeWindow& window, Dispersion kind) {
    if (dimension != 2 && dimension != 3) throw UnsupportedDimension("modal field: dimension must be 2 or 3");
    ModalField f{dimension, period, window, {}};
    std::vector<double> chi(static_cast<std::size_t>(window.samples));
    for (int k = 0; k < window.samples; ++k) chi[static_cast<std::size_t>(k)] = window_cutoff(window, window.time(k));
    for (const auto& [k, c] : coefficients) {
        const double w = dispersion_frequency(kind, f.xi_squared(k));
        std::vector<complex> s(chi.size());
        for (int j = 0; j < window.samples; ++j)
            s[static_cast<std::size_t>(j)] = c * chi[static_cast<std::size_t>(j)] * std::polar(1.0, -w * window.time(j));
        f.series.emplace(k, std::move(s));
    }
    return f;
}

double ModalField::xi_squared(const Mode& k) const noexcept {
    const double d = 2.0 * M_PI / period;
    double sum = 0.0;
    for (int a = 0; a < dimension; ++a) sum += d * k[a] * d * k[a];
    return sum;
}

SpaceTimeField ModalField::to_dense(const Grid& grid) const {
    if (grid.dimension() != dimension || grid.period() != period)
        throw ContractViolation("modal field: grid does not match");
    SpaceTimeField out(grid, window, Representation::spectral);
    const int m = grid.points();
    const std::array<int, 1> ext{window.samples};
    std::vector<complex> buf;
    for (const auto& [k, s] : series) {
        for (int a = 0; a < dimension; ++a)
            if (k[a] < -m / 2 || k[a] >= m / 2) throw ContractViolation("modal field: mode outside the grid");
        buf.assign(s.begin(), s.end());
        fft::forward_normalized(buf, ext);
        const std::size_t i = grid.linear_from_modes(k);
        for (int l = 0; l < window.samples; ++l) out[static_cast<std::size_t>(l) * grid.size() + i] = buf[static_cast<std::size_t>(l)];
    }
    return out;
}

ModalField product(const ModalField& a, const ModalField& b, bool conjugate_second) {
    if (a.dimension != b.dimension || a.period != b.period || !(a.window == b.window))
        throw ContractViolation("modal product: incompatible fields");
    ModalField out{a.dimension, a.period, a.window, {}};
    const std::size_t nt = static_cast<std::size_t>(a.window.samples);
    for (const auto& [ka, sa] : a.series) {
        for (const auto& [kb, sb] : b.series) {
            ModalField::Mode k{};
            for (int d = 0; d < a.dimension; ++d) k[d] = conjugate_second ? ka[d] - kb[d] : ka[d] + kb[d];
            auto [it, fresh] = out.series.try_emplace(k, nt, complex{});
            auto& dst = it->second;
            if (conjugate_second)
                for (std::size_t j = 0; j < nt; ++j) dst[j] += sa[j] * std::conj(sb[j]);
            else
                for (std::size_t j = 0; j < nt; ++j) dst[j] += sa[j] * sb[j];
        }
    }
    return out;
}

double bourgain_norm(const ModalField& f, const BourgainSpec& spec) {
    spec.validate();
    return norm_of(spectrum(f), spec.regularity, spec.b, spec.kind);
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

using Coefficients = std::map<ModalField::Mode, complex>;

// Gaussian coefficients on the box center + [-r, r] x [-t, t] (x [-t, t]).
Coefficients random_box(std::mt19937_64& rng, int dim, int center, int radial, int transverse) {
    std::normal_distribution<double> normal;
    Coefficients c;
    const int tz = dim == 3 ? transverse : 0;
    for (int i = -radial; i <= radial; ++i)
        for (int j = -transverse; j <= transverse; ++j)
            for (int l = -tz; l <= tz; ++l) c[{center + i, j, l}] = complex{normal(rng), normal(rng)};
    return c;
}

struct LevelGeometry {
    double frequency;  // N in wavenumber units
    int wave_center;   // column of n, at -N e1
    int resonant_column;
    int radial;
    int transverse;
};

LevelGeometry geometry(int refinement, const EnsembleSpec& e) {
    const double d = 2.0 * M_PI / e.period;
    const int k = refinement / 4;
    const double n = d * k;
    // Output of u at (a, y) times n at -N e1 is resonant when
    // 2 a N = N^2 - <N>.
    const double a = (n * n - bracket(n)) / (2.0 * n);
    // Boxes of width 1/N across the resonant line and 1 along it.
    const int radial = std::max(0, static_cast<int>(std::floor(0.5 / (n * d))));
    const int transverse = std::max(1, static_cast<int>(std::lround(0.5 / d)));
    return {n, -k, static_cast<int>(std::lround(a / d)), std::min(radial, k / 4), transverse};
}

struct SampleRatios {
    std::vector<double> schrodinger;
    std::vector<double> wave_output;
};

SampleRatios sample_ratios(const LevelGeometry& geo, const EnsembleSpec& e, const std::vector<ExponentPair>& pairs,
                           double b_in, double b_out, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const TimeWindow w{0.0, e.window_length, e.time_samples};
    const int dim = e.dimension;
    const int k = -geo.wave_center;
    const auto u = ModalField::windowed_free(random_box(rng, dim, geo.resonant_column, geo.radial, geo.transverse), dim,
                                             e.period, w, Dispersion::schrodinger);
    const auto n = ModalField::windowed_free(random_box(rng, dim, geo.wave_center, geo.radial, geo.transverse), dim,
                                             e.period, w, Dispersion::wave_plus);
    const auto u1 = ModalField::windowed_free(random_box(rng, dim, k, geo.radial, geo.transverse), dim, e.period, w,
                                              Dispersion::schrodinger);
    const auto u2 = ModalField::windowed_free(random_box(rng, dim, k, geo.radial, geo.transverse), dim, e.period, w,
                                              Dispersion::schrodinger);
    const ModalSpectrum su = spectrum(u), sn = spectrum(n), su1 = spectrum(u1), su2 = spectrum(u2);
    const ModalSpectrum sun = spectrum(product(u, n));
    const ModalSpectrum sf = spectrum(product(u1, u2, true));
    SampleRatios r;
    for (const auto& p : pairs) {
        r.schrodinger.push_back(norm_of(sun, p.s, b_out, Dispersion::schrodinger) /
                                (norm_of(su, p.s, b_in, Dispersion::schrodinger) *
                                 norm_of(sn, p.sigma, b_in, Dispersion::wave_plus)));
        r.wave_output.push_back(norm_of(sf, p.sigma - 1.0, b_out, Dispersion::wave_plus) /
                                (norm_of(su1, p.s, b_in, Dispersion::schrodinger) *
                                 norm_of(su2, p.s, b_in, Dispersion::schrodinger)));
    }
    return r;
}

}  // namespace

std::vector<RatioReport> threshold_scan(const std::vector<ExponentPair>& exponents, const std::vector<int>& refinements,
                                        const EnsembleSpec& ensemble, int workers) {
    if (exponents.empty() || refinements.size() < 2) throw ContractViolation("scan: needs exponents and two levels");
    if (!std::is_sorted(refinements.begin(), refinements.end(), std::less_equal<>{}))
        throw ContractViolation("scan: refinements must be strictly increasing");
    if (ensemble.samples < 1) throw ContractViolation("scan: sample count must be positive");
    const double b_in = ensemble.b_in;
    const double b_out = ensemble.b_out;
    std::vector<RatioReport> reports;
    for (const auto& p : exponents)
        reports.push_back({p, b_in, b_out, refinements, {}, {}, {}, 0.0, std::nullopt, ensemble.samples, ensemble.seed});

    workers = std::max(1, workers);
    for (std::size_t level = 0; level < refinements.size(); ++level) {
        const int m = refinements[level];
        if (m < 16 || (m & (m - 1)) != 0) throw ContractViolation("scan: refinements must be powers of two >= 16");
        const LevelGeometry geo = geometry(m, ensemble);
        std::vector<SampleRatios> results(static_cast<std::size_t>(ensemble.samples));
        auto run = [&](int first) {
            for (int j = first; j < ensemble.samples; j += workers) {
                const std::uint64_t seed = splitmix(ensemble.seed ^ splitmix(static_cast<std::uint64_t>(m) * 1000003ULL + j));
                results[static_cast<std::size_t>(j)] = sample_ratios(geo, ensemble, exponents, b_in, b_out, seed);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < workers; ++t) pool.emplace_back(run, t);
        run(0);
        for (auto& t : pool) t.join();
        for (std::size_t e = 0; e < exponents.size(); ++e) {
            double a = 0.0, b = 0.0;
            for (const auto& r : results) {
                a = std::max(a, r.schrodinger[e]);
                b = std::max(b, r.wave_output[e]);
            }
            reports[e].frequency.push_back(geo.frequency);
            reports[e].sup_schrodinger.push_back(a);
            reports[e].sup_wave_output.push_back(b);
        }
    }
    for (auto& r : reports) {
        r.growth_factor = std::max(r.sup_schrodinger.back() / r.sup_schrodinger.front(),
                                   r.sup_wave_output.back() / r.sup_wave_output.front());
        if (r.frequency.size() >= 3)
            r.growth_exponent = std::max(fit_log_slope(r.frequency, r.sup_schrodinger),
                                         fit_log_slope(r.frequency, r.sup_wave_output));
    }
    return reports;
}

namespace {

SpectralField packet(const Grid& g, const std::array<double, 3>& xi0, double width, double s, double norm) {
    const double half = 0.5 * g.period();
    SpectralField f = SpectralField::from_function(g, [&](const std::array<double, 3>& x) {
        double r2 = 0.0, phase = 0.0;
        for (int a = 0; a < g.dimension(); ++a) {
            r2 += (x[a] - half) * (x[a] - half);
            phase += xi0[a] * x[a];
        }
        return std::polar(std::exp(-0.5 * r2 / (width * width)), phase);
    });
    SpectralField spec = f.to_spectral();
    dealias_in_place(spec);
    spec *= norm / sobolev_norm(spec, s);
    return spec;
}

}  // namespace

FirstOrderState concentrated_data(const ProbeSpec& spec, double lambda, const ExponentPair& exponents) {
    const Grid g(2, spec.points, spec.period);
    if (!(lambda > 0.0)) throw ContractViolation("probe: frequency must be positive");
    if (lambda + 4.0 / spec.width > g.wavenumber(g.points() / 3))
        throw ContractViolation("probe: packet does not fit in the dealiased band");
    const SpectralField u = packet(g, {lambda, 0.0, 0.0}, spec.width, exponents.s, spec.amplitude);
    const SpectralField n = packet(g, {0.0, 1.0, 0.0}, spec.width, exponents.sigma, spec.amplitude);
    return {u, n, n, {exponents.s, exponents.sigma}};
}

FirstOrderState second_order_part(const FirstOrderState& data, const ProbeSpec& spec) {
    const long steps = std::max(1L, std::lround(spec.t_end / spec.dt));
    const TimeGrid tg = TimeGrid::covering(spec.t_end, steps);
    const Trajectory tr = picard_iterate(2, data, tg, {}, steps);
    const FirstOrderState free = free_evolution(data, tg.t_end());
    const FirstOrderState& last = tr.states.back();
    return {last.u - free.u, last.n_plus - free.n_plus, last.n_minus - free.n_minus, data.regularity};
}

ProbeReport picard_c2_probe(const std::vector<double>& lambda, const ExponentPair& exponents, const ProbeSpec& spec) {
    if (lambda.size() < 2) throw ContractViolation("probe: needs at least two frequencies");
    ProbeReport r{exponents, lambda, {}, {}, 0.0, 0.0, 0.0};
    for (double l : lambda) {
        const FirstOrderState d = second_order_part(concentrated_data(spec, l, exponents), spec);
        r.schrodinger_term.push_back(sobolev_norm(d.u, exponents.s));
        r.wave_term.push_back(sobolev_norm(d.n_plus, exponents.sigma) + sobolev_norm(d.n_minus, exponents.sigma));
    }
    r.schrodinger_power = fit_log_slope(lambda, r.schrodinger_term);
    r.wave_power = fit_log_slope(lambda, r.wave_term);
    r.power = std::max(r.schrodinger_power, r.wave_power);
    return r;
}

}  // namespace kgs
