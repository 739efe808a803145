#include "kgs/evolution.hpp"

#include <algorithm>

#include "kgs/fft.hpp"

namespace kgs {
namespace {

using Vec = std::vector<complex>;

struct Packed {
    Vec u, p, m;
};

Packed pack(const FirstOrderState& s) {
    const auto copy = [](const SpectralField& f) {
        const SpectralField spec = f.to_spectral();
        return Vec(spec.values().begin(), spec.values().end());
    };
    return {copy(s.u), copy(s.n_plus), copy(s.n_minus)};
}

FirstOrderState unpack(const Grid& g, Packed v, const Regularity& r) {
    return {SpectralField(g, std::move(v.u), Representation::spectral),
            SpectralField(g, std::move(v.p), Representation::spectral),
            SpectralField(g, std::move(v.m), Representation::spectral), r};
}

bool finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

void check_grids(const FirstOrderState& s) {
    if (!(s.u.grid() == s.n_plus.grid()) || !(s.u.grid() == s.n_minus.grid()))
        throw ContractViolation("evolution: components live on different grids");
}

// Spectral-space kernels shared by the integrator, the Picard iteration and
// the residual oracle.
class Engine {
public:
    Engine(const Grid& g, const CouplingSigns& signs, const Regularity& reg)
        : grid_(g), signs_(signs), xi2_(g.size()), bracket_(g.size()), band_(g.size()), ws_(g.size()), wsig_(g.size()),
          pu_(g.size()), pn_(g.size()) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            xi2_[i] = g.xi_squared(i);
            bracket_[i] = std::sqrt(1.0 + xi2_[i]);
            band_[i] = in_dealiased_band(g, i);
            ws_[i] = std::pow(1.0 + xi2_[i], reg.s);
            wsig_[i] = std::pow(1.0 + xi2_[i], reg.sigma);
        }
    }

    std::size_t size() const noexcept { return xi2_.size(); }

    // out = N(v)
    void nonlinear(const Packed& v, Packed& out) {
        const std::size_t n = size();
        const auto ext = grid_.extents();
        for (std::size_t i = 0; i < n; ++i) {
            pu_[i] = v.u[i];
            pn_[i] = 0.5 * (v.p[i] + v.m[i]);
        }
        fft::backward(pu_, ext);
        fft::backward(pn_, ext);
        for (std::size_t i = 0; i < n; ++i) {
            pn_[i] *= pu_[i];
            pu_[i] = std::norm(pu_[i]);
        }
        fft::forward_normalized(pn_, ext);
        fft::forward_normalized(pu_, ext);
        out.u.resize(n);
        out.p.resize(n);
        out.m.resize(n);
        const complex cu(0.0, -signs_.schrodinger);
        const complex cw(0.0, signs_.wave);
        for (std::size_t i = 0; i < n; ++i) {
            if (!band_[i]) {
                out.u[i] = out.p[i] = out.m[i] = 0.0;
                continue;
            }
            out.u[i] = cu * pn_[i];
            const complex src = cw * (pu_[i] / bracket_[i]);
            out.p[i] = src;
            out.m[i] = -src;
        }
    }

    // Phase tables of E(t): u factor exp(-i t |xi|^2), n+ factor exp(-i t <xi>).
    void phases(double t, Vec& eu, Vec& ew) const {
        eu.resize(size());
        ew.resize(size());
        for (std::size_t i = 0; i < size(); ++i) {
            eu[i] = std::polar(1.0, -t * xi2_[i]);
            ew[i] = std::polar(1.0, -t * bracket_[i]);
        }
    }

    static void apply(Packed& v, const Vec& eu, const Vec& ew, bool inverse = false) {
        for (std::size_t i = 0; i < eu.size(); ++i) {
            const complex a = inverse ? std::conj(eu[i]) : eu[i];
            const complex w = inverse ? std::conj(ew[i]) : ew[i];
            v.u[i] *= a;
            v.p[i] *= w;
            v.m[i] *= std::conj(w);
        }
    }

    Diagnostics diagnose(const Packed& v, double t) const {
        double c = 0.0, hs = 0.0, hp = 0.0, hm = 0.0;
        for (std::size_t i = 0; i < size(); ++i) {
            const double a = std::norm(v.u[i]);
            c += a;
            hs += ws_[i] * a;
            hp += wsig_[i] * std::norm(v.p[i]);
            hm += wsig_[i] * std::norm(v.m[i]);
        }
        const double vol = grid_.volume();
        return {t, std::sqrt(c * vol), std::sqrt(hs * vol), std::sqrt(hp * vol), std::sqrt(hm * vol)};
    }

private:
    Grid grid_;
    CouplingSigns signs_;
    std::vector<double> xi2_, bracket_;
    std::vector<char> band_;
    std::vector<double> ws_, wsig_;
    Vec pu_, pn_;
};

double packed_norm2(const Packed& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.u.size(); ++i) s += std::norm(v.u[i]) + std::norm(v.p[i]) + std::norm(v.m[i]);
    return s;
}

// Implicit midpoint in the interaction picture. With a = E(h/2) v_n the
// midpoint value solves v_mid = a + (h/2) N(v_mid) and v_{n+1} = E(h/2)(2 v_mid - a).
class Stepper {
public:
    Stepper(const Grid& g, double h, const IntegratorOptions& opt, const Regularity& reg)
        : engine_(g, opt.signs, reg), h_(h), opt_(opt) {
        if (opt.sweeps < 0) throw ContractViolation("evolution: sweeps must be nonnegative");
        engine_.phases(0.5 * h, eu_, ew_);
    }

    Engine& engine() noexcept { return engine_; }

    void advance(Packed& v) {
        Engine::apply(v, eu_, ew_);
        const Packed& a = v;
        const std::size_t n = engine_.size();
        engine_.nonlinear(a, nl_);
        mid_ = a;
        axpy(mid_, a, 0.5 * h_, nl_);
        for (int k = 0; k < opt_.sweeps; ++k) {
            engine_.nonlinear(mid_, nl_);
            double change = 0.0;
            if (opt_.sweep_tolerance > 0.0) {
                for (std::size_t i = 0; i < n; ++i) {
                    change += std::norm(a.u[i] + 0.5 * h_ * nl_.u[i] - mid_.u[i]) +
                              std::norm(a.p[i] + 0.5 * h_ * nl_.p[i] - mid_.p[i]) +
                              std::norm(a.m[i] + 0.5 * h_ * nl_.m[i] - mid_.m[i]);
                }
            }
            axpy(mid_, a, 0.5 * h_, nl_);
            if (opt_.sweep_tolerance > 0.0 &&
                std::sqrt(change) <= opt_.sweep_tolerance * std::sqrt(packed_norm2(mid_)))
                break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            v.u[i] = 2.0 * mid_.u[i] - v.u[i];
            v.p[i] = 2.0 * mid_.p[i] - v.p[i];
            v.m[i] = 2.0 * mid_.m[i] - v.m[i];
        }
        Engine::apply(v, eu_, ew_);
    }

private:
    // out = a + c * b
    static void axpy(Packed& out, const Packed& a, double c, const Packed& b) {
        for (std::size_t i = 0; i < a.u.size(); ++i) {
            out.u[i] = a.u[i] + c * b.u[i];
            out.p[i] = a.p[i] + c * b.p[i];
            out.m[i] = a.m[i] + c * b.m[i];
        }
    }

    Engine engine_;
    double h_;
    IntegratorOptions opt_;
    Vec eu_, ew_;
    Packed nl_, mid_;
};

void record(Trajectory& tr, const Engine& e, const Packed& v, double t, long k, const Grid& g, const Regularity& r) {
    tr.diagnostics.push_back(e.diagnose(v, t));
    if (k % tr.state_stride == 0) {
        tr.states.push_back(unpack(g, v, r));
        tr.state_times.push_back(t);
    }
}

}  // namespace

TimeGrid::TimeGrid(double dt_, long steps_) : dt(dt_), steps(steps_) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractViolation("time grid: dt must be positive");
    if (steps <= 0) throw ContractViolation("time grid: steps must be positive");
}

double default_dt(const Grid& grid) { return 0.5 * grid.spacing() * grid.spacing(); }

double Trajectory::charge_drift() const {
    if (diagnostics.empty() || diagnostics.front().charge == 0.0) return 0.0;
    const double c0 = diagnostics.front().charge;
    double worst = 0.0;
    for (const auto& d : diagnostics) worst = std::max(worst, std::abs(d.charge / c0 - 1.0));
    return worst;
}

Diagnostics diagnose(const FirstOrderState& state, double time) {
    check_grids(state);
    return Engine(state.grid(), {}, state.regularity).diagnose(pack(state), time);
}

SpectralField coupling_schrodinger(const SpectralField& u, const SpectralField& n_plus, const SpectralField& n_minus) {
    if (!(u.grid() == n_plus.grid()) || !(u.grid() == n_minus.grid()))
        throw ContractViolation("coupling: grid mismatch");
    return dealiased_product(wave_average(n_plus, n_minus), u);
}

SpectralField coupling_wave(const SpectralField& u, WaveSign sign) {
    SpectralField sq = u.to_physical();
    for (auto& v : sq.values()) v = std::norm(v);
    SpectralField s = transform(sq, Direction::to_spectral);
    dealias_in_place(s);
    s = half_wave_power(s, -0.5);
    s *= sign_value(sign);
    return s;
}

FirstOrderState step(const FirstOrderState& state, double dt, const IntegratorOptions& options) {
    check_grids(state);
    if (!(dt > 0.0)) throw ContractViolation("step: dt must be positive");
    Packed v = pack(state);
    if (!finite(v.u) || !finite(v.p) || !finite(v.m)) throw IntegrationFailure("step: non-finite input state", 0, 0.0);
    Stepper(state.grid(), dt, options, state.regularity).advance(v);
    if (!finite(v.u) || !finite(v.p) || !finite(v.m)) throw IntegrationFailure("step: non-finite state", 1, dt);
    return unpack(state.grid(), std::move(v), state.regularity);
}

Trajectory simulate(const FirstOrderState& initial, const TimeGrid& tg, const IntegratorOptions& options) {
    check_grids(initial);
    if (options.state_stride <= 0) throw ContractViolation("simulate: state stride must be positive");
    const Grid& g = initial.grid();
    Packed v = pack(initial);
    if (!finite(v.u) || !finite(v.p) || !finite(v.m)) throw IntegrationFailure("simulate: non-finite initial state", 0, 0.0);
    Stepper stepper(g, tg.dt, options, initial.regularity);
    Trajectory tr;
    tr.state_stride = options.state_stride;
    tr.diagnostics.reserve(static_cast<std::size_t>(tg.steps) + 1);
    record(tr, stepper.engine(), v, 0.0, 0, g, initial.regularity);
    for (long k = 1; k <= tg.steps; ++k) {
        stepper.advance(v);
        if (!finite(v.u) || !finite(v.p) || !finite(v.m))
            throw IntegrationFailure("simulate: non-finite state", k, tg.time(k));
        record(tr, stepper.engine(), v, tg.time(k), k, g, initial.regularity);
    }
    return tr;
}

FirstOrderState free_evolution(const FirstOrderState& state, double t) {
    check_grids(state);
    return {free_schrodinger(state.u, t), free_half_wave(state.n_plus, t, WaveSign::plus),
            free_half_wave(state.n_minus, t, WaveSign::minus), state.regularity};
}

Trajectory picard_iterate(int order, const FirstOrderState& initial, const TimeGrid& tg, const CouplingSigns& signs,
                          long state_stride) {
    if (order < 1 || order > 3) throw ContractViolation("picard: order must be 1, 2 or 3");
    if (state_stride <= 0) throw ContractViolation("picard: state stride must be positive");
    check_grids(initial);
    const Grid& g = initial.grid();
    Engine engine(g, signs, initial.regularity);
    const Packed v0 = pack(initial);
    const std::size_t n = engine.size();
    const Packed zero{Vec(n), Vec(n), Vec(n)};

    // integral[j] accumulates the interaction-picture Duhamel integral of N(v_{j+1}).
    std::vector<Packed> integral(static_cast<std::size_t>(order - 1), zero);
    std::vector<Packed> previous(static_cast<std::size_t>(order - 1), zero);
    Trajectory tr;
    tr.state_stride = state_stride;
    Vec eu, ew;
    Packed v, nl;
    for (long k = 0; k <= tg.steps; ++k) {
        const double t = tg.time(k);
        engine.phases(t, eu, ew);
        for (int j = 0; j < order; ++j) {
            v = v0;
            if (j > 0) {
                const Packed& I = integral[static_cast<std::size_t>(j - 1)];
                for (std::size_t i = 0; i < n; ++i) {
                    v.u[i] += I.u[i];
                    v.p[i] += I.p[i];
                    v.m[i] += I.m[i];
                }
            }
            Engine::apply(v, eu, ew);
            if (j == order - 1) break;
            engine.nonlinear(v, nl);
            Engine::apply(nl, eu, ew, true);
            Packed& I = integral[static_cast<std::size_t>(j)];
            Packed& J = previous[static_cast<std::size_t>(j)];
            if (k > 0) {
                const double w = 0.5 * tg.dt;
                for (std::size_t i = 0; i < n; ++i) {
                    I.u[i] += w * (J.u[i] + nl.u[i]);
                    I.p[i] += w * (J.p[i] + nl.p[i]);
                    I.m[i] += w * (J.m[i] + nl.m[i]);
                }
            }
            J = nl;
        }
        record(tr, engine, v, t, k, g, initial.regularity);
    }
    return tr;
}

double duhamel_residual(const Trajectory& trajectory, const CouplingSigns& signs) {
    if (trajectory.state_stride != 1 || trajectory.states.size() < 2)
        throw ContractViolation("residual: needs every step of the trajectory");
    const FirstOrderState& first = trajectory.states.front();
    const Grid& g = first.grid();
    Engine engine(g, signs, first.regularity);
    const Packed v0 = pack(first);
    const std::size_t n = engine.size();
    Packed I{Vec(n), Vec(n), Vec(n)}, J, nl, expected;
    Vec eu, ew;
    double worst = 0.0;
    for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
        const double t = trajectory.state_times[k];
        const Packed v = pack(trajectory.states[k]);
        engine.phases(t, eu, ew);
        engine.nonlinear(v, nl);
        Engine::apply(nl, eu, ew, true);
        if (k > 0) {
            const double w = 0.5 * (t - trajectory.state_times[k - 1]);
            for (std::size_t i = 0; i < n; ++i) {
                I.u[i] += w * (J.u[i] + nl.u[i]);
                I.p[i] += w * (J.p[i] + nl.p[i]);
                I.m[i] += w * (J.m[i] + nl.m[i]);
            }
        }
        J = nl;
        expected = v0;
        for (std::size_t i = 0; i < n; ++i) {
            expected.u[i] += I.u[i];
            expected.p[i] += I.p[i];
            expected.m[i] += I.m[i];
        }
        Engine::apply(expected, eu, ew);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            diff += std::norm(expected.u[i] - v.u[i]) + std::norm(expected.p[i] - v.p[i]) +
                    std::norm(expected.m[i] - v.m[i]);
        const double scale = packed_norm2(v);
        if (scale > 0.0) worst = std::max(worst, std::sqrt(diff / scale));
    }
    return worst;
}

double state_distance(const FirstOrderState& a, const FirstOrderState& b) {
    const Packed pa = pack(a), pb = pack(b);
    double diff = 0.0;
    for (std::size_t i = 0; i < pa.u.size(); ++i)
        diff += std::norm(pa.u[i] - pb.u[i]) + std::norm(pa.p[i] - pb.p[i]) + std::norm(pa.m[i] - pb.m[i]);
    const double scale = packed_norm2(pb);
    return scale == 0.0 ? std::sqrt(diff) : std::sqrt(diff / scale);
}

}  // namespace kgs
