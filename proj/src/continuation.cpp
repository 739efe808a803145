#include "kgs/continuation.hpp"

#include <algorithm>
#include <limits>

namespace kgs {

int regime_dimension(Regime r) noexcept { return r == Regime::strichartz3d ? 3 : 2; }

const char* regime_name(Regime r) noexcept {
    switch (r) {
        case Regime::bourgain2d: return "bourgain2d";
        case Regime::strichartz2d: return "strichartz2d";
        case Regime::strichartz3d: return "strichartz3d";
    }
    return "unknown";
}

Regime parse_regime(const std::string& name) {
    for (Regime r : {Regime::bourgain2d, Regime::strichartz2d, Regime::strichartz3d})
        if (name == regime_name(r)) return r;
    throw ContractViolation("unknown regime: " + name);
}

ScheduleExponents exponents_for(double sigma, Regime regime, double epsilon) {
    if (!std::isfinite(sigma)) throw DomainError("exponents: sigma must be finite");
    switch (regime) {
        case Regime::bourgain2d:
            if (sigma < -0.5 || sigma >= 1.5) throw DomainError("exponents: bourgain2d needs sigma in [-1/2, 3/2)");
            if (sigma <= 0.0) return {0.5 + 0.5 * sigma - epsilon, 1.0 - epsilon};
            if (sigma <= 1.0) return {0.5 + 0.5 * sigma - epsilon, 1.0 - 0.5 * sigma - epsilon};
            return {1.0 - epsilon, 1.0 - 0.5 * sigma - epsilon};
        case Regime::strichartz2d:
            if (sigma < 0.0 || sigma > 1.0) throw DomainError("exponents: strichartz2d needs sigma in [0, 1]");
            return {0.5, 0.5};
        case Regime::strichartz3d:
            if (sigma < 0.0 || sigma > 1.0) throw DomainError("exponents: strichartz3d needs sigma in [0, 1]");
            return {0.75 - 0.5 * sigma, 0.25 + 0.5 * sigma};
    }
    throw DomainError("exponents: unknown regime");
}

void ContinuationParams::validate() const {
    if (!(u_norm >= 0.0) || !std::isfinite(u_norm)) throw ContractViolation("continuation: u_norm must be finite and >= 0");
    if (!(wave_norm > 0.0) || !std::isfinite(wave_norm))
        throw ContractViolation("continuation: wave_norm must be positive and finite");
    if (!(envelope_constant > 0.0) || !(constraint_constant > 0.0) || !(standing_factor >= 1.0))
        throw ContractViolation("continuation: calibration constants must be positive");
    exponents_for(sigma, regime, epsilon);
}

double source_exponent(const ContinuationParams& p) {
    const ScheduleExponents e = exponents_for(p.sigma, p.regime, p.epsilon);
    return e.k;
}

bool standing_assumption(const ContinuationParams& p) {
    const double power = p.regime == Regime::strichartz3d ? 3.0 : 2.0;
    return p.wave_norm >= p.standing_factor * (std::pow(p.u_norm, power) + 1.0);
}

std::vector<Constraint> step_constraints(const ContinuationParams& p, double T) {
    const ScheduleExponents e = exponents_for(p.sigma, p.regime, p.epsilon);
    const double c = p.constraint_constant;
    const double U = p.u_norm, W = p.wave_norm;
    switch (p.regime) {
        case Regime::bourgain2d:
            return {{"wave", std::pow(T, e.l) * W, c},
                    {"charge_l", std::pow(T, e.l) * U, c},
                    {"charge_k", std::pow(T, e.k) * U, c},
                    {"source", std::pow(T, e.k) * U * U, c * W},
                    {"unit", T, 1.0}};
        case Regime::strichartz2d:
            return {{"wave", std::sqrt(T) * W, c},
                    {"charge", std::sqrt(T) * U, c},
                    {"source", std::sqrt(T) * U * U, c * W},
                    {"unit", T, 1.0}};
        case Regime::strichartz3d:
            return {{"wave", std::pow(T, e.l) * W, c},
                    {"charge_l", std::pow(T, e.l) * U, c},
                    {"charge_k", std::pow(T, e.k) * U, c},
                    {"source", std::pow(T, 0.75 + 0.5 * p.sigma) * U * U, c * W},
                    {"unit", T, 1.0}};
    }
    return {};
}

namespace {

// Largest T with T^a x <= y, infinite when x == 0.
double power_bound(double a, double x, double y) {
    if (x <= 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(y / x, 1.0 / a);
}

}  // namespace

StepSelection select_T(const ContinuationParams& p) {
    p.validate();
    const ScheduleExponents e = exponents_for(p.sigma, p.regime, p.epsilon);
    const double c = p.constraint_constant;
    const double U = p.u_norm, W = p.wave_norm;
    double T = 1.0;
    switch (p.regime) {
        case Regime::bourgain2d:
        case Regime::strichartz3d: {
            const double source = p.regime == Regime::bourgain2d ? e.k : 0.75 + 0.5 * p.sigma;
            T = std::min({T, power_bound(e.l, W, c), power_bound(e.l, U, c), power_bound(e.k, U, c),
                          power_bound(source, U * U, c * W)});
            break;
        }
        case Regime::strichartz2d:
            T = std::min({T, power_bound(0.5, W, c), power_bound(0.5, U, c), power_bound(0.5, U * U, c * W)});
            break;
    }
    return {T, standing_assumption(p)};
}

SchedulePlan doubling_plan(const ContinuationParams& p) {
    const StepSelection sel = select_T(p);
    const double k = source_exponent(p);
    const double U = p.u_norm, W = p.wave_norm;
    const double growth = p.envelope_constant * std::pow(sel.T, k) * U * U;
    const double ratio = growth > 0.0 ? W / growth : std::numeric_limits<double>::infinity();
    if (!(ratio >= 1.0)) throw DegenerateInput("doubling plan: fewer than one leg per cycle");
    const double m = std::floor(ratio);
    const double lower = p.regime == Regime::bourgain2d ? std::min(std::pow(U, -(3.0 + kTotalTimeEpsilon)), 1.0)
                                                        : std::pow(U, -2.0);
    return {sel.T, m, m * sel.T, growth, W, sel.standing_assumption, lower};
}

namespace {

struct Norms {
    double u, plus, minus;
};

Norms measure(const FirstOrderState& s) {
    return {sobolev_norm(s.u, 0.0), sobolev_norm(s.n_plus, s.regularity.sigma),
            sobolev_norm(s.n_minus, s.regularity.sigma)};
}

}  // namespace

ContinuationReport run_continuation(const FirstOrderState& initial, double horizon, const ContinuationOptions& o) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ContractViolation("continuation: horizon must be positive");
    if (!(o.fallback_step > 0.0) || !(o.max_dt > 0.0)) throw ContractViolation("continuation: steps must be positive");
    if (initial.grid().dimension() != regime_dimension(o.regime))
        throw ContractViolation("continuation: grid dimension does not match the regime");
    const double sigma = initial.regularity.sigma;
    const double k = exponents_for(sigma, o.regime).k;
    const double source_k = o.regime == Regime::strichartz3d ? 0.75 - 0.5 * sigma : k;

    ContinuationReport rep{{}, horizon, 0, 0.0, 0, initial};
    FirstOrderState state = initial;
    const double charge0 = measure(initial).u;
    double t = 0.0;
    long cycle = -1, legs_left = 0;
    double cycle_T = 0.0;
    bool in_cycle = false;
    while (horizon - t > 1e-12 * horizon) {
        const Norms n = measure(state);
        const double W = n.plus + n.minus;
        if (legs_left == 0) {
            if (in_cycle) ++rep.cycles_completed;
            in_cycle = false;
            if (W > 0.0) {
                ContinuationParams p{n.u, W, sigma, o.regime, o.envelope_constant, o.constraint_constant,
                                     o.standing_factor};
                if (standing_assumption(p)) {
                    const SchedulePlan plan = doubling_plan(p);
                    in_cycle = true;
                    ++cycle;
                    legs_left = static_cast<long>(std::min(plan.m, 1e15));
                    cycle_T = plan.T;
                }
            }
        }
        const double T = in_cycle ? cycle_T : o.fallback_step;
        const double len = std::min(T, horizon - t);
        const long steps = std::max(1L, static_cast<long>(std::ceil(len / o.max_dt - 1e-9)));
        IntegratorOptions io = o.integrator;
        io.state_stride = steps;
        const Trajectory tr = simulate(state, TimeGrid::covering(len, steps), io);

        Leg leg{t, len, in_cycle ? cycle : -1, in_cycle, n.u, W, n.plus, n.minus, 0.0, 0.0, 0.0, 0.0,
                tr.charge_drift(), false};
        for (const auto& d : tr.diagnostics) {
            leg.plus_max = std::max(leg.plus_max, d.wave_plus_norm);
            leg.minus_max = std::max(leg.minus_max, d.wave_minus_norm);
            if (charge0 > 0.0) rep.charge_drift = std::max(rep.charge_drift, std::abs(d.charge - charge0) / charge0);
        }
        const double growth = o.envelope_constant * std::pow(len, source_k) * n.u * n.u;
        leg.envelope_plus = n.plus + growth;
        leg.envelope_minus = n.minus + growth;
        const double slack = 1e-12 * std::max(1.0, W);
        leg.flagged = leg.plus_max > leg.envelope_plus + slack || leg.minus_max > leg.envelope_minus + slack;
        if (leg.flagged) ++rep.flagged_legs;
        rep.legs.push_back(leg);

        state = tr.states.back();
        t += len;
        if (in_cycle) --legs_left;
    }
    if (in_cycle && legs_left == 0) ++rep.cycles_completed;
    rep.final_state = state;
    return rep;
}

WaveBoundReport wave_norm_bound_3d(const Trajectory& tr, double sigma, double T, double constant, double epsilon) {
    if (tr.states.size() < 2) throw ContractViolation("wave bound: trajectory needs stored states");
    const FirstOrderState& first = tr.states.front();
    if (first.grid().dimension() != 3) throw UnsupportedDimension("wave bound: three-dimensional trajectory required");
    if (!(sigma > -0.5 && sigma < 0.0)) throw DomainError("wave bound: sigma must lie in (-1/2, 0)");
    if (!(T > 0.0) || T > tr.state_times.back() * (1.0 + 1e-12))
        throw ContractViolation("wave bound: T must lie inside the trajectory");

    const SecondOrderState s0 = to_second_order(first);
    WaveBoundReport r{T, 0.0, sobolev_norm(s0.n, sigma) + sobolev_norm(s0.dt_n, sigma - 1.0), 0.0, 0.0, constant, 0.0};
    // |u|^2 in L^{q'}_t L^1_x with q' = 2/(1 + 2 eps); ||u(t)||_{L^2}^2 is its L^1 norm.
    const double qp = 2.0 / (1.0 + 2.0 * epsilon);
    double integral = 0.0, prev = 0.0, prev_t = 0.0;
    for (std::size_t j = 0; j < tr.states.size(); ++j) {
        const double t = tr.state_times[j];
        if (t > T * (1.0 + 1e-12)) break;
        const FirstOrderState& s = tr.states[j];
        const SpectralField n = wave_average(s.n_plus, s.n_minus);
        r.lhs = std::max(r.lhs, sobolev_norm(n, sigma));
        const FirstOrderState free = free_evolution(first, t);
        const SpectralField nf = wave_average(free.n_plus, free.n_minus);
        r.duhamel_contribution = std::max(r.duhamel_contribution, sobolev_norm(n - nf, sigma));
        const double m = std::pow(sobolev_norm(s.u, 0.0), 2.0 * qp);
        if (j > 0) integral += 0.5 * (t - prev_t) * (m + prev);
        prev = m;
        prev_t = t;
    }
    r.source_term = std::pow(integral, 1.0 / qp);
    r.margin = r.data_term + constant * r.source_term - r.lhs;
    return r;
}

}  // namespace kgs
