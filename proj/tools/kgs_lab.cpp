// kgs_lab: configuration-driven experiments for the Klein-Gordon-Schrödinger lab.
//
//   kgs_lab simulate     --config run.json --out results/
//   kgs_lab probe        --config scan.json --workers 4
//   kgs_lab continuation --config plan.json
//   kgs_lab decompose    --config decompose.json
//   kgs_lab selftest
//
// Every command writes its outputs and a manifest.json into the output
// directory and exits 0 only when all of its checks pass.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "kgs/decomposition.hpp"
#include "lab_config.hpp"
#include "lab_output.hpp"

namespace {

using namespace kgs;
using lab::Csv;
using lab::json;
using lab::number;
using lab::Run;

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

json to_json(const std::vector<double>& v) { return json(v); }

FirstOrderState simulate_data(const lab::ExperimentConfig& c, double u_norm, double wave_norm, double sigma) {
    const auto& m = c.simulate;
    auto state = gaussian_state(c.grid.grid(), u_norm, wave_norm, sigma, m.u_packet, m.n_packet);
    state.regularity.s = m.s;
    return state;
}

void cmd_simulate(const lab::ExperimentConfig& c, Run& run) {
    const auto& m = c.simulate;
    const Grid grid = c.grid.grid();
    const auto state = simulate_data(c, m.u_norm, m.wave_norm, m.sigma);
    const TimeGrid tg(m.dt.value_or(default_dt(grid)), m.steps);
    const auto tr = simulate(state, tg, {.state_stride = m.steps});

    Csv csv({"t (time)", "charge (L2 norm of u)", "u (H^s norm, s=" + number(m.s) + ")",
             "n_plus (H^sigma norm, sigma=" + number(m.sigma) + ")",
             "n_minus (H^sigma norm, sigma=" + number(m.sigma) + ")"});
    bool finite = true;
    for (const auto& d : tr.diagnostics) {
        csv.row(std::vector<double>{d.time, d.charge, d.schrodinger_norm, d.wave_plus_norm, d.wave_minus_norm});
        finite = finite && std::isfinite(d.charge) && std::isfinite(d.wave_plus_norm) && std::isfinite(d.wave_minus_norm);
    }
    run.write("trajectory.csv", csv.str());

    const double drift = tr.charge_drift();
    run.check("finite_diagnostics", finite, "every diagnostic is finite");
    run.check("charge_conservation", drift <= m.charge_tolerance,
              "relative charge drift " + format("%.3e", drift) + " <= " + format("%.1e", m.charge_tolerance));
}

json ratio_json(const RatioReport& r) {
    json j{{"s", r.exponents.s},
           {"sigma", r.exponents.sigma},
           {"b_in", r.b_in},
           {"b_out", r.b_out},
           {"refinements", r.refinements},
           {"frequency", to_json(r.frequency)},
           {"sup_schrodinger", to_json(r.sup_schrodinger)},
           {"sup_wave_output", to_json(r.sup_wave_output)},
           {"growth_factor", r.growth_factor},
           {"samples", r.samples},
           {"seed", r.seed}};
    j["growth_exponent"] = r.growth_exponent ? json(*r.growth_exponent) : json(nullptr);
    return j;
}

void cmd_probe_scan(const lab::ExperimentConfig& c, Run& run, int workers) {
    const auto& p = c.probe;
    EnsembleSpec e = p.ensemble;
    e.seed = c.seed;
    e.dimension = c.grid.dimension;
    e.period = c.grid.period;
    e.window_length = c.window.length;
    e.time_samples = c.window.samples;
    const auto reports = threshold_scan(p.exponents, p.refinements, e, workers);

    Csv csv({"s", "sigma", "M", "N", "sup_schrodinger", "sup_wave_output"});
    json all = json::array();
    bool finite = true, fit_rule = true;
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < r.refinements.size(); ++i) {
            csv.row(std::vector<double>{r.exponents.s, r.exponents.sigma, double(r.refinements[i]), r.frequency[i],
                                        r.sup_schrodinger[i], r.sup_wave_output[i]});
            finite = finite && std::isfinite(r.sup_schrodinger[i]) && std::isfinite(r.sup_wave_output[i]);
        }
        fit_rule = fit_rule && r.growth_exponent.has_value() == (r.refinements.size() >= 3);
        all.push_back(ratio_json(r));
    }
    run.write("ratios.csv", csv.str());
    run.write_json("ratio_report.json", {{"mode", "scan"}, {"reports", all}});
    run.check("finite_ratios", finite, "every sup ratio is finite");
    run.check("fit_precondition", fit_rule, "growth exponent reported exactly when there are at least 3 levels");
}

void cmd_probe_c2(const lab::ExperimentConfig& c, Run& run) {
    const auto& p = c.probe;
    Csv csv({"s", "sigma", "lambda", "schrodinger_term", "wave_term"});
    json all = json::array();
    bool finite = true;
    for (const auto& ex : p.exponents) {
        const auto r = picard_c2_probe(p.lambda, ex, p.c2);
        for (std::size_t i = 0; i < r.lambda.size(); ++i)
            csv.row(std::vector<double>{ex.s, ex.sigma, r.lambda[i], r.schrodinger_term[i], r.wave_term[i]});
        finite = finite && std::isfinite(r.power);
        all.push_back({{"s", ex.s}, {"sigma", ex.sigma}, {"lambda", r.lambda},
                       {"schrodinger_term", r.schrodinger_term}, {"wave_term", r.wave_term},
                       {"schrodinger_power", r.schrodinger_power}, {"wave_power", r.wave_power}, {"power", r.power}});
    }
    run.write("c2_terms.csv", csv.str());
    run.write_json("c2_report.json", {{"mode", "c2"}, {"reports", all}});
    run.check("finite_powers", finite, "fitted lambda-powers are finite");
}

ContinuationParams schedule_params(const lab::ExperimentConfig& c, double u_norm, double wave_norm) {
    ContinuationParams p{u_norm, wave_norm};
    p.sigma = c.continuation.sigma;
    p.regime = c.continuation.regime;
    p.envelope_constant = c.constants.envelope;
    p.constraint_constant = c.constants.constraint;
    p.standing_factor = c.constants.standing_factor;
    p.epsilon = c.epsilon;
    return p;
}

void cmd_continuation_plan(const lab::ExperimentConfig& c, Run& run) {
    const auto& r = c.continuation;
    Csv csv({"u_norm", "wave_norm", "T", "legs_per_cycle", "total_time", "lower_bound", "standing_assumption",
             "constraints_hold"});
    json rows = json::array();
    bool constraints = true, lower = true, independent = true;
    for (double U : r.u_norm) {
        double lo = INFINITY, hi = 0.0;
        for (double W : r.wave_norm) {
            const auto p = schedule_params(c, U, W);
            const auto sel = select_T(p);
            bool holds = true;
            for (const auto& k : step_constraints(p, sel.T)) holds = holds && k.holds();
            constraints = constraints && holds;
            double m = 0.0, total = 0.0, bound = 0.0;
            try {
                const auto plan = doubling_plan(p);
                m = plan.m;
                total = plan.total_time;
                bound = plan.lower_bound;
            } catch (const DegenerateInput&) {
            }
            if (sel.standing_assumption && p.regime == Regime::bourgain2d) lower = lower && total >= bound;
            lo = std::min(lo, total);
            hi = std::max(hi, total);
            csv.row({number(U), number(W), number(sel.T), number(m), number(total), number(bound),
                     sel.standing_assumption ? "true" : "false", holds ? "true" : "false"});
            rows.push_back({{"u_norm", U}, {"wave_norm", W}, {"T", sel.T}, {"legs_per_cycle", m},
                            {"total_time", total}, {"lower_bound", bound},
                            {"standing_assumption", sel.standing_assumption}, {"constraints_hold", holds}});
        }
        independent = independent && hi <= 2.0 * lo;
    }
    run.write("schedule.csv", csv.str());
    run.write_json("schedule.json", {{"mode", "plan"}, {"regime", regime_name(r.regime)}, {"sigma", r.sigma},
                                     {"rows", rows}});
    run.check("constraints_hold", constraints, "selected T satisfies every step constraint");
    if (r.regime == Regime::bourgain2d)
        run.check("total_time_lower_bound", lower, "total_time >= min(u_norm^-3.1, 1) where the assumption holds");
    if (r.regime == Regime::strichartz3d)
        run.check("total_time_independent_of_wave_norm", independent, "total_time varies by at most a factor 2");
}

void cmd_continuation_run(const lab::ExperimentConfig& c, Run& run) {
    const auto& r = c.continuation;
    const double U = r.u_norm.front(), W = r.wave_norm.front();
    const auto state = simulate_data(c, U, W, r.sigma);
    ContinuationOptions opt;
    opt.regime = r.regime;
    opt.envelope_constant = c.constants.envelope;
    opt.constraint_constant = c.constants.constraint;
    opt.standing_factor = c.constants.standing_factor;
    opt.fallback_step = r.fallback_step;
    opt.max_dt = r.max_dt;
    const auto rep = run_continuation(state, r.horizon, opt);

    Csv csv({"start", "length", "cycle", "doubling_step", "u_norm", "plus_start", "minus_start", "plus_max",
             "minus_max", "envelope_plus", "envelope_minus", "margin", "charge_drift", "flagged"});
    json legs = json::array();
    for (const auto& l : rep.legs) {
        csv.row({number(l.start), number(l.length), std::to_string(l.cycle), l.doubling_step ? "true" : "false",
                 number(l.u_norm), number(l.plus_start), number(l.minus_start), number(l.plus_max),
                 number(l.minus_max), number(l.envelope_plus), number(l.envelope_minus), number(l.margin()),
                 number(l.charge_drift), l.flagged ? "true" : "false"});
        legs.push_back({{"start", l.start}, {"length", l.length}, {"cycle", l.cycle}, {"margin", l.margin()},
                        {"plus_max", l.plus_max}, {"minus_max", l.minus_max}, {"envelope_plus", l.envelope_plus},
                        {"envelope_minus", l.envelope_minus}, {"flagged", l.flagged}});
    }
    run.write("legs.csv", csv.str());
    run.write_json("continuation.json", {{"mode", "run"}, {"regime", regime_name(r.regime)}, {"horizon", rep.horizon},
                                         {"cycles_completed", rep.cycles_completed}, {"flagged_legs", rep.flagged_legs},
                                         {"charge_drift", rep.charge_drift}, {"legs", legs}});
    run.check("envelope", rep.flagged_legs == 0, std::to_string(rep.flagged_legs) + " legs exceed their envelope");
    run.check("charge_drift", rep.charge_drift <= r.drift_tolerance,
              "relative charge drift " + format("%.3e", rep.charge_drift));
}

double relative_residual(std::span<const complex> a, std::span<const complex> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

SpectralField noise(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SpectralField f(g, Representation::physical);
    for (auto& v : f.values()) v = complex(normal(rng), normal(rng));
    return f;
}

void cmd_decompose(const lab::ExperimentConfig& c, Run& run) {
    const auto& d = c.decompose;
    const Grid g = c.grid.grid();
    const double tol = d.residual_tolerance;
    Csv csv({"partition", "parameter", "residual"});
    bool ok = true;
    const auto record = [&](const std::string& name, const std::string& param, double res) {
        csv.row({name, param, number(res)});
        ok = ok && res <= tol;
    };

    double pointwise = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = std::sqrt(g.xi_squared(i));
        double sum = 0.0;
        for (double N : dyadic_levels(r)) sum += psi_dyadic(N, r);
        pointwise = std::max(pointwise, std::abs(sum - 1.0));
    }
    record("radial_symbol", "grid points", pointwise);

    const auto f = noise(g, c.seed);
    SpectralField sum = SpectralField::zeros(g, Representation::physical);
    for (double N : dyadic_levels(max_frequency(g))) sum += frequency_project(f, N).field;
    record("radial_reconstruction", "all N", relative_residual(sum.values(), f.values()));
    if (g.dimension() == 2) {
        for (int A : d.angular) {
            SpectralField s = SpectralField::zeros(g, Representation::physical);
            for (int j = 0; j < A; ++j) s += angular_project(f, A, j).field;
            record("angular_reconstruction", "A=" + std::to_string(A), relative_residual(s.values(), f.values()));
        }
    }
    run.check("partition_of_unity", ok, "every reconstruction residual <= " + format("%.1e", tol));

    const auto u0 = gaussian_packet(g, {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, d.packet_width}, 1.0);
    bool modulation_ok = true, mass_ok = true;
    Csv mass({"dispersion", "L", "mass_fraction_up_to_L"});
    const std::pair<Dispersion, const char*> kinds[] = {
        {Dispersion::schrodinger, "schrodinger"}, {Dispersion::wave_plus, "wave_plus"}, {Dispersion::wave_minus, "wave_minus"}};
    for (const auto& [kind, name] : kinds) {
        const auto field = SpaceTimeField::free_solution(u0, c.window, kind).windowed();
        const auto levels = dyadic_levels(max_modulation(g, c.window, kind));
        SpaceTimeField rebuilt(g, c.window, Representation::physical);
        for (double L : levels) rebuilt += modulation_project(field, L, kind).field;
        const double res = relative_residual(rebuilt.values(), field.values());
        csv.row({std::string("modulation_reconstruction"), std::string(name), number(res)});
        modulation_ok = modulation_ok && res <= tol;

        // Pieces overlap, so the captured mass goes through the summed multiplier.
        const auto fs = field.to_spectral();
        const double total = std::pow(field.l2_norm(), 2);
        std::vector<double> used;
        for (double L : levels) {
            used.push_back(L);
            const auto cs = apply_space_time_multiplier(field, [&](double tau, std::size_t i) {
                const double m = modulation(kind, tau, g.xi_squared(i));
                double w = 0.0;
                for (double l : used) w += psi_dyadic(l, m);
                return w;
            }).to_spectral();
            double captured = 0.0;
            for (std::size_t i = 0; i < fs.size(); ++i) captured += std::real(std::conj(fs[i]) * cs[i]);
            captured *= g.volume() * c.window.length / total;
            mass.row({std::string(name), number(L), number(captured)});
            if (L == d.low_modulation) mass_ok = mass_ok && captured >= d.mass_fraction;
            if (L >= d.low_modulation) break;
        }
    }
    run.write("partition_residuals.csv", csv.str());
    run.write("modulation_mass.csv", mass.str());
    run.check("modulation_reconstruction", modulation_ok, "modulation pieces rebuild the windowed free solution");
    run.check("low_modulation_mass", mass_ok,
              "free solutions keep >= " + format("%.3g", d.mass_fraction) + " of their mass at L <= " +
                  format("%g", d.low_modulation));
}

void cmd_selftest(Run& run) {
    const Grid g(2, 16, 2.0 * M_PI);
    auto u = noise(g, 1).to_spectral();
    dealias_in_place(u);
    auto n = noise(g, 2).to_physical();
    for (auto& v : n.values()) v = v.real();
    auto dn = noise(g, 3).to_physical();
    for (auto& v : dn.values()) v = v.real();
    const SecondOrderState s{u, n.to_spectral(), dn.to_spectral(), {}};
    const auto back = to_second_order(to_first_order(s));
    const double rt = std::max(relative_residual(back.n.values(), s.n.values()),
                               relative_residual(back.dt_n.values(), s.dt_n.values()));
    run.check("reduction_round_trip", rt <= 1e-12, "round-trip residual " + format("%.2e", rt));

    const auto p = noise(g, 4);
    const double parseval = std::abs(p.l2_norm() - p.to_spectral().l2_norm()) / p.l2_norm();
    run.check("parseval", parseval <= 1e-12, "relative mismatch " + format("%.2e", parseval));

    const double t = 0.37;
    const auto w = SpectralField::plane_wave(g, {2, -1, 0});
    const auto evolved = free_schrodinger(w, t).to_physical();
    const auto exact = (std::polar(1.0, -5.0 * t) * w).to_physical();
    const double phase = relative_residual(evolved.values(), exact.values());
    run.check("free_propagator_phase", phase <= 1e-10, "plane-wave phase error " + format("%.2e", phase));

    const Grid small(2, 8, 2.0 * M_PI);
    const TimeWindow win{0.0, 2.0 * M_PI, 8};
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    const auto random_st = [&] {
        SpaceTimeField f(small, win, Representation::physical);
        for (auto& v : f.values()) v = complex(normal(rng), normal(rng));
        return f;
    };
    const auto a = random_st(), b = random_st(), cc = random_st();
    const complex spectral = trilinear_form(a, b, cc), physical = trilinear_form_physical(a, b, cc);
    const double tri = std::abs(spectral - physical) / std::max(1.0, std::abs(spectral));
    run.check("trilinear_routes_agree", tri <= 1e-10, "spectral vs physical " + format("%.2e", tri));

    bool sched = true;
    for (auto regime : {Regime::bourgain2d, Regime::strichartz2d, Regime::strichartz3d}) {
        ContinuationParams q{1.5, 100.0};
        q.regime = regime;
        for (const auto& k : step_constraints(q, select_T(q).T)) sched = sched && k.holds();
    }
    run.check("schedule_constraints", sched, "select_T satisfies every constraint in each regime");
    run.write_json("selftest.json", json{{"checks", run.checks().size()}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral lab for the Klein-Gordon-Schrödinger system"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    const auto add_flags = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "JSON experiment configuration");
        if (needs_config) opt->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "override the configured seed");
        sub->add_option("--workers", workers, "worker threads for the scan")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_dir, "output directory (default: the configured one)");
    };
    for (const char* name : {"simulate", "probe", "continuation", "decompose"})
        add_flags(app.add_subcommand(name, std::string("run the ") + name + " experiment"), true);
    add_flags(app.add_subcommand("selftest", "quick internal consistency checks"), false);
    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    lab::ExperimentConfig config;
    std::string canonical = "{}";
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            const json doc = json::parse(in);
            config = lab::parse_config(doc);
            canonical = doc.dump();
        }
    } catch (const json::parse_error& e) {
        std::cerr << "config: " << e.what() << "\n";
        return 2;
    } catch (const lab::ConfigError& e) {
        std::cerr << "config: " << e.what() << "\n";
        return 2;
    }
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.output = out_dir;
    // The hash covers the parsed document, the command and the effective seed; workers never change results.
    const std::string hash =
        lab::hex64(lab::fnv1a(command + "\n" + canonical + "\nseed=" + std::to_string(config.seed)));

    Run run(config.output, command, hash);
    try {
        if (command == "simulate") cmd_simulate(config, run);
        else if (command == "probe" && config.probe.mode == "scan") cmd_probe_scan(config, run, workers);
        else if (command == "probe") cmd_probe_c2(config, run);
        else if (command == "continuation" && config.continuation.mode == "plan") cmd_continuation_plan(config, run);
        else if (command == "continuation") cmd_continuation_run(config, run);
        else if (command == "decompose") cmd_decompose(config, run);
        else cmd_selftest(run);
    } catch (const std::exception& e) {
        run.check("completed", false, e.what());
    }
    run.finish();

    for (const auto& c : run.checks())
        std::cout << (c.passed ? "ok   " : "FAIL ") << c.invariant << ": " << c.detail << "\n";
    std::cout << "config hash " << hash << ", outputs in " << config.output << "\n";
    return run.all_passed() ? 0 : 1;
}
