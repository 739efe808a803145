#pragma once

// Experiment configuration: a JSON document read through a strict schema.
// Every object tracks which keys were read, and leftovers are errors.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgs/continuation.hpp"
#include "kgs/cutoff.hpp"
#include "kgs/data.hpp"
#include "kgs/estimates.hpp"

namespace lab {

using nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    template <class T>
    T get(const std::string& key, T fallback) {
        if (!node_.contains(key)) return fallback;
        return read<T>(key);
    }

    template <class T>
    T require(const std::string& key) {
        if (!node_.contains(key)) throw ConfigError(where(key) + ": missing required key");
        return read<T>(key);
    }

    Section child(const std::string& key) {
        seen_.push_back(key);
        static const json empty = json::object();
        return Section(node_.contains(key) ? node_.at(key) : empty, where(key));
    }

    /// Call after all reads; throws on the first unread key.
    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            bool known = false;
            for (const auto& k : seen_) known = known || k == it.key();
            if (!known) throw ConfigError(where(it.key()) + ": unknown key");
        }
    }

private:
    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    template <class T>
    T read(const std::string& key) {
        seen_.push_back(key);
        const json& v = node_.at(key);
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) throw ConfigError("expected a number");
            } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                if (!v.is_number_integer()) throw ConfigError("expected an integer");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw ConfigError("expected true or false");
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw ConfigError("expected a string");
            }
            return v.get<T>();
        } catch (const ConfigError& e) {
            throw ConfigError(where(key) + ": " + e.what());
        } catch (const json::exception& e) {
            throw ConfigError(where(key) + ": " + e.what());
        }
    }

    const json& node_;
    std::string path_;
    std::vector<std::string> seen_;
};

inline void check(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

struct GridConfig {
    int dimension = 2;
    int points = 64;
    double period = 16.0 * M_PI;
    kgs::Grid grid() const { return kgs::Grid(dimension, points, period); }
};

struct SimulateConfig {
    double u_norm = 0.5;
    double wave_norm = 0.5;
    double s = 0.0;
    double sigma = 0.0;
    kgs::PacketSpec u_packet{{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, 3.0};
    kgs::PacketSpec n_packet{{2.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 3.0};
    std::optional<double> dt;  // default_dt(grid) when absent
    long steps = 1000;
    double charge_tolerance = 1e-8;
};

struct ProbeConfig {
    std::string mode = "scan";  // "scan" or "c2"
    std::vector<kgs::ExponentPair> exponents{{0.0, -0.5}, {0.0, -0.75}, {-0.5, 0.0}};
    std::vector<int> refinements{16, 32, 64, 128};
    kgs::EnsembleSpec ensemble{};
    std::vector<double> lambda{4.0, 8.0, 16.0, 32.0};
    kgs::ProbeSpec c2{};
};

struct ContinuationConfig {
    std::string mode = "plan";  // "plan" or "run"
    kgs::Regime regime = kgs::Regime::bourgain2d;
    double sigma = 0.0;
    std::vector<double> u_norm{1.0};
    std::vector<double> wave_norm{10.0, 100.0, 1000.0};
    double horizon = 10.0;
    double max_dt = 0.01;
    double fallback_step = 0.5;
    double drift_tolerance = 1e-7;
};

struct DecomposeConfig {
    std::vector<int> angular{8, 64};
    double packet_width = 2.0;
    double residual_tolerance = 1e-12;
    double low_modulation = 4.0;
    double mass_fraction = 0.99;
};

struct Constants {
    double envelope = 1.0;
    double constraint = 1.0;
    double standing_factor = 10.0;
};

struct ExperimentConfig {
    GridConfig grid;
    kgs::TimeWindow window{};
    double epsilon = kgs::kDefaultEpsilon;
    std::uint64_t seed = 20240611;
    std::string output = "out";
    Constants constants;
    SimulateConfig simulate;
    ProbeConfig probe;
    ContinuationConfig continuation;
    DecomposeConfig decompose;
};

inline kgs::PacketSpec read_packet(Section sec, kgs::PacketSpec p) {
    for (const char* key : {"offset", "wavevector"}) {
        if (!sec.has(key)) continue;
        auto v = sec.require<std::vector<double>>(key);
        check(v.size() <= 3, std::string(key) + ": at most three components");
        std::array<double, 3>& dst = std::string(key) == "offset" ? p.offset : p.wavevector;
        dst = {0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < v.size(); ++i) dst[i] = v[i];
    }
    p.width = sec.get("width", p.width);
    check(p.width > 0.0, "packet width must be positive");
    sec.finish();
    return p;
}

inline std::vector<kgs::ExponentPair> read_pairs(const std::vector<std::vector<double>>& raw) {
    std::vector<kgs::ExponentPair> out;
    for (const auto& p : raw) {
        check(p.size() == 2, "probe.exponents: each entry is [s, sigma]");
        out.push_back({p[0], p[1]});
    }
    return out;
}

inline ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig c;
    Section root(doc, "");
    c.grid.dimension = root.get("dimension", c.grid.dimension);
    {
        auto g = root.child("grid");
        c.grid.points = g.get("points", c.grid.points);
        c.grid.period = g.get("period", c.grid.period);
        g.finish();
    }
    {
        auto t = root.child("window");
        c.window.start = t.get("start", c.window.start);
        c.window.length = t.get("length", c.window.length);
        c.window.samples = t.get("samples", c.window.samples);
        t.finish();
        check(c.window.length > 0.0 && c.window.samples >= 4, "window: positive length and at least 4 samples");
    }
    c.epsilon = root.get("epsilon", c.epsilon);
    check(c.epsilon > 0.0 && c.epsilon < 0.25, "epsilon must lie in (0, 1/4)");
    c.seed = root.get<std::uint64_t>("seed", c.seed);
    c.output = root.get("output", c.output);
    {
        auto k = root.child("constants");
        c.constants.envelope = k.get("envelope", c.constants.envelope);
        c.constants.constraint = k.get("constraint", c.constants.constraint);
        c.constants.standing_factor = k.get("standing_factor", c.constants.standing_factor);
        k.finish();
        check(c.constants.envelope > 0.0 && c.constants.constraint > 0.0 && c.constants.standing_factor > 0.0,
              "constants must be positive");
    }
    {
        auto s = root.child("simulate");
        auto& m = c.simulate;
        m.u_norm = s.get("u_norm", m.u_norm);
        m.wave_norm = s.get("wave_norm", m.wave_norm);
        m.s = s.get("s", m.s);
        m.sigma = s.get("sigma", m.sigma);
        m.u_packet = read_packet(s.child("u_packet"), m.u_packet);
        m.n_packet = read_packet(s.child("n_packet"), m.n_packet);
        if (s.has("dt")) m.dt = s.require<double>("dt");
        m.steps = s.get("steps", m.steps);
        m.charge_tolerance = s.get("charge_tolerance", m.charge_tolerance);
        s.finish();
        check(m.u_norm >= 0.0 && m.wave_norm >= 0.0, "simulate: norms must be nonnegative");
        check(m.steps >= 1 && (!m.dt || *m.dt > 0.0), "simulate: positive dt and steps");
    }
    {
        auto p = root.child("probe");
        auto& m = c.probe;
        m.mode = p.get("mode", m.mode);
        check(m.mode == "scan" || m.mode == "c2", "probe.mode must be \"scan\" or \"c2\"");
        if (p.has("exponents")) m.exponents = read_pairs(p.require<std::vector<std::vector<double>>>("exponents"));
        m.refinements = p.get("refinements", m.refinements);
        m.ensemble.samples = p.get("samples", m.ensemble.samples);
        m.ensemble.amplitude = p.get("amplitude", m.ensemble.amplitude);
        m.ensemble.b_in = p.get("b_in", 0.5 - c.epsilon);
        m.ensemble.b_out = p.get("b_out", -0.5 + c.epsilon);
        m.lambda = p.get("lambda", m.lambda);
        auto q = p.child("c2");
        m.c2.points = q.get("points", m.c2.points);
        m.c2.period = q.get("period", m.c2.period);
        m.c2.t_end = q.get("t_end", m.c2.t_end);
        m.c2.dt = q.get("dt", m.c2.dt);
        m.c2.width = q.get("width", m.c2.width);
        m.c2.amplitude = q.get("amplitude", m.c2.amplitude);
        q.finish();
        p.finish();
        check(!m.exponents.empty(), "probe.exponents must not be empty");
        check(m.ensemble.samples >= 1, "probe.samples must be positive");
    }
    {
        auto r = root.child("continuation");
        auto& m = c.continuation;
        m.mode = r.get("mode", m.mode);
        check(m.mode == "plan" || m.mode == "run", "continuation.mode must be \"plan\" or \"run\"");
        try {
            m.regime = kgs::parse_regime(r.get<std::string>("regime", kgs::regime_name(m.regime)));
        } catch (const kgs::ContractViolation& e) {
            throw ConfigError(std::string("continuation.regime: ") + e.what());
        }
        m.sigma = r.get("sigma", m.sigma);
        m.u_norm = r.get("u_norm", m.u_norm);
        m.wave_norm = r.get("wave_norm", m.wave_norm);
        m.horizon = r.get("horizon", m.horizon);
        m.max_dt = r.get("max_dt", m.max_dt);
        m.fallback_step = r.get("fallback_step", m.fallback_step);
        m.drift_tolerance = r.get("drift_tolerance", m.drift_tolerance);
        r.finish();
        check(!m.u_norm.empty() && !m.wave_norm.empty(), "continuation: u_norm and wave_norm lists must not be empty");
        check(m.horizon > 0.0 && m.max_dt > 0.0 && m.fallback_step > 0.0, "continuation: positive horizon and steps");
    }
    {
        auto d = root.child("decompose");
        auto& m = c.decompose;
        m.angular = d.get("angular", m.angular);
        m.packet_width = d.get("packet_width", m.packet_width);
        m.residual_tolerance = d.get("residual_tolerance", m.residual_tolerance);
        m.low_modulation = d.get("low_modulation", m.low_modulation);
        m.mass_fraction = d.get("mass_fraction", m.mass_fraction);
        d.finish();
        for (int A : m.angular) check(A >= 1, "decompose.angular entries must be positive");
        check(kgs::is_dyadic(m.low_modulation), "decompose.low_modulation must be a power of two >= 1");
    }
    root.finish();
    try {
        (void)c.grid.grid();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    return c;
}

}  // namespace lab
