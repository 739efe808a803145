#pragma once

// Bookkeeping for the doubling argument behind global existence: exponent
// tables, local step length, steps per doubling cycle, the total-time lower
// bound, and a driver that runs the evolution along that schedule and checks
// the wave-norm envelope after every leg.

#include <string>
#include <vector>

#include "kgs/evolution.hpp"
#include "kgs/norms.hpp"

namespace kgs {

enum class Regime { bourgain2d, strichartz2d, strichartz3d };

int regime_dimension(Regime r) noexcept;
const char* regime_name(Regime r) noexcept;
Regime parse_regime(const std::string& name);

/// T^l multiplies the wave norm in the contraction, T^k the source |u|^2.
struct ScheduleExponents {
    double k;
    double l;
};

/// Throws DomainError when sigma is outside the regime's range:
/// [-1/2, 3/2) for bourgain2d, [0, 1] for both Strichartz regimes.
ScheduleExponents exponents_for(double sigma, Regime regime, double epsilon = kDefaultEpsilon);

struct ContinuationParams {
    double u_norm;     // ||u0||_{L^2}
    double wave_norm;  // ||n+0||_{H^sigma} + ||n-0||_{H^sigma}
    double sigma = 0.0;
    Regime regime = Regime::bourgain2d;
    /// Constant in the wave-norm envelope ||n(t)|| <= ||n0|| + c T^k ||u0||^2.
    double envelope_constant = 1.0;
    /// Constant standing in for every "lesssim" in the step constraints.
    double constraint_constant = 1.0;
    /// "much greater" in the standing assumption becomes this factor.
    double standing_factor = 10.0;
    double epsilon = kDefaultEpsilon;

    void validate() const;
};

/// One inequality lhs <= rhs of the local-existence constraint set.
struct Constraint {
    std::string name;
    double lhs;
    double rhs;
    bool holds(double relative_slack = 1e-12) const noexcept { return lhs <= rhs * (1.0 + relative_slack); }
};

/// The regime's constraint set evaluated at step length T.
std::vector<Constraint> step_constraints(const ContinuationParams& p, double T);

/// wave_norm >= factor (u_norm^2 + 1) in 2D and factor (u_norm^3 + 1) in 3D.
bool standing_assumption(const ContinuationParams& p);

struct StepSelection {
    double T;
    /// False means the doubling argument does not apply; T still satisfies
    /// the constraints, but callers should take a plain local step instead.
    bool standing_assumption;
};

/// Largest T <= 1 allowed by every constraint (the minimum of the
/// per-constraint bounds).
StepSelection select_T(const ContinuationParams& p);

/// Exponent of T in the envelope: k for bourgain2d, 1/2 for strichartz2d and
/// 3/4 - sigma/2 for strichartz3d.
double source_exponent(const ContinuationParams& p);

struct SchedulePlan {
    double T;
    /// Legs per cycle, floor of the ratio; held as a double because tiny T
    /// pushes it past the integer range.
    double m;
    double total_time;
    /// c T^k ||u0||^2, the envelope increment per leg.
    double leg_growth;
    double initial_wave_norm;
    bool standing_assumption;
    /// min(||u0||^{-(3 + eps')}, 1) for bourgain2d, ||u0||^{-2} otherwise.
    double lower_bound;

    /// Predicted bound on the wave norm after j legs.
    double envelope(double j) const noexcept { return initial_wave_norm + j * leg_growth; }
};

inline constexpr double kTotalTimeEpsilon = 0.1;

/// Throws DegenerateInput when m rounds down to zero.
SchedulePlan doubling_plan(const ContinuationParams& p);

struct ContinuationOptions {
    Regime regime = Regime::bourgain2d;
    double envelope_constant = 1.0;
    double constraint_constant = 1.0;
    double standing_factor = 10.0;
    /// Leg length used when the standing assumption fails.
    double fallback_step = 0.5;
    /// Largest integrator step inside a leg.
    double max_dt = 0.01;
    IntegratorOptions integrator{};
};

struct Leg {
    double start;
    double length;
    long cycle;             // doubling cycle the leg belongs to
    bool doubling_step;     // T came from select_T with the assumption holding
    double u_norm;
    double wave_norm_start; // ||n+|| + ||n-|| at the start of the leg
    double plus_start;
    double minus_start;
    double plus_max;        // max over the leg of ||n+(t)||_{H^sigma}
    double minus_max;
    double envelope_plus;   // ||n+0|| + c T^k ||u0||^2
    double envelope_minus;
    double charge_drift;
    bool flagged;

    double margin() const noexcept { return std::min(envelope_plus - plus_max, envelope_minus - minus_max); }
};

struct ContinuationReport {
    std::vector<Leg> legs;
    double horizon;
    long cycles_completed;
    double charge_drift;  // relative, over the whole run
    long flagged_legs;
    FirstOrderState final_state;
};

ContinuationReport run_continuation(const FirstOrderState& initial, double horizon,
                                    const ContinuationOptions& options = {});

struct WaveBoundReport {
    double T;
    double lhs;                  // sup over [0, T] of ||n(t)||_{H^sigma}
    double data_term;            // ||n0||_{H^sigma} + ||dt n(0)||_{H^{sigma-1}}
    double source_term;          // || |u|^2 ||_{L^{q'}((0, T), L^1)}
    double duhamel_contribution; // sup over [0, T] of ||n(t) - n_free(t)||_{H^sigma}
    double constant;
    double margin;               // data_term + constant * source_term - lhs
};

/// Both sides of the three-dimensional a priori bound on a stored
/// trajectory (stride 1 states not required; uses the stored states).
WaveBoundReport wave_norm_bound_3d(const Trajectory& trajectory, double sigma, double T, double constant = 1.0,
                                   double epsilon = kDefaultEpsilon);

}  // namespace kgs
