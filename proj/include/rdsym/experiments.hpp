// Declarative scenarios that run the solver and geometry probes and render
// verdicts against the symmetrization, anti-symmetrization, steepness,
// spreading-speed, and two-solution estimates.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rdsym/solver.hpp"

namespace rdsym {

struct SymmetrizationScenario {
    DatumSpec datum;
    std::vector<double> thetas;

    friend bool operator==(const SymmetrizationScenario&, const SymmetrizationScenario&) = default;
};

// Initial datum u1(x) + u2(x + xi); the solution is compared against the
// single-bump references to exhibit the |xi|/2 growth of the enclosing radius.
struct AntiSymmetrizationScenario {
    DatumSpec u1;
    DatumSpec u2;
    Vec2 xi;                 // lattice vector
    double theta = 0.5;
    double theta_prime = 0.25; // < theta; probes the radial-convergence refutation
    std::optional<double> min_gap_required; // optional non-sphericality floor

    friend bool operator==(const AntiSymmetrizationScenario&,
                           const AntiSymmetrizationScenario&) = default;
};

struct SteepnessScenario {
    DatumSpec datum;
    double theta_prime = 0.25; // lower level
    double theta = 0.75;       // upper level, theta_prime < theta
    std::optional<ReactionTerm> lower_bound_g; // hypothesis f >= g, validated before the run
    double width_cap = 5.0;           // frozen regression cap on the late-window min width
    double invasion_ball_radius = 0.0; // non-KPP terms: datum must reach theta on this ball
    long time_shift_records = 1;       // T = this many record intervals

    friend bool operator==(const SteepnessScenario&, const SteepnessScenario&) = default;
};

struct SpreadingSpeedScenario {
    DatumSpec datum;
    double theta = 0.5;
    double window_start = 0.0;
    double window_end = 0.0;
    double slope_min = 0.0;
    double slope_max = 0.0;

    friend bool operator==(const SpreadingSpeedScenario&, const SpreadingSpeedScenario&) = default;
};

struct TwoSolutionScenario {
    DatumSpec datum1;
    DatumSpec datum2;
    double theta = 0.3;       // level tracked on solution 1
    double theta_prime = 0.7; // level tracked on solution 2
    Vec2 zeta_shift;          // lattice vector; min(tau_zeta u1_0, u2_0) must not vanish
    double distance_cap = 4.0; // frozen regression cap on min |r1_theta - r2_theta'|

    friend bool operator==(const TwoSolutionScenario&, const TwoSolutionScenario&) = default;
};

using Scenario = std::variant<SymmetrizationScenario, AntiSymmetrizationScenario,
                              SteepnessScenario, SpreadingSpeedScenario, TwoSolutionScenario>;

std::string scenario_name(const Scenario& scenario);

enum class VerdictStatus { Pass, Fail, Inconclusive };

std::string to_string(VerdictStatus status);

struct Verdict {
    std::string name;
    std::string inequality; // the checked inequality, in plain text
    double measured = 0.0;
    double bound = 0.0;
    VerdictStatus status = VerdictStatus::Inconclusive;
    std::string detail;
};

struct ReportRow {
    std::string solution_id;
    GeometrySummary summary;
};

struct Report {
    std::string scenario;
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, double>> derived;
    std::vector<Verdict> verdicts;

    bool has_failure() const;
    const Verdict* find(const std::string& name) const;
    std::optional<double> derived_value(const std::string& name) const;
};

// Everything a scenario needs besides its own parameters.
struct LabSettings {
    SolverConfig solver;
    ReactionTerm reaction;
    int rays = 720;
    std::uint64_t seed = kDefaultGeometrySeed;
    double late_window_fraction = 0.5; // late window = [t_end (1 - f), t_end]
    // Called once per solution per record time (snapshot emission).
    std::function<void(const std::string& id, const ScalarField&, long record_index)>
        snapshot_sink;
};

Report run_symmetrization(const LabSettings& lab, const SymmetrizationScenario& scenario);
Report run_antisymmetrization(const LabSettings& lab, const AntiSymmetrizationScenario& scenario);
Report run_steepness(const LabSettings& lab, const SteepnessScenario& scenario);
Report run_spreading_speed(const LabSettings& lab, const SpreadingSpeedScenario& scenario);
Report run_two_solution(const LabSettings& lab, const TwoSolutionScenario& scenario);
Report run_scenario(const LabSettings& lab, const Scenario& scenario);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

// Least-squares line through (t, r) samples; requires at least 3 points.
LineFit fit_line(std::span<const std::pair<double, double>> points);

// Fit of r_origin(t) at the given level over [t_a, t_b]; (slope, max residual).
std::pair<double, double> estimate_speed(const Trajectory& trajectory, double theta, double t_a,
                                         double t_b);

// Re-derives the CSV-computable verdicts from previously emitted rows.
// Verdicts that need runtime-only data (pointwise comparisons, radial
// monotonicity) come back Inconclusive with an explanatory detail.
Report derive_report_from_rows(const LabSettings& lab, const Scenario& scenario,
                               std::vector<ReportRow> rows);

} // namespace rdsym
