#include "rdsym/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace rdsym {

namespace {

constexpr double kComparisonTol = 1e-9;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string theta_tag(double theta) { return "[theta=" + fmt(theta) + "]"; }

// Circumferential scale for the angular-sampling slack: the origin-centred
// outer radius when measured at runtime, else the conservative CSV proxy.
double circ_scale(const GeometrySummary& s) {
    if (s.outer_origin_radius) return *s.outer_origin_radius;
    if (s.R_e && s.center_e) return *s.R_e + s.center_e->norm();
    return s.R_e.value_or(0.0);
}

// tol_geom = 5h + angular slack; halving h provably tightens every verdict.
double tol_geom(double h, double scale, int rays) {
    return 5.0 * h + 2.0 * M_PI * scale / rays;
}

double field_support_radius(const ScalarField& u0) {
    const int n = u0.grid.nodes_per_side;
    double r = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if (u0.at(ix, iy) != 0.0) r = std::max(r, u0.grid.node(ix, iy).norm());
    return r + u0.grid.spacing();
}

void require_lattice(Vec2 shift, double h, const std::string& what) {
    const double rx = shift.x - std::lround(shift.x / h) * h;
    const double ry = shift.y - std::lround(shift.y / h) * h;
    if (std::abs(rx) > 1e-9 * h || std::abs(ry) > 1e-9 * h)
        throw ContractViolation(what + " must be a lattice vector (integer multiple of h)");
}

void require_kpp(const ReactionTerm& f, const std::string& scenario) {
    const CheckVerdict kpp = check_kpp(f, default_z_samples(f), default_t_samples(f));
    if (!kpp.pass)
        throw ContractViolation(scenario + ": reaction term fails the KPP hypothesis (" +
                                kpp.witness + ")");
}

ScalarField nodewise(const ScalarField& a, const ScalarField& b, double (*op)(double, double)) {
    ScalarField out(a.grid, a.time);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = op(a.values[i], b.values[i]);
    return out;
}

double op_min(double x, double y) { return std::min(x, y); }
double op_max(double x, double y) { return std::max(x, y); }
double op_sum(double x, double y) { return x + y; }

// ---------------------------------------------------------------------------
// Lockstep driver: several solutions advanced with one shared step schedule,
// probed and compared at the record times.

struct SolutionSetup {
    std::string id;
    ScalarField initial;
    double delta = 0.0; // origin-centred support radius (+h) for the probes
    std::vector<double> thetas;
};

using RecordHookFn =
    std::function<void(long record_index, double time, std::span<const ScalarField>)>;

struct LockstepResult {
    std::vector<ReportRow> rows;
    double min_value = std::numeric_limits<double>::infinity();
    std::vector<double> record_times;
};

LockstepResult run_lockstep(const LabSettings& lab, std::vector<SolutionSetup> setups,
                            const RecordHookFn& hook) {
    lab.solver.validate();
    const double Z = lab.reaction.saturation();
    for (const SolutionSetup& s : setups)
        for (double theta : s.thetas)
            if (!(theta > 0.0) || !(theta < Z))
                throw ContractViolation("scenario: threshold must lie in (0, Z)");

    const RecordSchedule sched = RecordSchedule::from(lab.solver);
    std::vector<ScalarField> fields;
    fields.reserve(setups.size());
    for (const SolutionSetup& s : setups) fields.push_back(s.initial);

    LockstepResult result;
    long record_index = 0;

    auto record = [&](double time) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const BoundaryCheck guard = boundary_guard(fields[i], lab.solver.boundary_tolerance);
            if (!guard.ok) {
                std::ostringstream os;
                os << "solution '" << setups[i].id << "': boundary guard tripped at t=" << time
                   << " (max |u|=" << guard.max_abs << ")";
                throw DomainTooSmall(os.str());
            }
            for (double theta : setups[i].thetas)
                result.rows.push_back(
                    {setups[i].id,
                     summarize(fields[i], theta, setups[i].delta, lab.rays, lab.seed)});
            result.min_value = std::min(result.min_value, fields[i].min_value());
            if (lab.snapshot_sink) lab.snapshot_sink(setups[i].id, fields[i], record_index);
        }
        if (hook) hook(record_index, time, std::span<const ScalarField>(fields));
        result.record_times.push_back(time);
        ++record_index;
    };

    record(0.0);
    for (long step = 1; step <= sched.total_steps; ++step) {
        const double t = step * sched.dt;
        for (ScalarField& u : fields) {
            u = step_2d(u, lab.reaction, sched.dt, lab.solver.threads);
            u.time = t;
        }
        if (sched.is_record_step(step)) record(t);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Row access for verdict derivation (shared by the runtime and CSV paths).

class RowIndex {
public:
    explicit RowIndex(const std::vector<ReportRow>& rows) {
        for (const ReportRow& row : rows) series_[{row.solution_id, row.summary.theta}].push_back(&row.summary);
    }

    // Time-ordered summaries for one (solution, theta); empty if unknown.
    std::vector<const GeometrySummary*> series(const std::string& id, double theta) const {
        for (const auto& [key, recs] : series_)
            if (key.first == id && std::abs(key.second - theta) <= 1e-12) return recs;
        return {};
    }

private:
    std::map<std::pair<std::string, double>, std::vector<const GeometrySummary*>> series_;
};

// Worst-case tracker for the runtime pointwise comparisons.
struct ComparisonStat {
    std::string name;
    std::string inequality;
    double worst = -std::numeric_limits<double>::infinity();
    double worst_time = 0.0;
    bool pass = true;
    bool any = false;

    void update(const LeqVerdict& v, double time) {
        any = true;
        if (v.max_violation > worst) {
            worst = v.max_violation;
            worst_time = time;
        }
        pass = pass && v.pass;
    }

    Verdict to_verdict() const {
        Verdict verdict;
        verdict.name = name;
        verdict.inequality = inequality;
        verdict.measured = any ? worst : 0.0;
        verdict.bound = kComparisonTol;
        verdict.status = !any ? VerdictStatus::Inconclusive
                              : (pass ? VerdictStatus::Pass : VerdictStatus::Fail);
        verdict.detail = any ? "worst violation " + fmt(worst) + " at t=" + fmt(worst_time)
                             : "no record times";
        return verdict;
    }
};

Verdict runtime_only_verdict(std::string name, std::string inequality) {
    Verdict v;
    v.name = std::move(name);
    v.inequality = std::move(inequality);
    v.status = VerdictStatus::Inconclusive;
    v.detail = "checked during the run only; not recomputable from the CSV";
    return v;
}

struct DeriveContext {
    double h = 0.0;
    int rays = 720;
    double t_end = 0.0;
    double late_start = 0.0;
    double record_interval = 0.0;
    const ReactionTerm* reaction = nullptr;
    bool from_csv = false;
    const std::vector<ComparisonStat>* comparisons = nullptr;
};

DeriveContext make_context(const LabSettings& lab) {
    DeriveContext ctx;
    ctx.h = lab.solver.grid.spacing();
    ctx.rays = lab.rays;
    ctx.t_end = lab.solver.t_end;
    ctx.late_start = lab.solver.t_end * (1.0 - lab.late_window_fraction);
    ctx.record_interval = lab.solver.record_interval;
    ctx.reaction = &lab.reaction;
    return ctx;
}

// First record index with the level invaded out to the support radius.
std::optional<std::size_t> transient_end(const std::vector<const GeometrySummary*>& series,
                                         double delta) {
    for (std::size_t k = 0; k < series.size(); ++k)
        if (series[k]->r_origin && *series[k]->r_origin >= delta) return k;
    return std::nullopt;
}

Verdict inconclusive(std::string name, std::string inequality, std::string why) {
    Verdict v;
    v.name = std::move(name);
    v.inequality = std::move(inequality);
    v.status = VerdictStatus::Inconclusive;
    v.detail = std::move(why);
    return v;
}

Verdict bounded_verdict(std::string name, std::string inequality, double measured, double bound,
                        bool pass_is_leq, std::string detail = {}) {
    Verdict v;
    v.name = std::move(name);
    v.inequality = std::move(inequality);
    v.measured = measured;
    v.bound = bound;
    v.status = (pass_is_leq ? measured <= bound : measured >= bound) ? VerdictStatus::Pass
                                                                     : VerdictStatus::Fail;
    v.detail = std::move(detail);
    return v;
}

void add_derived(Report& report, const std::string& key, double value) {
    report.derived.emplace_back(key, value);
}

// ---------------------------------------------------------------------------
// Symmetrization: star-shapedness, radial monotonicity, the delta*pi gap
// bound, and the origin-centred annulus, all after the transient.

void build_symmetrization_verdicts(Report& report, const DeriveContext& ctx,
                                   const SymmetrizationScenario& scenario, const RowIndex& index) {
    const double delta = scenario.datum.support_radius() + ctx.h;
    const double dpi = delta * M_PI;

    for (double theta : scenario.thetas) {
        const std::string tag = theta_tag(theta);
        const auto series = index.series("u", theta);
        const auto t0 = transient_end(series, delta);
        if (!t0) {
            const std::string why = "level not invaded out to delta within t_end";
            report.verdicts.push_back(inconclusive("star_shaped" + tag, "U_theta star-shaped for t >= t0", why));
            report.verdicts.push_back(inconclusive("radial_monotone" + tag, "u strictly decreasing along rays outside B_delta", why));
            report.verdicts.push_back(inconclusive("gap_bound" + tag, "R_e - R_i <= delta pi + tol_geom", why));
            report.verdicts.push_back(inconclusive("annulus" + tag, "U_theta inside B(r_origin + delta pi + tol_geom)", why));
            continue;
        }
        add_derived(report, "t0" + tag, series[*t0]->time);

        int star_breaks = 0;
        int monotone_breaks = 0;
        bool monotone_known = true;
        double worst_gap_excess = -std::numeric_limits<double>::infinity();
        double worst_annulus_excess = -std::numeric_limits<double>::infinity();
        bool annulus_proxy = false;
        double min_gap = std::numeric_limits<double>::infinity();
        double max_gap = -std::numeric_limits<double>::infinity();

        for (std::size_t k = *t0; k < series.size(); ++k) {
            const GeometrySummary& s = *series[k];
            if (!s.star_shaped || !*s.star_shaped) ++star_breaks;
            if (!s.radial_monotone)
                monotone_known = false;
            else if (!*s.radial_monotone)
                ++monotone_breaks;
            const double tol = tol_geom(ctx.h, circ_scale(s), ctx.rays);
            if (s.gap) {
                worst_gap_excess = std::max(worst_gap_excess, *s.gap - tol);
                min_gap = std::min(min_gap, *s.gap);
                max_gap = std::max(max_gap, *s.gap);
            }
            if (s.r_origin) {
                double outer;
                if (s.outer_origin_radius) {
                    outer = *s.outer_origin_radius;
                } else if (s.R_e && s.center_e) {
                    outer = *s.R_e + s.center_e->norm();
                    annulus_proxy = true;
                } else {
                    continue;
                }
                worst_annulus_excess = std::max(worst_annulus_excess, outer - *s.r_origin - tol);
            }
        }

        report.verdicts.push_back(bounded_verdict(
            "star_shaped" + tag, "U_theta star-shaped for t >= t0", star_breaks, 0, true,
            fmt(series.size() - *t0) + " post-transient records"));
        if (monotone_known)
            report.verdicts.push_back(bounded_verdict(
                "radial_monotone" + tag, "u strictly decreasing along rays outside B_delta",
                monotone_breaks, 0, true));
        else
            report.verdicts.push_back(runtime_only_verdict(
                "radial_monotone" + tag, "u strictly decreasing along rays outside B_delta"));
        report.verdicts.push_back(bounded_verdict(
            "gap_bound" + tag, "R_e - R_i <= delta pi + tol_geom", worst_gap_excess, dpi, true,
            "delta=" + fmt(delta)));
        report.verdicts.push_back(bounded_verdict(
            "annulus" + tag, "U_theta inside B(r_origin + delta pi + tol_geom)",
            worst_annulus_excess, dpi, true,
            annulus_proxy ? "outer radius bounded via |center_e| + R_e (CSV proxy)" : ""));
        if (min_gap < std::numeric_limits<double>::infinity()) {
            add_derived(report, "min_gap" + tag, min_gap);
            add_derived(report, "max_gap" + tag, max_gap);
        }
    }
}

// ---------------------------------------------------------------------------
// Spreading speed: least-squares slope of r_origin(t) over the fit window.

void build_speed_verdicts(Report& report, const DeriveContext& ctx,
                          const SpreadingSpeedScenario& scenario, const RowIndex& index) {
    const auto series = index.series("u", scenario.theta);
    std::vector<std::pair<double, double>> points;
    for (const GeometrySummary* s : series)
        if (s->r_origin && s->time >= scenario.window_start && s->time <= scenario.window_end)
            points.emplace_back(s->time, *s->r_origin);

    const std::string ineq = "fitted d r_theta/dt in [" + fmt(scenario.slope_min) + ", " +
                             fmt(scenario.slope_max) + "]";
    if (points.size() < 3) {
        report.verdicts.push_back(
            inconclusive("spreading_speed", ineq, "fewer than 3 invaded records in the window"));
        return;
    }
    const LineFit fit = fit_line(points);
    add_derived(report, "fitted_speed", fit.slope);
    add_derived(report, "fit_max_residual", fit.max_residual);
    add_derived(report, "c_star_upper", 2.0 * std::sqrt(ctx.reaction->sup_slope()));

    Verdict v;
    v.name = "spreading_speed";
    v.inequality = ineq;
    v.measured = fit.slope;
    v.bound = scenario.slope_max;
    v.status = (fit.slope >= scenario.slope_min && fit.slope <= scenario.slope_max)
                   ? VerdictStatus::Pass
                   : VerdictStatus::Fail;
    v.detail = fmt(points.size()) + " points, max residual " + fmt(fit.max_residual);
    report.verdicts.push_back(v);
}

// ---------------------------------------------------------------------------
// Steepness: late-window interface width and the (c* + 1) T time variation.

void build_steepness_verdicts(Report& report, const DeriveContext& ctx,
                              const SteepnessScenario& scenario, const RowIndex& index) {
    const double delta = scenario.datum.support_radius() + ctx.h;
    const auto lo_series = index.series("u", scenario.theta_prime);
    const auto hi_series = index.series("u", scenario.theta);
    const std::size_t n_rec = std::min(lo_series.size(), hi_series.size());

    std::optional<std::size_t> t0;
    for (std::size_t k = 0; k < n_rec; ++k) {
        if (hi_series[k]->r_origin && lo_series[k]->r_origin && *hi_series[k]->r_origin >= delta) {
            t0 = k;
            break;
        }
    }
    const std::string width_ineq = "min over late window of (r_theta' - r_theta) <= cap";
    const std::string var_ineq = "r_theta(t+T) - r_theta(t) <= (c* + 1) T";
    if (!t0) {
        report.verdicts.push_back(
            inconclusive("interface_width", width_ineq, "level pair not both invaded"));
        report.verdicts.push_back(
            inconclusive("time_variation", var_ineq, "level pair not both invaded"));
        return;
    }
    add_derived(report, "t0", hi_series[*t0]->time);

    double min_width = std::numeric_limits<double>::infinity();
    double max_width = -std::numeric_limits<double>::infinity();
    for (std::size_t k = *t0; k < n_rec; ++k) {
        if (hi_series[k]->time < ctx.late_start) continue;
        if (!hi_series[k]->r_origin || !lo_series[k]->r_origin) continue;
        const double width = *lo_series[k]->r_origin - *hi_series[k]->r_origin;
        min_width = std::min(min_width, width);
        max_width = std::max(max_width, width);
    }
    if (std::isfinite(min_width)) {
        add_derived(report, "late_min_width", min_width);
        add_derived(report, "late_max_width", max_width); // open-question column: sup variant
        report.verdicts.push_back(bounded_verdict("interface_width", width_ineq, min_width,
                                                  scenario.width_cap, true));
    } else {
        report.verdicts.push_back(
            inconclusive("interface_width", width_ineq, "no invaded records in the late window"));
    }

    const double c_star = 2.0 * std::sqrt(ctx.reaction->sup_slope());
    add_derived(report, "c_star", c_star);
    const long shift = std::max(1L, scenario.time_shift_records);
    double worst = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t k = *t0; k + shift < n_rec; ++k) {
        const GeometrySummary& a = *hi_series[k];
        const GeometrySummary& b = *hi_series[k + shift];
        if (!a.r_origin || !b.r_origin) continue;
        const double T = b.time - a.time;
        worst = std::max(worst, *b.r_origin - *a.r_origin - (c_star + 1.0) * T);
        any = true;
    }
    if (any)
        report.verdicts.push_back(bounded_verdict("time_variation", var_ineq, worst, 0.0, true,
                                                  "T=" + fmt(shift * ctx.record_interval)));
    else
        report.verdicts.push_back(
            inconclusive("time_variation", var_ineq, "no post-transient record pairs"));
}

// ---------------------------------------------------------------------------
// Anti-symmetrization: comparison chains, the |xi|/2 enclosing-radius lower
// bound, the inscribed-radius upper bound, and the sphericality refutations.

void build_antisym_verdicts(Report& report, const DeriveContext& ctx,
                            const AntiSymmetrizationScenario& scenario, const RowIndex& index) {
    const double h = ctx.h;
    const double delta1 = scenario.u1.support_radius() + h;
    const double delta2 = scenario.u2.support_radius() + h;
    const double xi_norm = scenario.xi.norm();
    add_derived(report, "xi_norm", xi_norm);

    if (ctx.comparisons) {
        for (const ComparisonStat& stat : *ctx.comparisons)
            report.verdicts.push_back(stat.to_verdict());
    } else {
        report.verdicts.push_back(runtime_only_verdict(
            "comparison_lower", "max(w1, tau_-xi w2) <= u at every record time"));
        report.verdicts.push_back(runtime_only_verdict(
            "comparison_upper", "u <= w1 + tau_-xi w2 at every record time"));
    }

    const auto u_theta = index.series("u", scenario.theta);
    const auto u_prime = index.series("u", scenario.theta_prime);
    const auto w1_theta = index.series("w1", scenario.theta);
    const auto w2_theta = index.series("w2", scenario.theta);
    const auto w1_half = index.series("w1", scenario.theta / 2.0);
    const auto w2_half = index.series("w2", scenario.theta / 2.0);

    // Reference transient: both single-bump solutions invaded out to their
    // supports at theta (hence also at theta/2).
    const std::size_t n_rec = std::min(
        {u_theta.size(), u_prime.size(), w1_theta.size(), w2_theta.size(), w1_half.size(),
         w2_half.size()});
    std::optional<std::size_t> t0;
    for (std::size_t k = 0; k < n_rec; ++k) {
        if (w1_theta[k]->r_origin && w2_theta[k]->r_origin && w1_half[k]->r_origin &&
            w2_half[k]->r_origin && *w1_theta[k]->r_origin >= delta1 &&
            *w2_theta[k]->r_origin >= delta2) {
            t0 = k;
            break;
        }
    }

    const std::string re_ineq = "R_e(u) >= min(r~1, r~2) + |xi|/2 - tol_geom";
    const std::string ri_ineq = "R_i(u) <= max_i(r~i at theta/2 + delta_i pi) + tol_geom";
    if (!t0) {
        report.verdicts.push_back(
            inconclusive("enclosing_lower_bound", re_ineq, "references not invaded within t_end"));
        report.verdicts.push_back(
            inconclusive("inscribed_upper_bound", ri_ineq, "references not invaded within t_end"));
    } else {
        add_derived(report, "t0_ref", w1_theta[*t0]->time);
        double worst_re = std::numeric_limits<double>::infinity();  // min margin, want >= 0
        double worst_ri = -std::numeric_limits<double>::infinity(); // max excess, want <= 0
        bool any_re = false, any_ri = false;
        for (std::size_t k = *t0; k < n_rec; ++k) {
            const GeometrySummary& su = *u_theta[k];
            if (su.R_e && w1_theta[k]->r_origin && w2_theta[k]->r_origin) {
                const double tol =
                    tol_geom(h, std::max(circ_scale(*w1_theta[k]), circ_scale(*w2_theta[k])),
                             ctx.rays);
                const double reference =
                    std::min(*w1_theta[k]->r_origin, *w2_theta[k]->r_origin);
                worst_re = std::min(worst_re, *su.R_e - reference - xi_norm / 2.0 + tol);
                any_re = true;
            }
            if (su.R_i && w1_half[k]->r_origin && w2_half[k]->r_origin) {
                const double tol =
                    tol_geom(h, std::max(circ_scale(*w1_half[k]), circ_scale(*w2_half[k])),
                             ctx.rays);
                const double rhs = std::max(*w1_half[k]->r_origin + delta1 * M_PI,
                                            *w2_half[k]->r_origin + delta2 * M_PI);
                worst_ri = std::max(worst_ri, *su.R_i - rhs - tol);
                any_ri = true;
            }
        }
        if (any_re)
            report.verdicts.push_back(
                bounded_verdict("enclosing_lower_bound", re_ineq, worst_re, 0.0, false));
        else
            report.verdicts.push_back(
                inconclusive("enclosing_lower_bound", re_ineq, "no usable records"));
        if (any_ri)
            report.verdicts.push_back(
                bounded_verdict("inscribed_upper_bound", ri_ineq, worst_ri, 0.0, true));
        else
            report.verdicts.push_back(
                inconclusive("inscribed_upper_bound", ri_ineq, "no usable records"));
    }

    // Late-window sphericality measurements on the combined solution.
    double late_min_gap = std::numeric_limits<double>::infinity();
    double ii_worst = -std::numeric_limits<double>::infinity();
    bool any_gap = false, any_ii = false;
    for (std::size_t k = 0; k < n_rec; ++k) {
        if (u_theta[k]->time < ctx.late_start) continue;
        if (u_theta[k]->gap) {
            late_min_gap = std::min(late_min_gap, *u_theta[k]->gap);
            any_gap = true;
        }
        if (u_prime[k]->R_i && u_theta[k]->R_e) {
            ii_worst = std::max(ii_worst, *u_prime[k]->R_i - *u_theta[k]->R_e);
            any_ii = true;
        }
    }
    if (any_gap) add_derived(report, "late_min_gap", late_min_gap);
    if (scenario.min_gap_required) {
        const std::string ineq = "min over late window of gap_theta(u) >= required floor";
        if (any_gap)
            report.verdicts.push_back(bounded_verdict("non_sphericality_gap", ineq, late_min_gap,
                                                      *scenario.min_gap_required, false));
        else
            report.verdicts.push_back(
                inconclusive("non_sphericality_gap", ineq, "no gap measurements in late window"));
    }
    const std::string ii_ineq =
        "R_i at theta' stays below R_e at theta over the late window (refutes (ii))";
    if (any_ii)
        report.verdicts.push_back(bounded_verdict("definition_ii_refuted", ii_ineq, ii_worst,
                                                  0.0, true,
                                                  "max of R_i(theta') - R_e(theta)"));
    else
        report.verdicts.push_back(
            inconclusive("definition_ii_refuted", ii_ineq, "no usable late-window records"));
}

// ---------------------------------------------------------------------------
// Two-solution comparison: the (minmax) envelopes and the est1a/est1b/est2
// level-set estimates, plus the late-window level distance.

struct TwoSolutionDeltas {
    double delta1 = 0.0, delta2 = 0.0, delta_upper = 0.0, delta_lower = 0.0;
};

TwoSolutionDeltas two_solution_deltas(const GridSpec& grid, const TwoSolutionScenario& scenario) {
    TwoSolutionDeltas d;
    const double h = grid.spacing();
    d.delta1 = scenario.datum1.support_radius() + h;
    d.delta2 = scenario.datum2.support_radius() + h;
    d.delta_upper = std::max(d.delta1, d.delta2);
    const ScalarField u1 = make_field(grid, scenario.datum1);
    const ScalarField u2 = make_field(grid, scenario.datum2);
    const ScalarField lower = nodewise(translate_field(u1, scenario.zeta_shift), u2, op_min);
    d.delta_lower = field_support_radius(lower);
    return d;
}

void build_two_solution_verdicts(Report& report, const DeriveContext& ctx,
                                 const TwoSolutionScenario& scenario, const GridSpec& grid,
                                 const RowIndex& index) {
    const double theta_hi = std::max(scenario.theta, scenario.theta_prime);
    const double theta_lo = std::min(scenario.theta, scenario.theta_prime);
    const TwoSolutionDeltas deltas = two_solution_deltas(grid, scenario);
    const double zeta_norm = scenario.zeta_shift.norm();

    if (ctx.comparisons) {
        for (const ComparisonStat& stat : *ctx.comparisons)
            report.verdicts.push_back(stat.to_verdict());
    } else {
        report.verdicts.push_back(runtime_only_verdict(
            "comparison_minmax", "lower <= tau_zeta u1, u2 and upper >= u1, u2 at every record"));
    }

    const auto r1 = index.series("u1", scenario.theta);
    const auto r2 = index.series("u2", scenario.theta_prime);
    const auto low = index.series("lower", theta_hi);
    const auto high = index.series("upper", theta_lo);
    const std::size_t n_rec = std::min({r1.size(), r2.size(), low.size(), high.size()});

    std::optional<std::size_t> t0;
    for (std::size_t k = 0; k < n_rec; ++k) {
        if (r1[k]->r_origin && r2[k]->r_origin && low[k]->r_origin && high[k]->r_origin &&
            *r1[k]->r_origin >= deltas.delta1 && *r2[k]->r_origin >= deltas.delta2 &&
            *high[k]->r_origin >= deltas.delta_upper && *low[k]->r_origin >= deltas.delta_lower) {
            t0 = k;
            break;
        }
    }

    const std::string est1a_ineq = "r_lower(theta_hi) <= r2(theta') + delta_2 pi + tol_geom";
    const std::string est1b_ineq =
        "r_lower(theta_hi) <= |zeta| + r1(theta) + delta_1 pi + tol_geom";
    const std::string est2_ineq = "r1, r2 <= r_upper(theta_lo) + max delta pi + tol_geom";
    const std::string dist_ineq = "min over late window of |r1(theta) - r2(theta')| <= cap";
    if (!t0) {
        const std::pair<std::string, std::string> pending[] = {{"est1a", est1a_ineq},
                                                               {"est1b", est1b_ineq},
                                                               {"est2", est2_ineq},
                                                               {"level_distance", dist_ineq}};
        for (const auto& [name, ineq] : pending)
            report.verdicts.push_back(inconclusive(name, ineq, "solutions not all invaded"));
        return;
    }
    add_derived(report, "t0", r1[*t0]->time);

    double worst_1a = -std::numeric_limits<double>::infinity();
    double worst_1b = -std::numeric_limits<double>::infinity();
    double worst_2 = -std::numeric_limits<double>::infinity();
    double min_distance = std::numeric_limits<double>::infinity();
    bool any_distance = false;
    for (std::size_t k = *t0; k < n_rec; ++k) {
        if (!(r1[k]->r_origin && r2[k]->r_origin && low[k]->r_origin && high[k]->r_origin))
            continue;
        const double scale = std::max({circ_scale(*r1[k]), circ_scale(*r2[k]),
                                       circ_scale(*low[k]), circ_scale(*high[k])});
        const double tol = tol_geom(ctx.h, scale, ctx.rays);
        const double rl = *low[k]->r_origin, rh = *high[k]->r_origin;
        const double v1 = *r1[k]->r_origin, v2 = *r2[k]->r_origin;
        worst_1a = std::max(worst_1a, rl - v2 - deltas.delta2 * M_PI - tol);
        worst_1b = std::max(worst_1b, rl - zeta_norm - v1 - deltas.delta1 * M_PI - tol);
        worst_2 = std::max(worst_2,
                           std::max(v1, v2) - rh - deltas.delta_upper * M_PI - tol);
        if (r1[k]->time >= ctx.late_start) {
            min_distance = std::min(min_distance, std::abs(v1 - v2));
            any_distance = true;
        }
    }
    report.verdicts.push_back(bounded_verdict("est1a", est1a_ineq, worst_1a, 0.0, true));
    report.verdicts.push_back(bounded_verdict("est1b", est1b_ineq, worst_1b, 0.0, true));
    report.verdicts.push_back(bounded_verdict("est2", est2_ineq, worst_2, 0.0, true));
    if (any_distance) {
        add_derived(report, "late_min_level_distance", min_distance);
        report.verdicts.push_back(bounded_verdict("level_distance", dist_ineq, min_distance,
                                                  scenario.distance_cap, true));
    } else {
        report.verdicts.push_back(
            inconclusive("level_distance", dist_ineq, "no invaded records in late window"));
    }
}

std::vector<ReportRow> trajectory_rows(const Trajectory& traj, const std::string& id) {
    std::vector<ReportRow> rows;
    for (const TrajectoryRecord& rec : traj.records)
        for (const GeometrySummary& s : rec.summaries) rows.push_back({id, s});
    return rows;
}

RunOptions single_run_options(const LabSettings& lab, const std::string& id) {
    RunOptions options;
    options.rays = lab.rays;
    options.seed = lab.seed;
    if (lab.snapshot_sink) {
        options.hook = [&lab, id, index = std::make_shared<long>(0)](const ScalarField& u,
                                                                     TrajectoryRecord&) {
            lab.snapshot_sink(id, u, (*index)++);
        };
    }
    return options;
}

} // namespace

std::string scenario_name(const Scenario& scenario) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetrizationScenario>) return "symmetrization";
            else if constexpr (std::is_same_v<T, AntiSymmetrizationScenario>) return "anti_symmetrization";
            else if constexpr (std::is_same_v<T, SteepnessScenario>) return "steepness";
            else if constexpr (std::is_same_v<T, SpreadingSpeedScenario>) return "spreading_speed";
            else return "two_solution";
        },
        scenario);
}

std::string to_string(VerdictStatus status) {
    switch (status) {
    case VerdictStatus::Pass: return "PASS";
    case VerdictStatus::Fail: return "FAIL";
    case VerdictStatus::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

bool Report::has_failure() const {
    return std::any_of(verdicts.begin(), verdicts.end(),
                       [](const Verdict& v) { return v.status == VerdictStatus::Fail; });
}

const Verdict* Report::find(const std::string& name) const {
    for (const Verdict& v : verdicts)
        if (v.name == name) return &v;
    return nullptr;
}

std::optional<double> Report::derived_value(const std::string& name) const {
    for (const auto& [key, value] : derived)
        if (key == name) return value;
    return std::nullopt;
}

Report run_symmetrization(const LabSettings& lab, const SymmetrizationScenario& scenario) {
    if (scenario.thetas.empty())
        throw ContractViolation("symmetrization: at least one threshold required");
    Report report;
    report.scenario = "symmetrization";

    std::vector<GeometryProbe> probes;
    for (double theta : scenario.thetas) probes.push_back({theta});
    SolverConfig config = lab.solver;
    const Trajectory traj =
        run(config, scenario.datum, lab.reaction, probes, single_run_options(lab, "u"));
    report.rows = trajectory_rows(traj, "u");
    add_derived(report, "min_recorded_value", traj.min_recorded_value);

    build_symmetrization_verdicts(report, make_context(lab), scenario, RowIndex(report.rows));
    return report;
}

Report run_spreading_speed(const LabSettings& lab, const SpreadingSpeedScenario& scenario) {
    if (!(scenario.window_start < scenario.window_end))
        throw ContractViolation("spreading_speed: fit window must be nonempty");
    Report report;
    report.scenario = "spreading_speed";
    const Trajectory traj = run(lab.solver, scenario.datum, lab.reaction, {{scenario.theta}},
                                single_run_options(lab, "u"));
    report.rows = trajectory_rows(traj, "u");
    add_derived(report, "min_recorded_value", traj.min_recorded_value);
    build_speed_verdicts(report, make_context(lab), scenario, RowIndex(report.rows));
    return report;
}

Report run_steepness(const LabSettings& lab, const SteepnessScenario& scenario) {
    const ReactionTerm& f = lab.reaction;
    const ReactionTerm* g = scenario.lower_bound_g ? &*scenario.lower_bound_g : nullptr;
    if (!g && !f.time_dependent()) g = &f; // a time-independent f bounds itself
    const double theta0 = (g ? *g : f).sign_change();
    if (!(theta0 < scenario.theta_prime && scenario.theta_prime < scenario.theta &&
          scenario.theta < f.saturation()))
        throw ContractViolation("steepness: requires theta0 < theta' < theta < Z");
    if (g) {
        const CheckVerdict lower =
            check_lower_bound(f, *g, default_z_samples(*g), default_t_samples(f));
        if (!lower.pass)
            throw ContractViolation("steepness: hypothesis f >= g fails (" + lower.witness + ")");
    }

    Report report;
    report.scenario = "steepness";

    // Non-KPP terms invade only from large data; certify the datum covers the
    // configured ball at the upper level.
    const bool kpp_ok = check_kpp(f, default_z_samples(f), default_t_samples(f)).pass;
    if (!kpp_ok && scenario.invasion_ball_radius > 0.0) {
        const ScalarField u0 = make_field(lab.solver.grid, scenario.datum);
        double min_on_ball = std::numeric_limits<double>::infinity();
        const int n = u0.grid.nodes_per_side;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                if (u0.grid.node(ix, iy).norm() <= scenario.invasion_ball_radius)
                    min_on_ball = std::min(min_on_ball, u0.at(ix, iy));
        Verdict v;
        v.name = "invasion_certified";
        v.inequality = "datum >= theta on the configured ball (non-KPP invasion)";
        v.measured = min_on_ball;
        v.bound = scenario.theta;
        v.status =
            min_on_ball >= scenario.theta ? VerdictStatus::Pass : VerdictStatus::Inconclusive;
        v.detail = "ball radius " + fmt(scenario.invasion_ball_radius);
        report.verdicts.push_back(v);
    }

    const Trajectory traj =
        run(lab.solver, scenario.datum, lab.reaction,
            {{scenario.theta_prime}, {scenario.theta}}, single_run_options(lab, "u"));
    report.rows = trajectory_rows(traj, "u");
    add_derived(report, "min_recorded_value", traj.min_recorded_value);
    build_steepness_verdicts(report, make_context(lab), scenario, RowIndex(report.rows));
    return report;
}

Report run_antisymmetrization(const LabSettings& lab, const AntiSymmetrizationScenario& scenario) {
    const double h = lab.solver.grid.spacing();
    if (!(scenario.theta_prime < scenario.theta))
        throw ContractViolation("anti_symmetrization: requires theta' < theta");
    require_lattice(scenario.xi, h, "anti_symmetrization: xi");
    require_kpp(lab.reaction, "anti_symmetrization");

    Report report;
    report.scenario = "anti_symmetrization";

    const GridSpec& grid = lab.solver.grid;
    const ScalarField w1_0 = make_field(grid, scenario.u1);
    const ScalarField w2_0 = make_field(grid, scenario.u2);
    // u_0(x) = u1(x) + u2(x + xi); the lattice translation keeps the identity
    // u_0 = w1_0 + tau_-xi w2_0 exact nodewise.
    const Vec2 minus_xi{-scenario.xi.x, -scenario.xi.y};
    ScalarField u_0 = nodewise(w1_0, translate_field(w2_0, minus_xi), op_sum);
    {
        const BoundaryCheck guard = boundary_guard(u_0, lab.solver.boundary_tolerance);
        if (!guard.ok)
            throw DomainTooSmall("anti_symmetrization: shifted datum reaches the boundary");
    }

    const double delta_u = field_support_radius(u_0);
    std::vector<SolutionSetup> setups;
    setups.push_back({"u", std::move(u_0), delta_u, {scenario.theta, scenario.theta_prime}});
    setups.push_back({"w1", w1_0, scenario.u1.support_radius() + h,
                      {scenario.theta, scenario.theta / 2.0}});
    setups.push_back({"w2", w2_0, scenario.u2.support_radius() + h,
                      {scenario.theta, scenario.theta / 2.0}});

    std::vector<ComparisonStat> stats(2);
    stats[0].name = "comparison_lower";
    stats[0].inequality = "max(w1, tau_-xi w2) <= u at every record time";
    stats[1].name = "comparison_upper";
    stats[1].inequality = "u <= w1 + tau_-xi w2 at every record time";

    const auto hook = [&](long, double time, std::span<const ScalarField> fields) {
        const ScalarField tw2 = translate_field(fields[2], minus_xi);
        stats[0].update(pointwise_leq(nodewise(fields[1], tw2, op_max), fields[0], kComparisonTol),
                        time);
        stats[1].update(pointwise_leq(fields[0], nodewise(fields[1], tw2, op_sum), kComparisonTol),
                        time);
    };
    LockstepResult result = run_lockstep(lab, std::move(setups), hook);
    report.rows = std::move(result.rows);
    add_derived(report, "min_recorded_value", result.min_value);

    DeriveContext ctx = make_context(lab);
    ctx.comparisons = &stats;
    build_antisym_verdicts(report, ctx, scenario, RowIndex(report.rows));
    return report;
}

Report run_two_solution(const LabSettings& lab, const TwoSolutionScenario& scenario) {
    const double h = lab.solver.grid.spacing();
    require_lattice(scenario.zeta_shift, h, "two_solution: zeta_shift");
    require_kpp(lab.reaction, "two_solution");

    const GridSpec& grid = lab.solver.grid;
    const ScalarField u1_0 = make_field(grid, scenario.datum1);
    const ScalarField u2_0 = make_field(grid, scenario.datum2);
    const ScalarField lower_0 =
        nodewise(translate_field(u1_0, scenario.zeta_shift), u2_0, op_min);
    if (lower_0.max_value() <= 0.0)
        throw ContractViolation("two_solution: zeta_shift yields an identically-zero min datum");
    const ScalarField upper_0 = nodewise(u1_0, u2_0, op_max);

    const double theta_hi = std::max(scenario.theta, scenario.theta_prime);
    const double theta_lo = std::min(scenario.theta, scenario.theta_prime);
    const TwoSolutionDeltas deltas = two_solution_deltas(grid, scenario);

    std::vector<SolutionSetup> setups;
    setups.push_back({"u1", u1_0, deltas.delta1, {scenario.theta, scenario.theta_prime}});
    setups.push_back({"u2", u2_0, deltas.delta2, {scenario.theta, scenario.theta_prime}});
    setups.push_back({"lower", lower_0, deltas.delta_lower, {theta_hi}});
    setups.push_back({"upper", upper_0, deltas.delta_upper, {theta_lo}});

    std::vector<ComparisonStat> stats(1);
    stats[0].name = "comparison_minmax";
    stats[0].inequality = "lower <= tau_zeta u1, u2 and upper >= u1, u2 at every record";

    const auto hook = [&](long, double time, std::span<const ScalarField> fields) {
        const ScalarField tu1 = translate_field(fields[0], scenario.zeta_shift);
        stats[0].update(pointwise_leq(fields[2], tu1, kComparisonTol), time);
        stats[0].update(pointwise_leq(fields[2], fields[1], kComparisonTol), time);
        stats[0].update(pointwise_leq(fields[0], fields[3], kComparisonTol), time);
        stats[0].update(pointwise_leq(fields[1], fields[3], kComparisonTol), time);
    };
    LockstepResult result = run_lockstep(lab, std::move(setups), hook);

    Report report;
    report.scenario = "two_solution";
    report.rows = std::move(result.rows);
    add_derived(report, "min_recorded_value", result.min_value);

    DeriveContext ctx = make_context(lab);
    ctx.comparisons = &stats;
    build_two_solution_verdicts(report, ctx, scenario, grid, RowIndex(report.rows));
    return report;
}

Report run_scenario(const LabSettings& lab, const Scenario& scenario) {
    return std::visit(
        [&](const auto& s) -> Report {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetrizationScenario>)
                return run_symmetrization(lab, s);
            else if constexpr (std::is_same_v<T, AntiSymmetrizationScenario>)
                return run_antisymmetrization(lab, s);
            else if constexpr (std::is_same_v<T, SteepnessScenario>)
                return run_steepness(lab, s);
            else if constexpr (std::is_same_v<T, SpreadingSpeedScenario>)
                return run_spreading_speed(lab, s);
            else
                return run_two_solution(lab, s);
        },
        scenario);
}

LineFit fit_line(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw ContractViolation("fit_line: need at least 3 points");
    double mt = 0.0, mr = 0.0;
    for (const auto& [t, r] : points) {
        mt += t;
        mr += r;
    }
    mt /= points.size();
    mr /= points.size();
    double num = 0.0, den = 0.0;
    for (const auto& [t, r] : points) {
        num += (t - mt) * (r - mr);
        den += (t - mt) * (t - mt);
    }
    if (!(den > 0.0)) throw ContractViolation("fit_line: degenerate time window");
    LineFit fit;
    fit.slope = num / den;
    fit.intercept = mr - fit.slope * mt;
    for (const auto& [t, r] : points)
        fit.max_residual = std::max(fit.max_residual,
                                    std::abs(r - (fit.intercept + fit.slope * t)));
    return fit;
}

std::pair<double, double> estimate_speed(const Trajectory& trajectory, double theta, double t_a,
                                         double t_b) {
    std::vector<std::pair<double, double>> points;
    for (const auto& [time, radius] : trajectory.level_radius(theta))
        if (radius && time >= t_a && time <= t_b) points.emplace_back(time, *radius);
    const LineFit fit = fit_line(points);
    return {fit.slope, fit.max_residual};
}

Report derive_report_from_rows(const LabSettings& lab, const Scenario& scenario,
                               std::vector<ReportRow> rows) {
    Report report;
    report.scenario = scenario_name(scenario);
    report.rows = std::move(rows);
    DeriveContext ctx = make_context(lab);
    ctx.from_csv = true;
    const RowIndex index(report.rows);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetrizationScenario>)
                build_symmetrization_verdicts(report, ctx, s, index);
            else if constexpr (std::is_same_v<T, AntiSymmetrizationScenario>)
                build_antisym_verdicts(report, ctx, s, index);
            else if constexpr (std::is_same_v<T, SteepnessScenario>)
                build_steepness_verdicts(report, ctx, s, index);
            else if constexpr (std::is_same_v<T, SpreadingSpeedScenario>)
                build_speed_verdicts(report, ctx, s, index);
            else
                build_two_solution_verdicts(report, ctx, s, lab.solver.grid, index);
        },
        scenario);
    return report;
}

} // namespace rdsym
