#include "rdsym/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace rdsym {

namespace {

std::string fmt_time(double t) {
    std::ostringstream os;
    os.precision(12);
    os << t;
    return os.str();
}

// One row chunk of the forward-Euler update; neighbour rows outside the
// domain are the shared zero row, so every node sees ghost value 0.
template <class Reaction>
bool step_rows(const ScalarField& in, ScalarField& out, double dt, double inv_h2, double t,
               const Reaction& f, const double* zero_row, int iy_begin, int iy_end) {
    const int n = in.grid.nodes_per_side;
    bool finite = true;
    for (int iy = iy_begin; iy < iy_end; ++iy) {
        const double* cur = &in.values[static_cast<std::size_t>(iy) * n];
        const double* below = iy > 0 ? cur - n : zero_row;
        const double* above = iy + 1 < n ? cur + n : zero_row;
        double* dst = &out.values[static_cast<std::size_t>(iy) * n];

        auto update = [&](int ix, double left, double right) {
            const double c = cur[ix];
            const double lap = (left + right + below[ix] + above[ix] - 4.0 * c) * inv_h2;
            const double v = c + dt * (lap + f(t, c));
            dst[ix] = v;
            finite = finite && std::isfinite(v);
        };
        update(0, 0.0, cur[1]);
        for (int ix = 1; ix < n - 1; ++ix) update(ix, cur[ix - 1], cur[ix + 1]);
        update(n - 1, cur[n - 2], 0.0);
    }
    return finite;
}

template <class Reaction>
void step_dispatch(const ScalarField& in, ScalarField& out, double dt, double t,
                   const Reaction& f, int threads) {
    const int n = in.grid.nodes_per_side;
    const double h = in.grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    static thread_local std::vector<double> zeros;
    if (static_cast<int>(zeros.size()) < n) zeros.assign(n, 0.0);

    bool finite = true;
    if (threads <= 1 || n < 4 * threads) {
        finite = step_rows(in, out, dt, inv_h2, t, f, zeros.data(), 0, n);
    } else {
        std::vector<char> ok(threads, 1);
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w) {
            const int lo = static_cast<int>(static_cast<long>(n) * w / threads);
            const int hi = static_cast<int>(static_cast<long>(n) * (w + 1) / threads);
            pool.emplace_back([&, lo, hi, w] {
                ok[w] = step_rows(in, out, dt, inv_h2, t, f, zeros.data(), lo, hi) ? 1 : 0;
            });
        }
        for (auto& th : pool) th.join();
        finite = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
    }
    if (!finite)
        throw NumericalBlowup("step_2d: non-finite value at t=" + fmt_time(in.time + dt));
}

} // namespace

void SolverConfig::validate() const {
    if (!(cfl_fraction > 0.0 && cfl_fraction < 1.0))
        throw ContractViolation("SolverConfig: cfl_fraction must lie in (0, 1)");
    if (t_end < 0.0) throw ContractViolation("SolverConfig: t_end must be >= 0");
    if (t_end > 0.0 && record_interval < dt() * (1.0 - 1e-12))
        throw ContractViolation("SolverConfig: record_interval must be >= dt");
    if (!(boundary_tolerance > 0.0))
        throw ContractViolation("SolverConfig: boundary_tolerance must be > 0");
    if (threads < 1) throw ContractViolation("SolverConfig: threads must be >= 1");
}

RecordSchedule RecordSchedule::from(const SolverConfig& config) {
    RecordSchedule s;
    s.dt = config.dt();
    s.total_steps = config.t_end > 0.0
                        ? static_cast<long>(std::ceil(config.t_end / s.dt * (1.0 - 1e-12)))
                        : 0;
    s.steps_per_record =
        config.t_end > 0.0 ? std::max(1L, std::lround(config.record_interval / s.dt)) : 1;
    return s;
}

ScalarField step_2d(const ScalarField& field, const ReactionTerm& f, double dt, int threads) {
    const double h = field.grid.spacing();
    if (!(dt > 0.0) || dt > h * h / 4.0 * (1.0 + 1e-12))
        throw ContractViolation("step_2d: dt must satisfy 0 < dt <= h^2/4");

    ScalarField out(field.grid, field.time + dt);
    const double t = field.time;
    switch (f.kind()) {
    case ReactionKind::Linear: {
        const double zeta = f.param_a() + f.param_b() * std::sin(f.param_omega() * t);
        step_dispatch(field, out, dt, t,
                      [zeta](double, double z) { return zeta * z; }, threads);
        break;
    }
    case ReactionKind::FisherKPP: {
        const double rho = f.param_a();
        step_dispatch(field, out, dt, t,
                      [rho](double, double z) { return rho * z * (1.0 - z); }, threads);
        break;
    }
    case ReactionKind::TimePeriodicKPP: {
        const double zeta = f.param_a() + f.param_b() * std::sin(f.param_omega() * t);
        step_dispatch(field, out, dt, t,
                      [zeta](double, double z) { return zeta * z * (1.0 - z); }, threads);
        break;
    }
    case ReactionKind::Combustion: {
        const double theta0 = f.param_a();
        step_dispatch(
            field, out, dt, t,
            [theta0](double, double z) {
                return (z <= theta0 || z > 1.0) ? 0.0 : (z - theta0) * (1.0 - z);
            },
            threads);
        break;
    }
    case ReactionKind::Bistable: {
        const double a = f.param_a();
        step_dispatch(field, out, dt, t,
                      [a](double, double z) { return z * (1.0 - z) * (z - a); }, threads);
        break;
    }
    }
    return out;
}

RadialProfile step_radial(const RadialProfile& profile, const ReactionTerm& f, double dt) {
    const double h = profile.spacing;
    if (profile.dimension < 1) throw ContractViolation("step_radial: dimension must be >= 1");
    if (!(h > 0.0)) throw ContractViolation("step_radial: spacing must be > 0");
    if (!(dt > 0.0) || dt > h * h / 2.0 * (1.0 + 1e-12))
        throw ContractViolation("step_radial: dt must satisfy 0 < dt <= h^2/2");
    if (profile.values.size() < 3) throw ContractViolation("step_radial: need at least 3 nodes");

    const int m = static_cast<int>(profile.values.size()) - 1;
    const double N = profile.dimension;
    const double t = profile.time;
    const double inv_h2 = 1.0 / (h * h);
    const std::vector<double>& u = profile.values;

    RadialProfile out = profile;
    out.time = profile.time + dt;
    // r = 0: symmetry ghost u_{-1} = u_1 and lap u(0) = N u''(0).
    out.values[0] = u[0] + dt * (2.0 * N * (u[1] - u[0]) * inv_h2 + f(t, u[0]));
    for (int k = 1; k < m; ++k) {
        const double u_rr = (u[k + 1] - 2.0 * u[k] + u[k - 1]) * inv_h2;
        const double u_r = (u[k + 1] - u[k - 1]) / (2.0 * h);
        out.values[k] = u[k] + dt * (u_rr + (N - 1.0) / (k * h) * u_r + f(t, u[k]));
    }
    out.values[m] = 0.0; // outer Dirichlet boundary

    for (double v : out.values)
        if (!std::isfinite(v))
            throw NumericalBlowup("step_radial: non-finite value at t=" + fmt_time(out.time));
    return out;
}

BoundaryCheck boundary_guard(const ScalarField& field, double tol) {
    const int n = field.grid.nodes_per_side;
    BoundaryCheck check;
    auto look = [&](int ix, int iy) {
        const double v = std::abs(field.at(ix, iy));
        if (v > check.max_abs) {
            check.max_abs = v;
            check.ix = ix;
            check.iy = iy;
        }
    };
    for (int ix = 0; ix < n; ++ix) {
        look(ix, 0);
        look(ix, n - 1);
    }
    for (int iy = 1; iy < n - 1; ++iy) {
        look(0, iy);
        look(n - 1, iy);
    }
    check.ok = check.max_abs <= tol;
    return check;
}

LeqVerdict pointwise_leq(const ScalarField& a, const ScalarField& b, double tol) {
    if (a.grid != b.grid) throw ContractViolation("pointwise_leq: grid mismatch");
    if (std::abs(a.time - b.time) > 1e-9)
        throw ContractViolation("pointwise_leq: fields are at different times");
    LeqVerdict verdict;
    verdict.max_violation = -std::numeric_limits<double>::infinity();
    const int n = a.grid.nodes_per_side;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double d = a.at(ix, iy) - b.at(ix, iy);
            if (d > verdict.max_violation) {
                verdict.max_violation = d;
                verdict.ix = ix;
                verdict.iy = iy;
            }
        }
    }
    verdict.pass = verdict.max_violation <= tol;
    return verdict;
}

ScalarField translate_field(const ScalarField& field, Vec2 shift) {
    const double h = field.grid.spacing();
    const long kx = std::lround(shift.x / h);
    const long ky = std::lround(shift.y / h);
    if (std::abs(shift.x - kx * h) > 1e-9 * h || std::abs(shift.y - ky * h) > 1e-9 * h)
        throw ContractViolation("translate_field: shift must be a lattice vector");

    const int n = field.grid.nodes_per_side;
    ScalarField out(field.grid, field.time);
    for (int iy = 0; iy < n; ++iy) {
        const long sy = iy - ky;
        if (sy < 0 || sy >= n) continue;
        for (int ix = 0; ix < n; ++ix) {
            const long sx = ix - kx;
            if (sx < 0 || sx >= n) continue;
            out.at(ix, iy) = field.at(static_cast<int>(sx), static_cast<int>(sy));
        }
    }
    return out;
}

std::vector<std::pair<double, std::optional<double>>> Trajectory::level_radius(
    double theta) const {
    std::vector<std::pair<double, std::optional<double>>> out;
    out.reserve(records.size());
    for (const TrajectoryRecord& rec : records)
        for (const GeometrySummary& s : rec.summaries)
            if (std::abs(s.theta - theta) <= 1e-12) out.emplace_back(rec.time, s.r_origin);
    return out;
}

Trajectory run(const SolverConfig& config, const DatumSpec& datum, const ReactionTerm& f,
               const std::vector<GeometryProbe>& probes, const RunOptions& options) {
    config.validate();
    const double Z = f.saturation();
    for (const GeometryProbe& p : probes)
        if (!(p.theta > 0.0) || !(p.theta < Z))
            throw ContractViolation("run: probe threshold must lie in (0, Z)");

    const RecordSchedule sched = RecordSchedule::from(config);
    const double delta = datum.support_radius() + config.grid.spacing();

    Trajectory traj;
    traj.config = config;
    traj.reaction_name = f.name();
    traj.datum = datum;
    traj.min_recorded_value = std::numeric_limits<double>::infinity();

    ScalarField field = make_field(config.grid, datum);
    long record_index = 0;

    auto record = [&](const ScalarField& u) {
        const BoundaryCheck guard = boundary_guard(u, config.boundary_tolerance);
        if (!guard.ok) {
            std::ostringstream os;
            os << "run: boundary guard tripped at t=" << fmt_time(u.time)
               << " (max |u|=" << guard.max_abs << " at node " << guard.ix << "," << guard.iy
               << ")";
            throw DomainTooSmall(os.str());
        }
        TrajectoryRecord rec;
        rec.time = u.time;
        rec.summaries.reserve(probes.size());
        for (const GeometryProbe& p : probes)
            rec.summaries.push_back(summarize(u, p.theta, delta, options.rays, options.seed));
        if (options.store_snapshots && record_index % std::max(1L, options.snapshot_stride) == 0)
            rec.snapshot = u;
        if (options.hook) options.hook(u, rec);
        traj.min_recorded_value = std::min(traj.min_recorded_value, u.min_value());
        traj.records.push_back(std::move(rec));
        ++record_index;
    };

    record(field);
    for (long step = 1; step <= sched.total_steps; ++step) {
        field = step_2d(field, f, sched.dt, config.threads);
        field.time = step * sched.dt; // integer schedule, no accumulated drift
        if (sched.is_record_step(step)) record(field);
    }
    return traj;
}

} // namespace rdsym
