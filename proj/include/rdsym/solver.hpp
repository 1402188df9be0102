// Monotone explicit finite differences for the 2D Cartesian problem and the
// 1D radial problem, comparison utilities, and the record-time run loop.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rdsym/fields.hpp"
#include "rdsym/geometry.hpp"
#include "rdsym/reactions.hpp"

namespace rdsym {

struct SolverConfig {
    GridSpec grid;
    double cfl_fraction = 0.8; // sigma in (0, 1); dt = sigma h^2 / 4
    double t_end = 0.0;
    double record_interval = 0.0;
    double boundary_tolerance = 1e-6;
    int threads = 1;

    double dt() const {
        const double h = grid.spacing();
        return cfl_fraction * h * h / 4.0;
    }
    void validate() const;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

// Integer record schedule derived from the config; all times are step * dt.
struct RecordSchedule {
    double dt = 0.0;
    long steps_per_record = 1;
    long total_steps = 0;

    static RecordSchedule from(const SolverConfig& config);
    bool is_record_step(long step) const {
        return step % steps_per_record == 0 || step == total_steps;
    }
};

// One forward-Euler step of u' = lap u + f(t, u) with the 5-point Laplacian
// and zero ghost values outside the domain. Requires dt <= h^2/4.
ScalarField step_2d(const ScalarField& field, const ReactionTerm& f, double dt, int threads = 1);

// Radially symmetric solution profile in R^N sampled at r_k = k h.
struct RadialProfile {
    int dimension = 2;
    double spacing = 0.0;
    std::vector<double> values; // values[k] = u(k h); last node is Dirichlet 0
    double time = 0.0;
};

// Radial step: centered differences for u_rr and (N-1)/r u_r; at r = 0 the
// symmetry limit lap u(0) = N u''(0) gives 2N (u_1 - u_0)/h^2. Requires dt <= h^2/2.
RadialProfile step_radial(const RadialProfile& profile, const ReactionTerm& f, double dt);

struct BoundaryCheck {
    bool ok = true;
    double max_abs = 0.0;
    int ix = 0, iy = 0;
};

// ok iff max |u| over boundary nodes <= tol.
BoundaryCheck boundary_guard(const ScalarField& field, double tol);

struct LeqVerdict {
    bool pass = true;
    double max_violation = 0.0; // max of a - b
    int ix = 0, iy = 0;
};

// a <= b + tol nodewise; requires identical grids and times.
LeqVerdict pointwise_leq(const ScalarField& a, const ScalarField& b, double tol);

// tau_shift u(x) = u(x - shift); shift must be a lattice vector (multiple of h).
// Zeros shift in from outside the domain.
ScalarField translate_field(const ScalarField& field, Vec2 shift);

struct GeometryProbe {
    double theta = 0.0;
};

struct TrajectoryRecord {
    double time = 0.0;
    std::vector<GeometrySummary> summaries; // one per probe, in probe order
    std::optional<ScalarField> snapshot;
};

struct Trajectory {
    SolverConfig config;
    std::string reaction_name;
    DatumSpec datum;
    std::vector<TrajectoryRecord> records;
    double min_recorded_value = 0.0; // over all recorded fields (positivity check)

    // r_origin of the probe with the given theta, per record time.
    std::vector<std::pair<double, std::optional<double>>> level_radius(double theta) const;
};

using RecordHook = std::function<void(const ScalarField&, TrajectoryRecord&)>;

struct RunOptions {
    bool store_snapshots = false;
    long snapshot_stride = 1; // in record intervals
    int rays = 720;
    std::uint64_t seed = kDefaultGeometrySeed;
    RecordHook hook;
};

// Steps from t = 0 to t_end, probing geometry and enforcing the boundary
// guard at every record time. Throws DomainTooSmall/NumericalBlowup annotated
// with the failure time.
Trajectory run(const SolverConfig& config, const DatumSpec& datum, const ReactionTerm& f,
               const std::vector<GeometryProbe>& probes, const RunOptions& options = {});

} // namespace rdsym
