// Level-set measurements: masks, inscribed/enclosing balls, origin radius,
// star-shapedness, polar profiles, radial monotonicity and deviation.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rdsym/fields.hpp"

namespace rdsym {

inline constexpr std::uint64_t kDefaultGeometrySeed = 2026;

// Nodewise strict threshold mask for the upper level set {u > theta}.
struct LevelSetMask {
    double theta = 0.0;
    GridSpec grid;
    std::vector<std::uint8_t> inside; // row-major, 1 iff u > theta at the node
    double time = 0.0;

    bool at(int ix, int iy) const {
        return inside[static_cast<std::size_t>(iy) * grid.nodes_per_side + ix] != 0;
    }
    std::size_t count() const;
};

// Throws ContractViolation unless 0 < theta < z_cap.
LevelSetMask upper_level_set(const ScalarField& field, double theta,
                             double z_cap = std::numeric_limits<double>::infinity());

struct InscribedBall {
    double radius = 0.0;
    Vec2 center;
    int ix = 0, iy = 0; // argmax node, ties broken by smallest (row, column)
};

// Largest ball centred at a node and contained in the mask, via an exact
// Euclidean distance transform of the complement. Grid-edge nodes count as
// complement, so an all-true mask yields radius L at the origin.
// Throws EmptyLevelSet when no interior node is inside.
InscribedBall inscribed_ball(const LevelSetMask& mask);

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

// Exact squared distances (in node-index units) from each node to the nearest
// complement node, edge nodes counting as complement. Exposed for oracle tests.
std::vector<double> squared_distance_transform(const LevelSetMask& mask);

// Minimal enclosing circle of a point set (randomized incremental, shuffled
// with the given seed). Exact to ~1e-9 on desk-scale inputs.
Circle min_enclosing_circle(std::span<const Vec2> points,
                            std::uint64_t seed = kDefaultGeometrySeed);

// Smallest ball containing the mask: minimal enclosing circle of the inside
// node coordinates, inflated by h/sqrt(2) so cells are covered, not just nodes.
Circle enclosing_ball(const LevelSetMask& mask, std::uint64_t seed = kDefaultGeometrySeed);

// Radius of the largest origin-centred ball inside {u > theta}: minimum over
// `rays` equispaced directions of the first down-crossing (bisection to h/100).
// Returns nullopt when u(t, 0) <= theta (level not invaded yet).
std::optional<double> origin_inscribed_radius(const ScalarField& field, double theta, int rays);

// True iff along every ray the sampled set {rho : u > theta} is a single
// interval containing rho = 0 (1e-9 hysteresis). Nullopt when not invaded.
std::optional<bool> star_shaped_wrt_origin(const ScalarField& field, double theta, int rays);

struct PolarProfile {
    std::vector<double> phi; // crossing radius at alpha_k = 2 pi k / M
    double max_slope = 0.0;  // max |phi(alpha_{k+1}) - phi(alpha_k)| / (2 pi / M), cyclic
};

// Per-ray boundary radius of a star-shaped level set. Nullopt when the set is
// not star-shaped about the origin (profile undefined) or not invaded.
std::optional<PolarProfile> polar_profile(const ScalarField& field, double theta, int rays);

struct MonotoneVerdict {
    bool pass = true;
    double ray_angle = 0.0; // witness on failure
    double rho = 0.0;
    double increase = 0.0;
};

// Checks that along all rays the sampled profile is strictly decreasing for
// rho >= delta + h (successive differences <= +1e-10).
MonotoneVerdict radial_monotone_outside(const ScalarField& field, double delta, int rays);

// Max over nodes of |u(x) - mean of u over the radius bin of |x - center||,
// bin width h. The canonical witness for radial convergence about `center`.
double radial_deviation(const ScalarField& field, Vec2 center);

// Max |x| over inside nodes plus h/sqrt(2): radius of the smallest
// origin-centred ball containing the mask.
std::optional<double> max_radius_about_origin(const LevelSetMask& mask);

// One per-time record. Probes that do not apply (pre-invasion, empty mask)
// leave their fields absent. `radial_monotone` and `outer_origin_radius` are
// runtime-only extras; the CSV schema carries the first twelve quantities.
struct GeometrySummary {
    double time = 0.0;
    double theta = 0.0;
    std::optional<double> R_i;
    std::optional<Vec2> center_i;
    std::optional<double> R_e;
    std::optional<Vec2> center_e;
    std::optional<double> r_origin;
    std::optional<bool> star_shaped;
    std::optional<double> max_polar_slope;
    std::optional<double> radial_dev;
    std::optional<double> gap; // R_e - R_i
    std::optional<bool> radial_monotone;
    std::optional<double> outer_origin_radius;
};

GeometrySummary summarize(const ScalarField& field, double theta, double delta, int rays,
                          std::uint64_t seed = kDefaultGeometrySeed);

} // namespace rdsym
