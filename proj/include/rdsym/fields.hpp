// Uniform square grids, grid-sampled scalar fields, and compactly supported data.
#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "rdsym/errors.hpp"

namespace rdsym {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;

    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
};

// Square domain [-L, L]^2 sampled on n x n nodes, n odd so x = 0 is a node.
struct GridSpec {
    double half_width = 0.0;
    int nodes_per_side = 0;

    GridSpec() = default;
    GridSpec(double L, int n) : half_width(L), nodes_per_side(n) {
        if (!(L > 0.0)) throw ContractViolation("GridSpec: half_width must be > 0");
        if (n < 3 || n % 2 == 0) throw ContractViolation("GridSpec: nodes_per_side must be odd and >= 3");
    }

    double spacing() const { return 2.0 * half_width / (nodes_per_side - 1); }
    int origin_index() const { return (nodes_per_side - 1) / 2; }
    double coord(int i) const { return -half_width + i * spacing(); }
    Vec2 node(int ix, int iy) const { return {coord(ix), coord(iy)}; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(nodes_per_side) * nodes_per_side;
    }
    bool contains(Vec2 p) const {
        return std::abs(p.x) <= half_width && std::abs(p.y) <= half_width;
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class BumpProfile { SmoothBump, MollifiedIndicator };

// One compactly supported bump; zero outside the ball of the given radius.
struct Bump {
    Vec2 center;
    double radius = 1.0;
    double height = 1.0;
    BumpProfile profile = BumpProfile::SmoothBump;

    friend bool operator==(const Bump&, const Bump&) = default;
};

double bump_value(const Bump& b, Vec2 p);

struct DatumSpec {
    std::vector<Bump> bumps;

    // Radius of the smallest origin-centered ball containing every bump support.
    double support_radius() const;

    friend bool operator==(const DatumSpec&, const DatumSpec&) = default;
};

// Grid-sampled u(t, .) on [-L, L]^2. Immutable by convention once built.
struct ScalarField {
    GridSpec grid;
    std::vector<double> values; // row-major, index iy * n + ix
    double time = 0.0;

    ScalarField() = default;
    ScalarField(const GridSpec& g, double t = 0.0)
        : grid(g), values(g.node_count(), 0.0), time(t) {}

    double& at(int ix, int iy) {
        return values[static_cast<std::size_t>(iy) * grid.nodes_per_side + ix];
    }
    double at(int ix, int iy) const {
        return values[static_cast<std::size_t>(iy) * grid.nodes_per_side + ix];
    }
    double max_value() const;
    double min_value() const;
};

// Sum of bump contributions at the nodes, at time 0.
// Throws DomainTooSmall if any bump support touches the domain boundary.
ScalarField make_field(const GridSpec& grid, const DatumSpec& datum);

// Bilinear interpolation, exact at nodes. Throws OutOfDomain for p outside the square.
double sample(const ScalarField& field, Vec2 p);

// Samples u(t, rho * e) at rho = 0, step, 2 step, ... until the domain boundary.
std::vector<std::pair<double, double>> ray_profile(const ScalarField& field, Vec2 direction,
                                                   double step);

} // namespace rdsym
