#include "rdsym/fields.hpp"

#include <algorithm>
#include <limits>

namespace rdsym {

namespace {

// C-infinity bump: exp(1 - 1/(1 - s)) for s = |x-c|^2/r^2 < 1, zero outside.
double smooth_bump(double s) {
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s));
}

// Plateau at 1 on the inner 80% of the radius, cosine taper to 0 at the rim.
double mollified_indicator(double s) {
    constexpr double plateau = 0.8; // fraction of the radius held at full height
    if (s >= 1.0) return 0.0;
    double rho = std::sqrt(s);
    if (rho <= plateau) return 1.0;
    double q = (rho - plateau) / (1.0 - plateau);
    return 0.5 * (1.0 + std::cos(q * M_PI));
}

} // namespace

double bump_value(const Bump& b, Vec2 p) {
    const Vec2 d = p - b.center;
    const double s = d.norm_sq() / (b.radius * b.radius);
    switch (b.profile) {
    case BumpProfile::SmoothBump: return b.height * smooth_bump(s);
    case BumpProfile::MollifiedIndicator: return b.height * mollified_indicator(s);
    }
    return 0.0;
}

double DatumSpec::support_radius() const {
    double r = 0.0;
    for (const Bump& b : bumps) r = std::max(r, b.center.norm() + b.radius);
    return r;
}

double ScalarField::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

double ScalarField::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

ScalarField make_field(const GridSpec& grid, const DatumSpec& datum) {
    if (datum.bumps.empty()) throw ContractViolation("make_field: datum has no bumps");
    for (const Bump& b : datum.bumps) {
        if (!(b.radius > 0.0)) throw ContractViolation("make_field: bump radius must be > 0");
        if (b.height < 0.0) throw ContractViolation("make_field: bump height must be >= 0");
        const double reach = std::max(std::abs(b.center.x), std::abs(b.center.y)) + b.radius;
        if (reach >= grid.half_width)
            throw DomainTooSmall("make_field: bump support touches the domain boundary");
    }
    ScalarField f(grid, 0.0);
    const int n = grid.nodes_per_side;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            double v = 0.0;
            for (const Bump& b : datum.bumps) v += bump_value(b, grid.node(ix, iy));
            f.at(ix, iy) = v;
        }
    }
    return f;
}

double sample(const ScalarField& field, Vec2 p) {
    const GridSpec& g = field.grid;
    if (!g.contains(p)) throw OutOfDomain("sample: point outside the domain");
    const double h = g.spacing();
    const int n = g.nodes_per_side;

    auto cell = [&](double c) {
        double s = (c + g.half_width) / h;
        int i = static_cast<int>(std::floor(s));
        double frac = s - i;
        // Snap to the node so sampling at nodes is exact despite rounding in s.
        if (frac < 1e-9) frac = 0.0;
        if (frac > 1.0 - 1e-9) { frac = 0.0; ++i; }
        i = std::clamp(i, 0, n - 1);
        if (i == n - 1 && frac > 0.0) { i = n - 2; frac = 1.0; }
        return std::pair<int, double>{i, frac};
    };
    auto [ix, fx] = cell(p.x);
    auto [iy, fy] = cell(p.y);
    const int ix1 = std::min(ix + 1, n - 1);
    const int iy1 = std::min(iy + 1, n - 1);
    const double v00 = field.at(ix, iy), v10 = field.at(ix1, iy);
    const double v01 = field.at(ix, iy1), v11 = field.at(ix1, iy1);
    return (1.0 - fx) * (1.0 - fy) * v00 + fx * (1.0 - fy) * v10 +
           (1.0 - fx) * fy * v01 + fx * fy * v11;
}

std::vector<std::pair<double, double>> ray_profile(const ScalarField& field, Vec2 direction,
                                                   double step) {
    if (!(step > 0.0)) throw ContractViolation("ray_profile: step must be > 0");
    if (std::abs(direction.norm() - 1.0) > 1e-12)
        throw ContractViolation("ray_profile: direction must have unit norm");

    const double L = field.grid.half_width;
    double rho_max = std::numeric_limits<double>::infinity();
    if (direction.x != 0.0) rho_max = std::min(rho_max, L / std::abs(direction.x));
    if (direction.y != 0.0) rho_max = std::min(rho_max, L / std::abs(direction.y));

    std::vector<std::pair<double, double>> out;
    for (double rho = 0.0; rho <= rho_max * (1.0 + 1e-12); rho += step) {
        Vec2 p = std::min(rho, rho_max) * direction;
        p.x = std::clamp(p.x, -L, L);
        p.y = std::clamp(p.y, -L, L);
        out.emplace_back(std::min(rho, rho_max), sample(field, p));
    }
    return out;
}

} // namespace rdsym
