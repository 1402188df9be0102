#include "rdsym/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rdsym {

namespace {

bool is_edge(int ix, int iy, int n) {
    return ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1;
}

// 1D squared-distance lower envelope (Felzenszwalb-Huttenlocher).
void envelope_1d(const double* f, double* d, int n, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        while (s <= z[k]) {
            --k;
            s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

double contains_eps(const Circle& c) { return 1e-12 * (1.0 + c.radius * c.radius); }

bool circle_contains(const Circle& c, Vec2 p) {
    return (p - c.center).norm_sq() <= c.radius * c.radius + contains_eps(c);
}

Circle circle_two(Vec2 a, Vec2 b) {
    const Vec2 mid = 0.5 * (a + b);
    return {mid, 0.5 * (a - b).norm()};
}

Circle circle_three(Vec2 a, Vec2 b, Vec2 c) {
    const Vec2 B = b - a, C = c - a;
    const double d = 2.0 * (B.x * C.y - B.y * C.x);
    if (std::abs(d) < 1e-14 * (1.0 + B.norm_sq() + C.norm_sq())) {
        // Degenerate (collinear) support: widest two-point circle covers all three.
        Circle best = circle_two(a, b);
        for (const Circle& cand : {circle_two(a, c), circle_two(b, c)})
            if (cand.radius > best.radius) best = cand;
        return best;
    }
    const double b2 = B.norm_sq(), c2 = C.norm_sq();
    const Vec2 u{(C.y * b2 - B.y * c2) / d, (B.x * c2 - C.x * b2) / d};
    return {a + u, u.norm()};
}

// Deterministic Fisher-Yates; std::shuffle's draw is implementation-defined.
void shuffle_points(std::vector<Vec2>& pts, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = pts.size(); i > 1; --i)
        std::swap(pts[i - 1], pts[rng() % i]);
}

double ray_limit(const GridSpec& g, Vec2 e) {
    double rho_max = std::numeric_limits<double>::infinity();
    if (e.x != 0.0) rho_max = std::min(rho_max, g.half_width / std::abs(e.x));
    if (e.y != 0.0) rho_max = std::min(rho_max, g.half_width / std::abs(e.y));
    return rho_max;
}

double sample_on_ray(const ScalarField& field, Vec2 e, double rho) {
    const double L = field.grid.half_width;
    Vec2 p = rho * e;
    p.x = std::clamp(p.x, -L, L);
    p.y = std::clamp(p.y, -L, L);
    return sample(field, p);
}

struct RayScan {
    double crossing = 0.0; // first rho with u <= theta (rho_max if none)
    bool crossed = false;
    bool reentered = false; // u > theta + hysteresis seen after the crossing
};

RayScan scan_ray(const ScalarField& field, double theta, Vec2 e) {
    const double h = field.grid.spacing();
    const double step = 0.5 * h;
    const double rho_max = ray_limit(field.grid, e);
    constexpr double hysteresis = 1e-9;

    RayScan scan;
    scan.crossing = rho_max;
    double prev_rho = 0.0;
    for (double rho = step; rho <= rho_max + 0.5 * step; rho += step) {
        const double r = std::min(rho, rho_max);
        const double v = sample_on_ray(field, e, r);
        if (!scan.crossed) {
            if (v <= theta) {
                scan.crossed = true;
                double lo = prev_rho, hi = r;
                while (hi - lo > h / 100.0) {
                    const double mid = 0.5 * (lo + hi);
                    (sample_on_ray(field, e, mid) > theta ? lo : hi) = mid;
                }
                scan.crossing = 0.5 * (lo + hi);
            }
        } else if (v > theta + hysteresis) {
            scan.reentered = true;
            break;
        }
        prev_rho = r;
    }
    return scan;
}

std::vector<Vec2> ray_directions(int rays) {
    if (rays < 4) throw ContractViolation("geometry: ray count must be >= 4");
    std::vector<Vec2> dirs(rays);
    for (int k = 0; k < rays; ++k) {
        const double alpha = 2.0 * M_PI * k / rays;
        dirs[k] = {std::cos(alpha), std::sin(alpha)};
    }
    return dirs;
}

bool invaded_at_origin(const ScalarField& field, double theta) {
    const int o = field.grid.origin_index();
    return field.at(o, o) > theta;
}

} // namespace

std::size_t LevelSetMask::count() const {
    return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

LevelSetMask upper_level_set(const ScalarField& field, double theta, double z_cap) {
    if (!(theta > 0.0) || !(theta < z_cap))
        throw ContractViolation("upper_level_set: theta must lie in (0, Z)");
    LevelSetMask mask;
    mask.theta = theta;
    mask.grid = field.grid;
    mask.time = field.time;
    mask.inside.resize(field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i)
        mask.inside[i] = field.values[i] > theta ? 1 : 0;
    return mask;
}

std::vector<double> squared_distance_transform(const LevelSetMask& mask) {
    const int n = mask.grid.nodes_per_side;
    // Column pass: distance (in index units) to the nearest complement node in
    // the same column. Finite everywhere because edge nodes are complement.
    std::vector<double> g(mask.inside.size());
    for (int ix = 0; ix < n; ++ix) {
        double run = 0.0;
        for (int iy = 0; iy < n; ++iy) {
            const bool complement = !mask.at(ix, iy) || is_edge(ix, iy, n);
            run = complement ? 0.0 : run + 1.0;
            g[static_cast<std::size_t>(iy) * n + ix] = run;
        }
        run = 0.0;
        for (int iy = n - 1; iy >= 0; --iy) {
            const bool complement = !mask.at(ix, iy) || is_edge(ix, iy, n);
            run = complement ? 0.0 : run + 1.0;
            auto& cell = g[static_cast<std::size_t>(iy) * n + ix];
            cell = std::min(cell, run);
        }
    }
    // Row pass: lower envelope of parabolas seeded with the squared column distances.
    std::vector<double> d(mask.inside.size());
    std::vector<double> f(n), row(n), z(n + 1);
    std::vector<int> v(n);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double gc = g[static_cast<std::size_t>(iy) * n + ix];
            f[ix] = gc * gc;
        }
        envelope_1d(f.data(), row.data(), n, v.data(), z.data());
        std::copy(row.begin(), row.end(), d.begin() + static_cast<std::size_t>(iy) * n);
    }
    return d;
}

InscribedBall inscribed_ball(const LevelSetMask& mask) {
    if (mask.count() == 0) throw EmptyLevelSet("inscribed_ball: mask is empty");
    const int n = mask.grid.nodes_per_side;
    const std::vector<double> d2 = squared_distance_transform(mask);

    double best = -1.0;
    int bx = -1, by = -1;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            if (!mask.at(ix, iy) || is_edge(ix, iy, n)) continue;
            const double v = d2[static_cast<std::size_t>(iy) * n + ix];
            if (v > best) {
                best = v;
                bx = ix;
                by = iy;
            }
        }
    }
    if (bx < 0) throw EmptyLevelSet("inscribed_ball: no interior node inside the mask");
    InscribedBall ball;
    ball.radius = mask.grid.spacing() * std::sqrt(best);
    ball.center = mask.grid.node(bx, by);
    ball.ix = bx;
    ball.iy = by;
    return ball;
}

Circle min_enclosing_circle(std::span<const Vec2> points, std::uint64_t seed) {
    if (points.empty()) throw ContractViolation("min_enclosing_circle: empty point set");
    std::vector<Vec2> pts(points.begin(), points.end());
    shuffle_points(pts, seed);

    Circle c{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (circle_contains(c, pts[i])) continue;
        c = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (circle_contains(c, pts[j])) continue;
            c = circle_two(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (!circle_contains(c, pts[k])) c = circle_three(pts[i], pts[j], pts[k]);
            }
        }
    }
    return c;
}

Circle enclosing_ball(const LevelSetMask& mask, std::uint64_t seed) {
    const int n = mask.grid.nodes_per_side;
    std::vector<Vec2> pts;
    pts.reserve(mask.count());
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if (mask.at(ix, iy)) pts.push_back(mask.grid.node(ix, iy));
    if (pts.empty()) throw EmptyLevelSet("enclosing_ball: mask is empty");
    Circle c = min_enclosing_circle(pts, seed);
    c.radius += mask.grid.spacing() / std::sqrt(2.0); // cover cells, not just nodes
    return c;
}

std::optional<double> origin_inscribed_radius(const ScalarField& field, double theta, int rays) {
    if (!invaded_at_origin(field, theta)) return std::nullopt;
    double r = std::numeric_limits<double>::infinity();
    for (const Vec2& e : ray_directions(rays)) r = std::min(r, scan_ray(field, theta, e).crossing);
    return r;
}

std::optional<bool> star_shaped_wrt_origin(const ScalarField& field, double theta, int rays) {
    if (!invaded_at_origin(field, theta)) return std::nullopt;
    for (const Vec2& e : ray_directions(rays))
        if (scan_ray(field, theta, e).reentered) return false;
    return true;
}

std::optional<PolarProfile> polar_profile(const ScalarField& field, double theta, int rays) {
    if (!invaded_at_origin(field, theta)) return std::nullopt;
    PolarProfile profile;
    profile.phi.reserve(rays);
    for (const Vec2& e : ray_directions(rays)) {
        const RayScan scan = scan_ray(field, theta, e);
        if (scan.reentered) return std::nullopt; // profile undefined
        profile.phi.push_back(scan.crossing);
    }
    const double dalpha = 2.0 * M_PI / rays;
    for (int k = 0; k < rays; ++k) {
        const double dphi = std::abs(profile.phi[(k + 1) % rays] - profile.phi[k]);
        profile.max_slope = std::max(profile.max_slope, dphi / dalpha);
    }
    return profile;
}

MonotoneVerdict radial_monotone_outside(const ScalarField& field, double delta, int rays) {
    if (!(delta < field.grid.half_width))
        throw ContractViolation("radial_monotone_outside: delta must be < half_width");
    const double h = field.grid.spacing();
    const double step = 0.5 * h;
    constexpr double tol = 1e-10;

    const auto dirs = ray_directions(rays);
    for (int k = 0; k < rays; ++k) {
        const Vec2& e = dirs[k];
        const double rho_max = ray_limit(field.grid, e);
        double rho = delta + h;
        if (rho >= rho_max) continue;
        double prev = sample_on_ray(field, e, rho);
        for (rho += step; rho <= rho_max + 0.5 * step; rho += step) {
            const double r = std::min(rho, rho_max);
            const double v = sample_on_ray(field, e, r);
            if (v - prev > tol)
                return {false, 2.0 * M_PI * k / rays, r, v - prev};
            prev = v;
        }
    }
    return {};
}

double radial_deviation(const ScalarField& field, Vec2 center) {
    if (!field.grid.contains(center))
        throw ContractViolation("radial_deviation: center outside the domain");
    const int n = field.grid.nodes_per_side;
    const double h = field.grid.spacing();
    const int bins = static_cast<int>(std::ceil(2.0 * std::sqrt(2.0) * field.grid.half_width / h)) + 2;
    std::vector<double> sum(bins, 0.0);
    std::vector<std::size_t> cnt(bins, 0);

    auto bin_of = [&](int ix, int iy) {
        const double r = (field.grid.node(ix, iy) - center).norm();
        return std::min(bins - 1, static_cast<int>(r / h));
    };
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const int b = bin_of(ix, iy);
            sum[b] += field.at(ix, iy);
            cnt[b] += 1;
        }
    }
    double dev = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const int b = bin_of(ix, iy);
            dev = std::max(dev, std::abs(field.at(ix, iy) - sum[b] / cnt[b]));
        }
    }
    return dev;
}

std::optional<double> max_radius_about_origin(const LevelSetMask& mask) {
    const int n = mask.grid.nodes_per_side;
    double best = -1.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if (mask.at(ix, iy)) best = std::max(best, mask.grid.node(ix, iy).norm());
    if (best < 0.0) return std::nullopt;
    return best + mask.grid.spacing() / std::sqrt(2.0);
}

GeometrySummary summarize(const ScalarField& field, double theta, double delta, int rays,
                          std::uint64_t seed) {
    GeometrySummary s;
    s.time = field.time;
    s.theta = theta;

    const LevelSetMask mask = upper_level_set(field, theta);
    if (mask.count() > 0) {
        try {
            const InscribedBall ib = inscribed_ball(mask);
            s.R_i = ib.radius;
            s.center_i = ib.center;
        } catch (const EmptyLevelSet&) {
            // Only edge nodes inside; no interior ball to report.
        }
        const Circle eb = enclosing_ball(mask, seed);
        s.R_e = eb.radius;
        s.center_e = eb.center;
        s.outer_origin_radius = max_radius_about_origin(mask);
        if (s.R_i && s.R_e) s.gap = *s.R_e - *s.R_i;
        if (s.center_i) s.radial_dev = radial_deviation(field, *s.center_i);
    }

    if (invaded_at_origin(field, theta)) {
        double r_min = std::numeric_limits<double>::infinity();
        bool reentered = false;
        std::vector<double> phi;
        phi.reserve(rays);
        for (const Vec2& e : ray_directions(rays)) {
            const RayScan scan = scan_ray(field, theta, e);
            r_min = std::min(r_min, scan.crossing);
            reentered = reentered || scan.reentered;
            phi.push_back(scan.crossing);
        }
        s.r_origin = r_min;
        s.star_shaped = !reentered;
        if (!reentered) {
            double slope = 0.0;
            const double dalpha = 2.0 * M_PI / rays;
            for (int k = 0; k < rays; ++k)
                slope = std::max(slope,
                                 std::abs(phi[(k + 1) % rays] - phi[k]) / dalpha);
            s.max_polar_slope = slope;
        }
    }
    s.radial_monotone = radial_monotone_outside(field, delta, rays).pass;
    return s;
}

} // namespace rdsym
