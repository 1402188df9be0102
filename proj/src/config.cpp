#include "rdsym/config.hpp"

#include <cmath>

#include <json.hpp>

namespace rdsym {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct Parser {
    std::vector<std::string>& errors;

    void err(const std::string& path, const std::string& msg) {
        errors.push_back(path + ": " + msg);
    }

    const json* object(const json& parent, const char* key, const std::string& path,
                       bool required = true) {
        if (!parent.contains(key)) {
            if (required) err(path, "missing section");
            return nullptr;
        }
        if (!parent[key].is_object()) {
            err(path, "must be an object");
            return nullptr;
        }
        return &parent[key];
    }

    std::optional<double> number(const json& parent, const char* key, const std::string& path,
                                 std::optional<double> fallback = std::nullopt) {
        if (!parent.contains(key)) {
            if (fallback) return fallback;
            err(path, "missing value");
            return std::nullopt;
        }
        if (!parent[key].is_number()) {
            err(path, "must be a number");
            return std::nullopt;
        }
        return parent[key].get<double>();
    }

    std::optional<long> integer(const json& parent, const char* key, const std::string& path,
                                std::optional<long> fallback = std::nullopt) {
        if (!parent.contains(key)) {
            if (fallback) return fallback;
            err(path, "missing value");
            return std::nullopt;
        }
        if (!parent[key].is_number_integer()) {
            err(path, "must be an integer");
            return std::nullopt;
        }
        return parent[key].get<long>();
    }

    std::optional<bool> boolean(const json& parent, const char* key, const std::string& path,
                                std::optional<bool> fallback = std::nullopt) {
        if (!parent.contains(key)) {
            if (fallback) return fallback;
            err(path, "missing value");
            return std::nullopt;
        }
        if (!parent[key].is_boolean()) {
            err(path, "must be a boolean");
            return std::nullopt;
        }
        return parent[key].get<bool>();
    }

    std::optional<std::string> text(const json& parent, const char* key, const std::string& path,
                                    std::optional<std::string> fallback = std::nullopt) {
        if (!parent.contains(key)) {
            if (fallback) return fallback;
            err(path, "missing value");
            return std::nullopt;
        }
        if (!parent[key].is_string()) {
            err(path, "must be a string");
            return std::nullopt;
        }
        return parent[key].get<std::string>();
    }

    std::optional<Vec2> vec2(const json& parent, const char* key, const std::string& path) {
        if (!parent.contains(key)) {
            err(path, "missing value");
            return std::nullopt;
        }
        const json& v = parent[key];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            err(path, "must be an array of two numbers");
            return std::nullopt;
        }
        return Vec2{v[0].get<double>(), v[1].get<double>()};
    }
};

std::optional<GridSpec> parse_grid(Parser& p, const json& root) {
    const json* grid = p.object(root, "grid", "grid");
    if (!grid) return std::nullopt;
    const auto L = p.number(*grid, "half_width", "grid.half_width");
    const auto n = p.integer(*grid, "nodes_per_side", "grid.nodes_per_side");
    if (!L || !n) return std::nullopt;
    if (!(*L > 0.0)) {
        p.err("grid.half_width", "must be > 0");
        return std::nullopt;
    }
    if (*n < 3 || *n % 2 == 0) {
        p.err("grid.nodes_per_side", "nodes_per_side must be odd and >= 3");
        return std::nullopt;
    }
    return GridSpec(*L, static_cast<int>(*n));
}

std::optional<ReactionTerm> parse_reaction_node(Parser& p, const json& node,
                                                const std::string& path) {
    const auto variant = p.text(node, "variant", path + ".variant");
    if (!variant) return std::nullopt;
    try {
        if (*variant == "linear") {
            if (node.contains("zeta")) {
                const auto zeta = p.number(node, "zeta", path + ".zeta");
                if (!zeta) return std::nullopt;
                return ReactionTerm::linear(*zeta);
            }
            const auto a = p.number(node, "a", path + ".a");
            const auto b = p.number(node, "b", path + ".b", 0.0);
            const auto omega = p.number(node, "omega", path + ".omega", 1.0);
            if (!a || !b || !omega) return std::nullopt;
            return ReactionTerm::linear(*a, *b, *omega);
        }
        if (*variant == "fisher_kpp") {
            const auto rho = p.number(node, "rho", path + ".rho");
            if (!rho) return std::nullopt;
            return ReactionTerm::fisher_kpp(*rho);
        }
        if (*variant == "time_periodic_kpp") {
            const auto a = p.number(node, "a", path + ".a");
            const auto b = p.number(node, "b", path + ".b");
            const auto omega = p.number(node, "omega", path + ".omega", 1.0);
            if (!a || !b || !omega) return std::nullopt;
            return ReactionTerm::time_periodic_kpp(*a, *b, *omega);
        }
        if (*variant == "combustion") {
            const auto theta0 = p.number(node, "theta0", path + ".theta0");
            if (!theta0) return std::nullopt;
            return ReactionTerm::combustion(*theta0);
        }
        if (*variant == "bistable") {
            const auto a = p.number(node, "a", path + ".a");
            if (!a) return std::nullopt;
            return ReactionTerm::bistable(*a);
        }
    } catch (const ContractViolation& e) {
        p.err(path, e.what());
        return std::nullopt;
    }
    p.err(path + ".variant", "unknown reaction variant '" + *variant + "'");
    return std::nullopt;
}

std::optional<DatumSpec> parse_datum(Parser& p, const json& parent, const char* key,
                                     const std::string& path, const GridSpec* grid, double z_cap) {
    if (!parent.contains(key)) {
        p.err(path, "missing datum");
        return std::nullopt;
    }
    const json& node = parent[key];
    if (!node.is_object() || !node.contains("bumps") || !node["bumps"].is_array()) {
        p.err(path, "must be an object with a 'bumps' array");
        return std::nullopt;
    }
    DatumSpec datum;
    bool ok = true;
    int i = 0;
    for (const json& b : node["bumps"]) {
        const std::string bp = path + ".bumps[" + std::to_string(i++) + "]";
        Bump bump;
        const auto center = p.vec2(b, "center", bp + ".center");
        const auto radius = p.number(b, "radius", bp + ".radius");
        const auto height = p.number(b, "height", bp + ".height");
        const auto profile = p.text(b, "profile", bp + ".profile", std::string("smooth-bump"));
        if (!center || !radius || !height || !profile) {
            ok = false;
            continue;
        }
        bump.center = *center;
        bump.radius = *radius;
        bump.height = *height;
        if (*profile == "smooth-bump") {
            bump.profile = BumpProfile::SmoothBump;
        } else if (*profile == "mollified-indicator") {
            bump.profile = BumpProfile::MollifiedIndicator;
        } else {
            p.err(bp + ".profile", "must be 'smooth-bump' or 'mollified-indicator'");
            ok = false;
            continue;
        }
        if (!(bump.radius > 0.0)) {
            p.err(bp + ".radius", "must be > 0");
            ok = false;
        }
        if (!(bump.height > 0.0)) {
            p.err(bp + ".height", "must be > 0");
            ok = false;
        }
        if (std::isfinite(z_cap) && bump.height > z_cap) {
            p.err(bp + ".height", "must not exceed the saturation level Z");
            ok = false;
        }
        if (grid) {
            const double reach =
                std::max(std::abs(bump.center.x), std::abs(bump.center.y)) + bump.radius;
            if (reach >= grid->half_width) {
                p.err(bp, "bump support touches or exceeds the domain boundary");
                ok = false;
            }
        }
        datum.bumps.push_back(bump);
    }
    if (datum.bumps.empty()) {
        p.err(path + ".bumps", "at least one bump required");
        ok = false;
    }
    return ok ? std::optional<DatumSpec>(datum) : std::nullopt;
}

bool check_theta(Parser& p, const std::string& path, double theta, double z_cap) {
    if (!(theta > 0.0) || !(theta < z_cap)) {
        p.err(path, "threshold outside (0, Z)");
        return false;
    }
    return true;
}

bool check_lattice(Parser& p, const std::string& path, Vec2 v, const GridSpec* grid) {
    if (!grid) return false;
    const double h = grid->spacing();
    if (std::abs(v.x - std::lround(v.x / h) * h) > 1e-9 * h ||
        std::abs(v.y - std::lround(v.y / h) * h) > 1e-9 * h) {
        p.err(path, "must be a lattice vector (integer multiple of the grid spacing)");
        return false;
    }
    return true;
}

std::optional<Scenario> parse_scenario(Parser& p, const json& root, const GridSpec* grid,
                                       const ReactionTerm* reaction) {
    const json* node = p.object(root, "scenario", "scenario");
    if (!node) return std::nullopt;
    const auto variant = p.text(*node, "variant", "scenario.variant");
    if (!variant) return std::nullopt;
    const double z_cap = reaction ? reaction->saturation() : std::numeric_limits<double>::infinity();

    if (*variant == "symmetrization") {
        SymmetrizationScenario s;
        const auto datum = parse_datum(p, *node, "datum", "scenario.datum", grid, z_cap);
        if (!node->contains("thetas") || !(*node)["thetas"].is_array() ||
            (*node)["thetas"].empty()) {
            p.err("scenario.thetas", "must be a nonempty array of thresholds");
            return std::nullopt;
        }
        bool ok = datum.has_value();
        int i = 0;
        for (const json& t : (*node)["thetas"]) {
            const std::string tp = "scenario.thetas[" + std::to_string(i++) + "]";
            if (!t.is_number()) {
                p.err(tp, "must be a number");
                ok = false;
                continue;
            }
            const double theta = t.get<double>();
            ok = check_theta(p, tp, theta, z_cap) && ok;
            s.thetas.push_back(theta);
        }
        if (!ok) return std::nullopt;
        s.datum = *datum;
        return Scenario(s);
    }
    if (*variant == "anti_symmetrization") {
        AntiSymmetrizationScenario s;
        const auto u1 = parse_datum(p, *node, "u1", "scenario.u1", grid, z_cap);
        const auto u2 = parse_datum(p, *node, "u2", "scenario.u2", grid, z_cap);
        const auto xi = p.vec2(*node, "xi", "scenario.xi");
        const auto theta = p.number(*node, "theta", "scenario.theta");
        const auto theta_prime = p.number(*node, "theta_prime", "scenario.theta_prime");
        if (!u1 || !u2 || !xi || !theta || !theta_prime) return std::nullopt;
        bool ok = check_theta(p, "scenario.theta", *theta, z_cap);
        ok = check_theta(p, "scenario.theta_prime", *theta_prime, z_cap) && ok;
        if (!(*theta_prime < *theta)) {
            p.err("scenario.theta_prime", "must be < theta");
            ok = false;
        }
        ok = check_lattice(p, "scenario.xi", *xi, grid) && ok;
        if (node->contains("min_gap_required")) {
            const auto floor = p.number(*node, "min_gap_required", "scenario.min_gap_required");
            if (!floor) return std::nullopt;
            s.min_gap_required = *floor;
        }
        if (!ok) return std::nullopt;
        s.u1 = *u1;
        s.u2 = *u2;
        s.xi = *xi;
        s.theta = *theta;
        s.theta_prime = *theta_prime;
        return Scenario(s);
    }
    if (*variant == "steepness") {
        SteepnessScenario s;
        const auto datum = parse_datum(p, *node, "datum", "scenario.datum", grid, z_cap);
        const auto theta = p.number(*node, "theta", "scenario.theta");
        const auto theta_prime = p.number(*node, "theta_prime", "scenario.theta_prime");
        const auto cap = p.number(*node, "width_cap", "scenario.width_cap", 5.0);
        const auto ball = p.number(*node, "invasion_ball_radius", "scenario.invasion_ball_radius", 0.0);
        const auto shift = p.integer(*node, "time_shift_records", "scenario.time_shift_records", 1L);
        if (!datum || !theta || !theta_prime || !cap || !ball || !shift) return std::nullopt;
        bool ok = check_theta(p, "scenario.theta", *theta, z_cap);
        ok = check_theta(p, "scenario.theta_prime", *theta_prime, z_cap) && ok;
        if (!(*theta_prime < *theta)) {
            p.err("scenario.theta_prime", "must be < theta");
            ok = false;
        }
        if (node->contains("g")) {
            if (!(*node)["g"].is_object()) {
                p.err("scenario.g", "must be a reaction object");
                ok = false;
            } else {
                const auto g = parse_reaction_node(p, (*node)["g"], "scenario.g");
                if (!g) return std::nullopt;
                if (g->time_dependent()) {
                    p.err("scenario.g", "must be time-independent");
                    ok = false;
                }
                s.lower_bound_g = g;
            }
        }
        if (*shift < 1) {
            p.err("scenario.time_shift_records", "must be >= 1");
            ok = false;
        }
        if (!ok) return std::nullopt;
        s.datum = *datum;
        s.theta = *theta;
        s.theta_prime = *theta_prime;
        s.width_cap = *cap;
        s.invasion_ball_radius = *ball;
        s.time_shift_records = *shift;
        return Scenario(s);
    }
    if (*variant == "spreading_speed") {
        SpreadingSpeedScenario s;
        const auto datum = parse_datum(p, *node, "datum", "scenario.datum", grid, z_cap);
        const auto theta = p.number(*node, "theta", "scenario.theta");
        const auto window = p.vec2(*node, "fit_window", "scenario.fit_window");
        const auto range = p.vec2(*node, "slope_range", "scenario.slope_range");
        if (!datum || !theta || !window || !range) return std::nullopt;
        bool ok = check_theta(p, "scenario.theta", *theta, z_cap);
        if (!(window->x < window->y)) {
            p.err("scenario.fit_window", "window start must be < end");
            ok = false;
        }
        if (!(range->x <= range->y)) {
            p.err("scenario.slope_range", "lower bound must be <= upper bound");
            ok = false;
        }
        if (!ok) return std::nullopt;
        s.datum = *datum;
        s.theta = *theta;
        s.window_start = window->x;
        s.window_end = window->y;
        s.slope_min = range->x;
        s.slope_max = range->y;
        return Scenario(s);
    }
    if (*variant == "two_solution") {
        TwoSolutionScenario s;
        const auto d1 = parse_datum(p, *node, "datum1", "scenario.datum1", grid, z_cap);
        const auto d2 = parse_datum(p, *node, "datum2", "scenario.datum2", grid, z_cap);
        const auto theta = p.number(*node, "theta", "scenario.theta");
        const auto theta_prime = p.number(*node, "theta_prime", "scenario.theta_prime");
        const auto zeta = p.vec2(*node, "zeta_shift", "scenario.zeta_shift");
        const auto cap = p.number(*node, "distance_cap", "scenario.distance_cap", 4.0);
        if (!d1 || !d2 || !theta || !theta_prime || !zeta || !cap) return std::nullopt;
        bool ok = check_theta(p, "scenario.theta", *theta, z_cap);
        ok = check_theta(p, "scenario.theta_prime", *theta_prime, z_cap) && ok;
        ok = check_lattice(p, "scenario.zeta_shift", *zeta, grid) && ok;
        if (!ok) return std::nullopt;
        s.datum1 = *d1;
        s.datum2 = *d2;
        s.theta = *theta;
        s.theta_prime = *theta_prime;
        s.zeta_shift = *zeta;
        s.distance_cap = *cap;
        return Scenario(s);
    }
    p.err("scenario.variant", "unknown scenario variant '" + *variant + "'");
    return std::nullopt;
}

ordered_json reaction_to_json(const ReactionTerm& r) {
    ordered_json node;
    node["variant"] = r.name();
    switch (r.kind()) {
    case ReactionKind::Linear:
        node["a"] = r.param_a();
        node["b"] = r.param_b();
        node["omega"] = r.param_omega();
        break;
    case ReactionKind::FisherKPP:
        node["rho"] = r.param_a();
        break;
    case ReactionKind::TimePeriodicKPP:
        node["a"] = r.param_a();
        node["b"] = r.param_b();
        node["omega"] = r.param_omega();
        break;
    case ReactionKind::Combustion:
        node["theta0"] = r.param_a();
        break;
    case ReactionKind::Bistable:
        node["a"] = r.param_a();
        break;
    }
    return node;
}

ordered_json datum_to_json(const DatumSpec& datum) {
    ordered_json node;
    node["bumps"] = ordered_json::array();
    for (const Bump& b : datum.bumps) {
        ordered_json jb;
        jb["center"] = {b.center.x, b.center.y};
        jb["radius"] = b.radius;
        jb["height"] = b.height;
        jb["profile"] =
            b.profile == BumpProfile::SmoothBump ? "smooth-bump" : "mollified-indicator";
        node["bumps"].push_back(jb);
    }
    return node;
}

ordered_json scenario_to_json(const Scenario& scenario) {
    ordered_json node;
    node["variant"] = scenario_name(scenario);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SymmetrizationScenario>) {
                node["datum"] = datum_to_json(s.datum);
                node["thetas"] = s.thetas;
            } else if constexpr (std::is_same_v<T, AntiSymmetrizationScenario>) {
                node["u1"] = datum_to_json(s.u1);
                node["u2"] = datum_to_json(s.u2);
                node["xi"] = {s.xi.x, s.xi.y};
                node["theta"] = s.theta;
                node["theta_prime"] = s.theta_prime;
                if (s.min_gap_required) node["min_gap_required"] = *s.min_gap_required;
            } else if constexpr (std::is_same_v<T, SteepnessScenario>) {
                node["datum"] = datum_to_json(s.datum);
                node["theta"] = s.theta;
                node["theta_prime"] = s.theta_prime;
                if (s.lower_bound_g) node["g"] = reaction_to_json(*s.lower_bound_g);
                node["width_cap"] = s.width_cap;
                node["invasion_ball_radius"] = s.invasion_ball_radius;
                node["time_shift_records"] = s.time_shift_records;
            } else if constexpr (std::is_same_v<T, SpreadingSpeedScenario>) {
                node["datum"] = datum_to_json(s.datum);
                node["theta"] = s.theta;
                node["fit_window"] = {s.window_start, s.window_end};
                node["slope_range"] = {s.slope_min, s.slope_max};
            } else {
                node["datum1"] = datum_to_json(s.datum1);
                node["datum2"] = datum_to_json(s.datum2);
                node["theta"] = s.theta;
                node["theta_prime"] = s.theta_prime;
                node["zeta_shift"] = {s.zeta_shift.x, s.zeta_shift.y};
                node["distance_cap"] = s.distance_cap;
            }
        },
        scenario);
    return node;
}

} // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult result;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        result.errors.push_back(e.what());
        return result;
    }
    if (!root.is_object()) {
        result.errors.push_back("config: top level must be an object");
        return result;
    }
    Parser p{result.errors};

    const auto grid = parse_grid(p, root);

    std::optional<SolverConfig> solver;
    if (const json* node = p.object(root, "solver", "solver")) {
        SolverConfig sc;
        if (grid) sc.grid = *grid;
        const auto sigma = p.number(*node, "cfl_fraction", "solver.cfl_fraction", 0.8);
        const auto t_end = p.number(*node, "t_end", "solver.t_end");
        const auto rec = p.number(*node, "record_interval", "solver.record_interval");
        const auto tol = p.number(*node, "boundary_tolerance", "solver.boundary_tolerance", 1e-6);
        if (sigma && t_end && rec && tol) {
            sc.cfl_fraction = *sigma;
            sc.t_end = *t_end;
            sc.record_interval = *rec;
            sc.boundary_tolerance = *tol;
            if (!(sc.cfl_fraction > 0.0 && sc.cfl_fraction < 1.0))
                p.err("solver.cfl_fraction", "must lie in (0, 1)");
            if (!(sc.t_end > 0.0)) p.err("solver.t_end", "must be > 0");
            if (grid && sc.record_interval < sc.dt() * (1.0 - 1e-12))
                p.err("solver.record_interval", "must be >= dt = cfl_fraction h^2 / 4");
            if (!(sc.boundary_tolerance > 0.0)) p.err("solver.boundary_tolerance", "must be > 0");
            solver = sc;
        }
    }

    std::optional<ReactionTerm> reaction;
    if (const json* node = p.object(root, "reaction", "reaction"))
        reaction = parse_reaction_node(p, *node, "reaction");

    const auto scenario =
        parse_scenario(p, root, grid ? &*grid : nullptr, reaction ? &*reaction : nullptr);

    OutputConfig output;
    if (root.contains("output")) {
        if (const json* node = p.object(root, "output", "output")) {
            const auto dir = p.text(*node, "directory", "output.directory", std::string("out"));
            const auto snaps = p.boolean(*node, "snapshots", "output.snapshots", false);
            const auto stride = p.integer(*node, "snapshot_stride", "output.snapshot_stride", 1L);
            if (dir) output.directory = *dir;
            if (snaps) output.snapshots = *snaps;
            if (stride) {
                if (*stride < 1)
                    p.err("output.snapshot_stride", "must be >= 1");
                else
                    output.snapshot_stride = *stride;
            }
        }
    }

    int rays = 720;
    if (root.contains("geometry")) {
        if (const json* node = p.object(root, "geometry", "geometry")) {
            const auto m = p.integer(*node, "rays", "geometry.rays", 720L);
            if (m) {
                if (*m < 4)
                    p.err("geometry.rays", "must be >= 4");
                else
                    rays = static_cast<int>(*m);
            }
        }
    }

    double late_fraction = 0.5;
    if (root.contains("late_window_fraction")) {
        const auto f = p.number(root, "late_window_fraction", "late_window_fraction", 0.5);
        if (f) {
            if (!(*f > 0.0 && *f <= 1.0))
                p.err("late_window_fraction", "must lie in (0, 1]");
            else
                late_fraction = *f;
        }
    }

    if (!result.errors.empty() || !grid || !solver || !reaction || !scenario) return result;
    result.config = RunConfig{*solver, *reaction, *scenario, output, rays, late_fraction};
    return result;
}

std::string serialize_config(const RunConfig& config) {
    ordered_json root;
    root["grid"]["half_width"] = config.solver.grid.half_width;
    root["grid"]["nodes_per_side"] = config.solver.grid.nodes_per_side;
    root["solver"]["cfl_fraction"] = config.solver.cfl_fraction;
    root["solver"]["t_end"] = config.solver.t_end;
    root["solver"]["record_interval"] = config.solver.record_interval;
    root["solver"]["boundary_tolerance"] = config.solver.boundary_tolerance;
    root["reaction"] = reaction_to_json(config.reaction);
    root["scenario"] = scenario_to_json(config.scenario);
    root["output"]["directory"] = config.output.directory;
    root["output"]["snapshots"] = config.output.snapshots;
    root["output"]["snapshot_stride"] = config.output.snapshot_stride;
    root["geometry"]["rays"] = config.rays;
    root["late_window_fraction"] = config.late_window_fraction;
    return root.dump(2) + "\n";
}

ReactionSection parse_reaction_section(const std::string& text) {
    ReactionSection section;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        section.errors.push_back(e.what());
        return section;
    }
    Parser p{section.errors};
    if (const json* node = p.object(root, "reaction", "reaction"))
        section.reaction = parse_reaction_node(p, *node, "reaction");
    if (root.contains("scenario") && root["scenario"].is_object() &&
        root["scenario"].contains("g") && root["scenario"]["g"].is_object())
        section.lower_bound_g = parse_reaction_node(p, root["scenario"]["g"], "scenario.g");
    return section;
}

} // namespace rdsym
