#include "rdsym/reactions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace rdsym {

namespace {
constexpr double kTol = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
} // namespace

ReactionTerm ReactionTerm::linear(double a, double b, double omega) {
    if (!(a >= 0.0) || b < 0.0 || b > a)
        throw ContractViolation("ReactionTerm::linear: requires a >= b >= 0");
    if (b > 0.0 && !(omega > 0.0))
        throw ContractViolation("ReactionTerm::linear: omega must be > 0 when b > 0");
    return {ReactionKind::Linear, a, b, omega};
}

ReactionTerm ReactionTerm::fisher_kpp(double rho) {
    if (!(rho > 0.0)) throw ContractViolation("ReactionTerm::fisher_kpp: rho must be > 0");
    return {ReactionKind::FisherKPP, rho, 0.0, 0.0};
}

ReactionTerm ReactionTerm::time_periodic_kpp(double a, double b, double omega) {
    if (!(a > b) || b < 0.0)
        throw ContractViolation("ReactionTerm::time_periodic_kpp: requires a > b >= 0");
    if (!(omega > 0.0))
        throw ContractViolation("ReactionTerm::time_periodic_kpp: omega must be > 0");
    return {ReactionKind::TimePeriodicKPP, a, b, omega};
}

ReactionTerm ReactionTerm::combustion(double theta0) {
    if (!(theta0 > 0.0 && theta0 < 1.0))
        throw ContractViolation("ReactionTerm::combustion: theta0 must lie in (0, 1)");
    return {ReactionKind::Combustion, theta0, 0.0, 0.0};
}

ReactionTerm ReactionTerm::bistable(double a) {
    if (!(a > 0.0 && a < 0.5))
        throw ContractViolation("ReactionTerm::bistable: a must lie in (0, 1/2)");
    return {ReactionKind::Bistable, a, 0.0, 0.0};
}

double ReactionTerm::eval(double t, double z) const {
    switch (kind_) {
    case ReactionKind::Linear:
        return (a_ + b_ * std::sin(omega_ * t)) * z;
    case ReactionKind::FisherKPP:
        return a_ * z * (1.0 - z);
    case ReactionKind::TimePeriodicKPP:
        return (a_ + b_ * std::sin(omega_ * t)) * z * (1.0 - z);
    case ReactionKind::Combustion:
        if (z <= a_ || z > 1.0) return 0.0;
        return (z - a_) * (1.0 - z);
    case ReactionKind::Bistable:
        return z * (1.0 - z) * (z - a_);
    }
    return 0.0;
}

double ReactionTerm::sup_slope() const {
    switch (kind_) {
    case ReactionKind::Linear:
    case ReactionKind::TimePeriodicKPP:
        return a_ + b_;
    case ReactionKind::FisherKPP:
        return a_;
    case ReactionKind::Combustion: {
        // (z - theta0)(1 - z)/z is maximised at z = sqrt(theta0).
        const double s = std::sqrt(a_);
        return (1.0 - s) * (1.0 - s);
    }
    case ReactionKind::Bistable: {
        // (1 - z)(z - a) is maximised at z = (1 + a)/2.
        const double half = 0.5 * (1.0 - a_);
        return half * half;
    }
    }
    return 0.0;
}

double ReactionTerm::saturation() const {
    return kind_ == ReactionKind::Linear ? std::numeric_limits<double>::infinity() : 1.0;
}

double ReactionTerm::sign_change() const {
    switch (kind_) {
    case ReactionKind::Combustion: return a_;
    case ReactionKind::Bistable: return a_;
    default: return 0.0;
    }
}

bool ReactionTerm::time_dependent() const {
    return (kind_ == ReactionKind::Linear || kind_ == ReactionKind::TimePeriodicKPP) && b_ > 0.0;
}

double ReactionTerm::period() const {
    return time_dependent() ? 2.0 * M_PI / omega_ : 0.0;
}

std::string ReactionTerm::name() const {
    switch (kind_) {
    case ReactionKind::Linear: return "linear";
    case ReactionKind::FisherKPP: return "fisher_kpp";
    case ReactionKind::TimePeriodicKPP: return "time_periodic_kpp";
    case ReactionKind::Combustion: return "combustion";
    case ReactionKind::Bistable: return "bistable";
    }
    return "unknown";
}

CheckVerdict check_kpp(const ReactionTerm& f, std::span<const double> z_samples,
                       std::span<const double> t_samples) {
    if (z_samples.empty() || t_samples.empty())
        throw ContractViolation("check_kpp: sample grids must be nonempty");
    for (std::size_t i = 0; i + 1 < z_samples.size(); ++i)
        if (!(z_samples[i] > 0.0) || !(z_samples[i] < z_samples[i + 1]))
            throw ContractViolation("check_kpp: z samples must be positive and sorted");

    const double Z = f.saturation();
    for (double t : t_samples) {
        double prev = f.eval(t, z_samples[0]) / z_samples[0];
        for (std::size_t i = 1; i < z_samples.size(); ++i) {
            const double cur = f.eval(t, z_samples[i]) / z_samples[i];
            if (prev < cur - kTol) {
                return {false, "f(t,z)/z increases at t=" + fmt(t) + ", z1=" +
                                   fmt(z_samples[i - 1]) + ", z2=" + fmt(z_samples[i])};
            }
            prev = cur;
        }
    }
    for (double z : z_samples) {
        if (!(z < Z)) continue;
        double lo = std::numeric_limits<double>::infinity();
        double t_lo = t_samples[0];
        for (double t : t_samples) {
            const double v = f.eval(t, z);
            if (v < lo) { lo = v; t_lo = t; }
        }
        if (!(lo > 0.0))
            return {false, "f(t,z) not positive at t=" + fmt(t_lo) + ", z=" + fmt(z) +
                               " (f=" + fmt(lo) + ")"};
    }
    return {};
}

CheckVerdict check_superposition(const ReactionTerm& f,
                                 std::span<const std::pair<double, double>> pairs,
                                 std::span<const double> t_samples) {
    if (pairs.empty() || t_samples.empty())
        throw ContractViolation("check_superposition: samples must be nonempty");
    for (auto [alpha, beta] : pairs)
        if (!(alpha > 0.0) || alpha > beta)
            throw ContractViolation("check_superposition: pairs must satisfy 0 < alpha <= beta");

    for (double t : t_samples) {
        for (auto [alpha, beta] : pairs) {
            const double lhs = f.eval(t, alpha + beta);
            const double rhs = f.eval(t, alpha) + f.eval(t, beta);
            if (lhs > rhs + kTol)
                return {false, "f(t,a+b) > f(t,a)+f(t,b) at t=" + fmt(t) + ", a=" + fmt(alpha) +
                                   ", b=" + fmt(beta) + " (" + fmt(lhs) + " > " + fmt(rhs) + ")"};
        }
    }
    return {};
}

CheckVerdict check_lower_bound(const ReactionTerm& f, const ReactionTerm& g,
                               std::span<const double> z_samples,
                               std::span<const double> t_samples) {
    if (g.time_dependent())
        throw ContractViolation("check_lower_bound: g must be time-independent");
    if (z_samples.empty() || t_samples.empty())
        throw ContractViolation("check_lower_bound: samples must be nonempty");

    const double Z = g.saturation();
    if (!std::isfinite(Z))
        throw ContractViolation("check_lower_bound: g must have a finite saturation level");
    const double theta0 = g.sign_change();

    for (double t : t_samples)
        for (double z : z_samples)
            if (f.eval(t, z) < g.eval(0.0, z) - kTol)
                return {false, "f < g at t=" + fmt(t) + ", z=" + fmt(z)};

    // Sign pattern and integral of g over [0, Z] on a dense uniform grid.
    const int m = 10000;
    double integral = 0.0;
    double prev = g.eval(0.0, 0.0);
    for (int i = 1; i <= m; ++i) {
        const double z = Z * i / m;
        const double v = g.eval(0.0, z);
        if (z < theta0 && v > kTol)
            return {false, "g > 0 below theta0 at z=" + fmt(z)};
        if (z > theta0 && z < Z && !(v > 0.0))
            return {false, "g not positive on (theta0, Z) at z=" + fmt(z)};
        integral += 0.5 * (prev + v) * (Z / m);
        prev = v;
    }
    if (!(integral > 0.0))
        return {false, "integral of g over [0, Z] is not positive (" + fmt(integral) + ")"};
    return {};
}

std::vector<double> default_z_samples(const ReactionTerm& f) {
    const double Z = f.saturation();
    const double z_max = std::isfinite(Z) ? Z * (1.0 - 1e-9) : 10.0;
    const std::size_t count = 10000;
    std::vector<double> z(count);
    const double lo = std::log(1e-6), hi = std::log(z_max);
    for (std::size_t i = 0; i < count; ++i)
        z[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return z;
}

std::vector<double> default_t_samples(const ReactionTerm& f) {
    const double horizon = f.time_dependent() ? f.period() : 10.0;
    const std::size_t count = 1000;
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = horizon * static_cast<double>(i) / (count - 1);
    return t;
}

std::vector<std::pair<double, double>> default_superposition_pairs(const ReactionTerm& f,
                                                                   std::size_t count) {
    const double Z = f.saturation();
    const double z_max = std::isfinite(Z) ? Z : 10.0;
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(count);
    // A coarse deterministic lattice first, so failure witnesses are stable.
    for (int i = 1; i <= 19; ++i) {
        for (int j = i; j <= 19; ++j) {
            pairs.emplace_back(0.05 * i * z_max, 0.05 * j * z_max);
            if (pairs.size() >= count) return pairs;
        }
    }
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> log_u(std::log(1e-6), std::log(z_max));
    while (pairs.size() < count) {
        double u = std::exp(log_u(rng)), v = std::exp(log_u(rng));
        pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
    return pairs;
}

} // namespace rdsym
