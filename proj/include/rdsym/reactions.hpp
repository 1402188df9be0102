// The nonlinearity f(t, z) as a closed family of variants, plus numerical
// validators for the concavity (KPP), superposition, and lower-bound hypotheses.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdsym/errors.hpp"

namespace rdsym {

enum class ReactionKind { Linear, FisherKPP, TimePeriodicKPP, Combustion, Bistable };

// Immutable reaction term. All variants satisfy f(t, 0) = 0 and are Lipschitz
// in z on bounded intervals, uniformly in t.
class ReactionTerm {
public:
    // zeta(t) = a + b sin(omega t); constant when b = 0. Requires a >= b >= 0.
    static ReactionTerm linear(double a, double b = 0.0, double omega = 1.0);
    static ReactionTerm fisher_kpp(double rho);
    static ReactionTerm time_periodic_kpp(double a, double b, double omega = 1.0);
    static ReactionTerm combustion(double theta0);
    static ReactionTerm bistable(double a);

    double eval(double t, double z) const;
    double operator()(double t, double z) const { return eval(t, z); }

    // sup over t > 0 and z > 0 of f(t, z)/z, by closed form per variant.
    double sup_slope() const;

    // Saturation level Z: 1 for the bounded variants, +infinity for Linear.
    double saturation() const;

    // theta0 of the sign pattern g <= 0 on (0, theta0), g > 0 on (theta0, Z);
    // zero for the KPP-type variants.
    double sign_change() const;

    bool time_dependent() const;
    // One temporal period for the periodic variants, 0 otherwise.
    double period() const;

    ReactionKind kind() const { return kind_; }
    std::string name() const;

    double param_a() const { return a_; }
    double param_b() const { return b_; }
    double param_omega() const { return omega_; }

    friend bool operator==(const ReactionTerm&, const ReactionTerm&) = default;

private:
    ReactionTerm(ReactionKind k, double a, double b, double omega)
        : kind_(k), a_(a), b_(b), omega_(omega) {}

    ReactionKind kind_;
    double a_;     // zeta offset, rho, theta0, or the bistable zero, per variant
    double b_;     // zeta oscillation amplitude (periodic variants only)
    double omega_; // zeta angular frequency (periodic variants only)
};

// Hypothesis check outcome; on failure `witness` names the violating sample.
struct CheckVerdict {
    bool pass = true;
    std::string witness;
};

// f(t, z)/z nonincreasing in z (tolerance 1e-12) and f(t, z) > 0 on the
// sampled (0, Z) for every z, minimised over the sampled t.
CheckVerdict check_kpp(const ReactionTerm& f, std::span<const double> z_samples,
                       std::span<const double> t_samples);

// f(t, alpha + beta) <= f(t, alpha) + f(t, beta) within 1e-12 on every sample.
CheckVerdict check_superposition(const ReactionTerm& f,
                                 std::span<const std::pair<double, double>> pairs,
                                 std::span<const double> t_samples);

// f(t, z) >= g(z) - 1e-12 on all samples, g matches its declared sign pattern,
// and the trapezoid integral of g over [0, Z] is positive. g must be
// time-independent.
CheckVerdict check_lower_bound(const ReactionTerm& f, const ReactionTerm& g,
                               std::span<const double> z_samples,
                               std::span<const double> t_samples);

// Documented default sample grids: 10^4 log-spaced z in (1e-6, min(Z, 10)),
// 10^3 t over one period (or [0, 10] for time-independent variants).
std::vector<double> default_z_samples(const ReactionTerm& f);
std::vector<double> default_t_samples(const ReactionTerm& f);
std::vector<std::pair<double, double>> default_superposition_pairs(const ReactionTerm& f,
                                                                   std::size_t count = 10000);

} // namespace rdsym
