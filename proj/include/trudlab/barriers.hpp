#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trudlab/exponent.hpp"
#include "trudlab/operators.hpp"
#include "trudlab/radial.hpp"

namespace trudlab {

enum class Family {
    EigenBarrier26,
    GrowthBarrier27,
    Kernel29,
    PowerSolution270,
    UpperBound320,
    LowerBound324,
    InfUpperBound,
    InfLowerBound,
    TimeFactor35,
    BoundaryBarrierHighP,
    BoundaryBarrierLowP,
    Paraboloid314,
    Separated25,
};

std::string to_string(Family f);
Family parse_family(const std::string& text);

/// Which residual a family is checked with.
enum class ResidualForm {
    Direct,              ///< Gamma_p of the stored function phi
    Log,                 ///< G_p of the stored function v = log phi
    ClosedFormIdentity,  ///< G_p v minus the family's closed-form value of G_p v
    Elliptic,            ///< Delta_p w + lambda |w|^{p-2} w, time ignored
};

/// Closed (r, t) box. Infinite t_hi is allowed for validity domains.
struct Region {
    double r_lo = 0.0;
    double r_hi = 1.0;
    double t_lo = 0.0;
    double t_hi = 1.0;

    bool contains(const Region& other, double slack = 1e-12) const;
};

struct BarrierEval {
    double value = 0.0;
    bool is_log_form = false;
};

using NamedValues = std::vector<std::pair<std::string, double>>;

/// One closed-form auxiliary function with validated parameters.
struct BarrierSpec {
    Family family = Family::Paraboloid314;
    Exponent p = Exponent::finite(2.0);
    int n = 2;
    NamedValues params;
    NamedValues derived;
    ResidualForm form = ResidualForm::Direct;
    /// phi for Direct and Elliptic, v = log phi for Log and ClosedFormIdentity.
    SpaceTimeFunction stored;
    /// Closed-form G_p v for ClosedFormIdentity.
    std::function<double(double, double)> closed_form;
    /// lambda of the elliptic residual.
    double elliptic_lambda = 0.0;
    Region validity;
    /// Finite box used when no region is requested.
    Region default_region;
    Verdict expected = Verdict::Indeterminate;

    double param(const std::string& name) const;
    double constant(const std::string& name) const;
    bool has(const std::string& name) const;

    /// Stored value and whether it is in log form.
    BarrierEval eval(double r, double t) const;
    /// phi(r, t), exponentiating log-form families.
    double value(double r, double t) const;
    /// phi as a space-time function.
    SpaceTimeFunction direct() const;
    /// The family's residual and term magnitude at (r, t).
    ResidualTerms residual(double r, double t) const;
};

BarrierSpec make_eigen_barrier(const Exponent& p, int n, double R);

/// Throws ConstraintViolation with the supremum of admissible b.
BarrierSpec make_growth_barrier(const Exponent& p, int n, double T, double alpha, double b);
/// Supremum of admissible b for the growth barrier.
double growth_barrier_b_bound(const Exponent& p, double T, double alpha);

BarrierSpec make_kernel(const Exponent& p, int n);

/// u = sign * f(t) r^beta with f >= 0. Infinity accepts sign = +1 only.
BarrierSpec make_power_solution(const Exponent& p, int n, int sign, std::function<double(double)> f,
                                std::function<double(double)> df, double r_hi = 1.0,
                                double t_hi = 1.0);

/// Safety factor applied to the minimal admissible T0, T1, c and a.
inline constexpr double kBarrierSafety = 1.05;

/// Upper barrier for the flattening theorem. Infinity yields InfUpperBound.
BarrierSpec make_thm161_upper(const Exponent& p, int n, double R, double M, double alpha,
                              double safety = kBarrierSafety);
/// Lower barrier for the flattening theorem. Infinity yields InfLowerBound.
BarrierSpec make_thm161_lower(const Exponent& p, int n, double R, double m, double alpha,
                              double safety = kBarrierSafety);
/// Largest admissible alpha: 1/(p-2), unbounded for p = 2, 1/2 for Infinity.
double thm161_alpha_max(const Exponent& p);

/// F(t; S, T) from beta(t, T) = exp(lambda (T - t)/deg). Requires beta(S, T) >= 2.
BarrierSpec make_time_factor(double lambda, const Exponent& p, double S, double T);
double time_factor_F(const BarrierSpec& spec, double t);
double time_factor_Ft(const BarrierSpec& spec, double t);
/// Attaches psi so the result evaluates phi = psi(r) F(t) and can be verified.
BarrierSpec attach_profile(const BarrierSpec& time_factor, const RadialProfile& psi, int n);
/// Closed-form Gamma_p(psi F) assuming Delta_p psi + lambda psi^{p-1} = 0.
double time_factor_closed_form(const BarrierSpec& spec, double psi_value, double t);

struct BoundaryCaseHigh {
    double theta = 0.5;
    double R = 1.0;
    double delta = 1.0;
    double lambda = 0.0;
};
struct BoundaryCaseLow {
    double alpha = 1.0;
    double rho = 1.0;
    double R = 1.0;
    double delta = 1.0;
    double lambda = 0.0;
};
/// Case n < p: w = delta + c r^alpha on (0, R].
BarrierSpec make_boundary_barrier(const Exponent& p, int n, const BoundaryCaseHigh& args,
                                  double safety = kBarrierSafety);
/// Case 2 <= p <= n: w = delta + c (rho^-alpha - r^-alpha) on [rho, rho + R].
BarrierSpec make_boundary_barrier(const Exponent& p, int n, const BoundaryCaseLow& args,
                                  double safety = kBarrierSafety);
double boundary_high_lambda_bound(const Exponent& p, int n, double theta, double R);
double boundary_low_lambda_bound(const Exponent& p, int n, double alpha, double rho, double R);

/// psi = R^2 - r^2, time independent.
BarrierSpec make_paraboloid(const Exponent& p, int n, double R);

/// u = psi(r) exp(-mu t / deg). Expected verdict assumes Delta_p psi + lambda psi^deg = 0.
BarrierSpec separated_solution(const RadialProfile& psi, double lambda, double mu, const Exponent& p,
                               int n, double t_hi = 1.0);

struct VerifyOptions {
    std::size_t samples = 10000;
    std::size_t random_samples = 1000;
    double tolerance = 1e-9;
    std::uint64_t seed = 0x7d1a5eedULL;
};

/// Sign test on a tensor grid of sqrt(samples)^2 points plus random points.
/// Throws DomainError if region leaves the validity domain.
ResidualReport verify_sign(const BarrierSpec& spec, const Region& region, Verdict expected,
                           const VerifyOptions& options = {});
ResidualReport verify_sign(const BarrierSpec& spec, const VerifyOptions& options = {});

/// Deterministic sample points in a region (tensor grid then random).
std::vector<SpaceTimePoint> sample_points(const Region& region, std::size_t samples,
                                          std::size_t random_samples, std::uint64_t seed);

}  // namespace trudlab
