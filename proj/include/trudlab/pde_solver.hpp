#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trudlab/exponent.hpp"
#include "trudlab/field.hpp"

namespace trudlab {

enum class Scheme {
    LogImplicit,     ///< backward Euler for G_p v = 0, v = log u; needs positive data
    DirectExplicit,  ///< forward Euler for u_t = Delta_p u / ((p-1) max(u, eps)^{p-2})
    DirectImplicit,  ///< backward Euler for d/dt(|u|^{p-2}u) = Delta_p u; admits u -> 0
};

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& text);

/// Geometric step sequence used when no fixed dt is given.
struct AdaptiveTime {
    double dt_initial = 0.0;  ///< 0 means 1e-4 * t_end
    double growth = 1.1;
    double dt_max = 0.0;  ///< 0 means t_end / 100
    /// Stored levels for DirectExplicit, which sub-steps internally.
    std::size_t record_intervals = 200;
};

struct SolverConfig {
    Exponent p = Exponent::finite(2.0);
    int n = 2;
    double R = 1.0;
    /// Radial nodes are intervals + 1. Must be even when the consistency bound is estimated.
    std::size_t intervals = 200;
    /// Fixed step; std::nullopt selects AdaptiveTime.
    std::optional<double> dt;
    double t_end = 1.0;
    Scheme scheme = Scheme::LogImplicit;
    std::function<double(double)> boundary;  ///< g(t) at r = R
    std::function<double(double)> initial;   ///< f(r) at t = 0
    double tolerance = 1e-10;
    AdaptiveTime adaptive;
    /// Run the half-resolution companions that produce consistency_bound and residual_bound.
    bool estimate_consistency = true;
    /// Forward Euler step as a fraction of the frozen-coefficient stability limit.
    double cfl = 0.4;
};

/// Throws DomainError on inconsistent parameters or data (compatibility,
/// positivity for LogImplicit, sign for the direct schemes).
void validate(const SolverConfig& config);

/// Stored time levels t_0 = 0 < ... < t_end.
std::vector<double> time_grid(const SolverConfig& config);

struct SolverRun {
    SpaceTimeField field;
    SolverConfig config;
    /// Estimated max nodal error in u (value units), from half-resolution runs.
    /// Zero-information runs still carry tolerance * sup|data|.
    double consistency_bound = 0.0;
    /// Max nodal gaps to the half-space and double-step companions.
    double space_gap = 0.0;
    double time_gap = 0.0;
    /// Upper bound for the FD residual audit on the audit region.
    double residual_bound = 0.0;
    /// FD residual audit of this field on the audit region.
    double audit_residual = 0.0;
    double audit_r_min = 0.0;
    double audit_t_min = 0.0;
    std::size_t steps = 0;
    std::size_t newton_iterations = 0;
    std::size_t step_halvings = 0;
    double epsilon_reg = 0.0;

    bool audit_within_bound() const { return audit_residual <= residual_bound; }
};

/// Time-steps Gamma_p u = 0 on the ball of radius R with u = f at t = 0 and u = g at r = R.
/// Throws SolverError when the inner iteration diverges (message names the time level).
SolverRun solve_gamma_p_radial(const SolverConfig& config);

/// Least-squares slope of log sup_r u(., t) against t over levels with t in [t_a, t_b].
/// Throws SolverError if sup u <= 0 on the window.
double measure_decay_rate(const SpaceTimeField& field, double t_a, double t_b);

/// max over interior nodes of a/b minus the sup of a/b over the parabolic boundary,
/// floored at 0. Interior: levels j >= 1 and r < R.
double comparison_check(const SpaceTimeField& a, const SpaceTimeField& b);

struct MaxPrincipleReport {
    double sup_violation = 0.0;  ///< interior sup - boundary sup, floored at 0
    double inf_violation = 0.0;  ///< boundary inf - interior inf, floored at 0
};

MaxPrincipleReport max_principle_check(const SpaceTimeField& field);

}  // namespace trudlab
