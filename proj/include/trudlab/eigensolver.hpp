#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "trudlab/exponent.hpp"
#include "trudlab/field.hpp"
#include "trudlab/radial.hpp"

namespace trudlab {

/// Radial samples of psi and the flux w = |psi'|^{p-2} psi' on a uniform grid,
/// for a solution of Delta_p psi + lambda |psi|^{p-2} psi = 0.
struct RadialSamples {
    Exponent p = Exponent::finite(2.0);
    int n = 2;
    double lambda = 0.0;
    RadialGrid grid;
    std::vector<double> psi;
    std::vector<double> flux;

    /// C^1 interpolant: psi by cubic Hermite, psi' from the interpolated flux,
    /// psi'' from the ODE. The axis uses the leading r^{p/(p-1)} term.
    RadialProfile profile() const;
};

struct ShootResult {
    RadialSamples samples;  ///< truncated at the zero when the run stopped early
    std::optional<double> zero;
    std::size_t steps = 0;
};

struct EigenOptions {
    double tol = 1e-8;            ///< absolute bracket width on lambda
    std::size_t intervals = 10000;
    double start_fraction = 1e-6;  ///< series start r0 = fraction * R
    std::size_t max_expansions = 60;
};

/// Integrates Delta_p psi + lambda psi^{p-1} = 0 outward from psi(0) = psi0, psi'(0) = 0.
/// With stop_at_zero the run ends at the first sign change of psi.
ShootResult shoot_radial(const Exponent& p, int n, double R, double lambda, double psi0,
                         std::size_t intervals, bool stop_at_zero = true,
                         double start_fraction = 1e-6);

struct EigenResult {
    double lambda = 0.0;
    RadialSamples eigenfunction;  ///< psi(0) = 1
    std::size_t bisection_iterations = 0;
    double bracket_low = 0.0;
    double bracket_high = 0.0;
    /// Max of the flux-form discrete residual divided by lambda.
    double residual_norm = 0.0;
};

/// First Dirichlet eigenvalue on B_R by bisection on lambda. Finite p only.
EigenResult first_eigenvalue(const Exponent& p, int n, double R, const EigenOptions& options = {});

/// max |discrete Delta_p psi + lambda psi^{p-1}| / lambda in flux form,
/// over nodes with r >= r_min and below the last node.
double flux_residual(const RadialSamples& s, double r_min);

struct ScalingResult {
    std::vector<double> radii;
    std::vector<double> lambdas;
    std::vector<double> products;  ///< lambda_R R^p
    double median = 0.0;
    double spread = 0.0;
};

/// lambda_R R^p for each radius and the max relative deviation from the median.
ScalingResult scaling_check(const Exponent& p, int n, const std::vector<double>& radii,
                            const EigenOptions& options = {}, unsigned jobs = 1);

struct BvpResult {
    double lambda = 0.0;
    double delta = 0.0;
    double M_lambda = 0.0;  ///< u(0) = sup u
    RadialSamples solution;
};

/// Positive radial solution of Delta_p u + lambda u^{p-1} = 0, u(R) = delta.
/// Throws SolverError when lambda is at or above the first eigenvalue.
BvpResult solve_delta_bvp(const Exponent& p, int n, double R, double lambda, double delta,
                          std::size_t intervals = 10000);

/// delta lambda_R^{1/(p-1)} / (lambda_R^{1/(p-1)} - lambda^{1/(p-1)}).
double blowup_lower_bound(const Exponent& p, double lambda, double lambda_R, double delta);

struct EpsilonGain {
    double epsilon = 0.0;
    double worst_residual = 0.0;  ///< max of Delta_p v + (lambda+eps) v^{p-1}
    double scale = 0.0;           ///< lambda M^{p-1}
    bool verified = false;
};

/// epsilon = lambda((1 - t m/M)^{-(p-1)} - 1) for v = u - t m, with the
/// inequality Delta_p v + (lambda+eps) v^{p-1} <= tolerance*scale checked on the grid.
/// Throws SolverError if the check fails.
EpsilonGain epsilon_gain(const BvpResult& bvp, double t, double tolerance = 1e-8);

struct QuotientCheck {
    bool pass = false;
    double interior_max = 0.0;
    double boundary_value = 0.0;
};

/// max over interior nodes of u/v against u/v at the boundary node.
/// Requires lambda <= lambda_bar and v > 0.
QuotientCheck quotient_comparison_check(const std::vector<double>& u, const std::vector<double>& v,
                                        double lambda, double lambda_bar, double tolerance = 1e-8);

}  // namespace trudlab
