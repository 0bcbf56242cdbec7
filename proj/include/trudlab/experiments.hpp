#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "trudlab/barriers.hpp"
#include "trudlab/exponent.hpp"
#include "trudlab/operators.hpp"

namespace trudlab {

enum class Relation { Equal, AtMost, AtLeast };

std::string to_string(Relation r);

/// One measured number checked against a target. Equal means |measured - target| <= tolerance,
/// AtMost means measured <= target + tolerance, AtLeast means measured >= target - tolerance.
struct Quantity {
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    Relation relation = Relation::Equal;
    /// Where the target comes from: "closed-form", "eigensolver", "heat-oracle", ...
    std::string target_source;
    bool pass = false;
};

Quantity make_quantity(std::string name, double measured, double target, double tolerance,
                       Relation relation, std::string target_source);

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
    std::string name;
    Exponent p = Exponent::finite(2.0);
    int n = 2;
    NamedValues inputs;
    std::vector<Quantity> quantities;
    /// Pass flags without a single number behind them (monotonicity, audits).
    std::vector<std::pair<std::string, bool>> flags;
    std::vector<Table> tables;
    /// Supporting numbers that carry no pass/fail (consistency bounds, T0, ...).
    NamedValues diagnostics;
    double runtime_seconds = 0.0;

    bool passed() const;
    const Quantity& quantity(const std::string& name) const;
};

struct DecayOptions {
    std::size_t intervals = 400;
    std::size_t steps = 2000;
    /// Horizon = efolds * (p-1) / lambda_R; the slope is fitted on the last window_fraction.
    double efolds = 5.0;
    double window_fraction = 0.5;
    double relative_tolerance = 0.02;
    bool estimate_consistency = true;
};

/// Decay of sup u with zero boundary data: eigenfunction data attains -lambda_R/(p-1),
/// generic data 1 - (r/R)^2 decays at least that fast. Finite p only.
ExperimentReport decay_experiment(const Exponent& p, int n, double R, const DecayOptions& options = {});

struct FlattenOptions {
    std::size_t intervals = 200;
    double tolerance = 1e-10;
    /// t_end = horizon_factor * max(T0, T1).
    double horizon_factor = 10.0;
    double center_tolerance = 0.01;
    /// Largest time step as a fraction of t_end; the first step is 1e-3 of it.
    double max_step_fraction = 1e-3;
};

/// Data straddling 1 on the ball of radius R: sup M at the center, inf m at 3R/4, f(R) = 1.
double straddling_data(double r, double R, double m, double M);

/// Runs g = 1 with straddling data and checks the flattening barrier sandwich,
/// the |log u| <= C t^{-alpha} envelope and u -> 1.
ExperimentReport flatten_experiment(const Exponent& p, int n, double R, double m, double M, double alpha,
                                    const FlattenOptions& options = {});

/// Default alpha for flatten runs: min(1, largest admissible alpha).
double default_flatten_alpha(const Exponent& p);

/// Closed-form growth study on unbounded domains. Lower bound m exp(-lambda(R) t / deg)
/// from the eigen barrier, upper bound M exp(a((1+t)^{deg+1} - 1)) from the growth barrier
/// with b = 3 eps and alpha = 1.
ExperimentReport phragmen_lindelof_study(const Exponent& p, int n, double m, double M,
                                         const std::vector<double>& eps_list,
                                         const std::vector<double>& R_list, double t_probe);

/// A catalog family with the parameters and sample box used by the sweep.
struct CatalogEntry {
    BarrierSpec spec;
    Region region;
};

/// Every family applicable to (p, n) with default parameters on the unit ball.
/// The time factor uses the delta-BVP profile at lambda = lambda_R / 2, delta = 2.
std::vector<CatalogEntry> barrier_catalog(const Exponent& p, int n);

/// max over sample points with u > 0 of |Gamma_p u - u^deg G_p(log u)| divided by
/// the sum of the term magnitudes on both sides.
double transform_identity_deviation(const BarrierSpec& spec, const Region& region, std::size_t samples,
                                    std::uint64_t seed);

/// verify_sign and the transform identity over barrier_catalog(p, n).
ExperimentReport catalog_experiment(const Exponent& p, int n, const VerifyOptions& options = {});

}  // namespace trudlab
