#include "trudlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "trudlab/eigensolver.hpp"
#include "trudlab/errors.hpp"
#include "trudlab/pde_solver.hpp"

namespace trudlab {

std::string to_string(Relation r) {
    switch (r) {
        case Relation::Equal: return "==";
        case Relation::AtMost: return "<=";
        case Relation::AtLeast: return ">=";
    }
    return "?";
}

Quantity make_quantity(std::string name, double measured, double target, double tolerance,
                       Relation relation, std::string target_source) {
    Quantity q{std::move(name), measured, target, tolerance, relation, std::move(target_source), false};
    switch (relation) {
        case Relation::Equal: q.pass = std::abs(measured - target) <= tolerance; break;
        case Relation::AtMost: q.pass = measured <= target + tolerance; break;
        case Relation::AtLeast: q.pass = measured >= target - tolerance; break;
    }
    return q;
}

bool ExperimentReport::passed() const {
    for (const auto& q : quantities) {
        if (!q.pass) return false;
    }
    for (const auto& [name, ok] : flags) {
        if (!ok) return false;
    }
    return true;
}

const Quantity& ExperimentReport::quantity(const std::string& name) const {
    for (const auto& q : quantities) {
        if (q.name == name) return q;
    }
    throw DomainError("report " + this->name + " has no quantity '" + name + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
    }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        num += (x[k] - sx / m) * (y[k] - sy / m);
        den += (x[k] - sx / m) * (x[k] - sx / m);
    }
    return num / den;
}

void add_run_flags(ExperimentReport& rep, const std::string& label, const SolverRun& run) {
    const auto mp = max_principle_check(run.field);
    const double allowed = 5.0 * run.consistency_bound;
    rep.flags.emplace_back(label + ".max_principle",
                           mp.sup_violation <= allowed && mp.inf_violation <= allowed);
    rep.flags.emplace_back(label + ".residual_audit", run.audit_within_bound());
}

}  // namespace

ExperimentReport decay_experiment(const Exponent& p, int n, double R, const DecayOptions& options) {
    if (p.is_infinite()) throw Unsupported("decay experiment needs finite p");
    const auto start = Clock::now();
    ExperimentReport rep;
    rep.name = "decay";
    rep.p = p;
    rep.n = n;
    rep.inputs = {{"R", R},
                  {"intervals", static_cast<double>(options.intervals)},
                  {"steps", static_cast<double>(options.steps)},
                  {"efolds", options.efolds},
                  {"window_fraction", options.window_fraction},
                  {"relative_tolerance", options.relative_tolerance}};

    const double deg = p.degree();
    const EigenResult eig = first_eigenvalue(p, n, R);
    const double rate = eig.lambda / deg;
    const double horizon = options.efolds / rate;
    const RadialProfile psi = eig.eigenfunction.profile();
    const double psi_R = eig.eigenfunction.psi.back();

    SolverConfig base;
    base.p = p;
    base.n = n;
    base.R = R;
    base.intervals = options.intervals;
    base.t_end = horizon;
    base.dt = horizon / static_cast<double>(options.steps);
    base.scheme = Scheme::DirectImplicit;
    base.boundary = [](double) { return 0.0; };
    base.estimate_consistency = options.estimate_consistency;

    SolverConfig eigen_cfg = base;
    // Shift out the O(1e-10) residue of the shooting at r = R so that f(R) = g(0) exactly.
    eigen_cfg.initial = [psi, psi_R, R](double r) { return r >= R ? 0.0 : std::max(psi.value(r) - psi_R, 0.0); };
    SolverConfig generic_cfg = base;
    generic_cfg.initial = [R](double r) { return 1.0 - (r / R) * (r / R); };

    const SolverRun eigen_run = solve_gamma_p_radial(eigen_cfg);
    const SolverRun generic_run = solve_gamma_p_radial(generic_cfg);
    const double t_a = (1.0 - options.window_fraction) * horizon;
    const double slope_eigen = measure_decay_rate(eigen_run.field, t_a, horizon);
    const double slope_generic = measure_decay_rate(generic_run.field, t_a, horizon);
    const double tol = options.relative_tolerance * rate;

    rep.quantities.push_back(make_quantity("lambda_R", eig.lambda, eig.lambda, 0.0, Relation::Equal, "eigensolver"));
    rep.quantities.push_back(
        make_quantity("slope_eigen_data", slope_eigen, -rate, tol, Relation::Equal, "separated solution"));
    rep.quantities.push_back(
        make_quantity("slope_generic_data", slope_generic, -rate, tol, Relation::AtMost, "decay bound"));
    rep.diagnostics = {{"consistency_bound_eigen", eigen_run.consistency_bound},
                       {"consistency_bound_generic", generic_run.consistency_bound},
                       {"horizon", horizon},
                       {"eigen_residual_norm", eig.residual_norm}};
    add_run_flags(rep, "eigen_run", eigen_run);
    add_run_flags(rep, "generic_run", generic_run);

    Table table{"log_sup", {"t", "log_sup_eigen", "log_sup_generic"}, {}};
    for (std::size_t j = 0; j < eigen_run.field.levels(); j += std::max<std::size_t>(1, options.steps / 200)) {
        table.rows.push_back({eigen_run.field.times[j], std::log(eigen_run.field.sup_at(j)),
                              std::log(generic_run.field.sup_at(j))});
    }
    rep.tables.push_back(std::move(table));
    rep.runtime_seconds = seconds_since(start);
    return rep;
}

double straddling_data(double r, double R, double m, double M) {
    const double s = std::clamp(r / R, 0.0, 1.0);
    const double pi = std::numbers::pi;
    if (s <= 0.5) return 1.0 + (M - 1.0) * std::pow(std::cos(pi * s), 2);
    return 1.0 - (1.0 - m) * std::pow(std::sin(2.0 * pi * (s - 0.5)), 2);
}

double default_flatten_alpha(const Exponent& p) { return std::min(1.0, thm161_alpha_max(p)); }

ExperimentReport flatten_experiment(const Exponent& p, int n, double R, double m, double M, double alpha,
                                    const FlattenOptions& options) {
    if (!(m > 0.0 && m <= 1.0 && M >= 1.0)) throw DomainError("flatten needs 0 < m <= 1 <= M");
    const auto start = Clock::now();
    ExperimentReport rep;
    rep.name = "flatten";
    rep.p = p;
    rep.n = n;
    rep.inputs = {{"R", R},
                  {"m", m},
                  {"M", M},
                  {"alpha", alpha},
                  {"intervals", static_cast<double>(options.intervals)},
                  {"tolerance", options.tolerance},
                  {"horizon_factor", options.horizon_factor},
                  {"max_step_fraction", options.max_step_fraction}};

    const BarrierSpec upper = make_thm161_upper(p, n, R, M, alpha);
    const BarrierSpec lower = make_thm161_lower(p, n, R, m, alpha);
    const double T0 = upper.constant("T0");
    const double T1 = lower.constant("T1");
    const double Ts = std::max(T0, T1);
    const double t_end = options.horizon_factor * std::max(Ts, 1.0);

    SolverConfig cfg;
    cfg.p = p;
    cfg.n = n;
    cfg.R = R;
    cfg.intervals = options.intervals;
    cfg.t_end = t_end;
    cfg.scheme = Scheme::LogImplicit;
    cfg.tolerance = options.tolerance;
    cfg.adaptive.dt_max = options.max_step_fraction * t_end;
    cfg.adaptive.dt_initial = 1e-3 * cfg.adaptive.dt_max;
    cfg.initial = [=](double r) { return straddling_data(r, R, m, M); };
    cfg.boundary = [](double) { return 1.0; };
    const SolverRun run = solve_gamma_p_radial(cfg);
    const SpaceTimeField& f = run.field;
    const double cb = run.consistency_bound;
    const std::size_t N = f.grid.intervals;

    // Envelope constant from the barriers: |log phi| <= a (R^beta + b) / (1+t)^alpha.
    const double Rb = std::pow(R, p.beta());
    const double C_upper = upper.constant("a") * (Rb + upper.constant("b"));
    const double C_lower = lower.constant("a") * (Rb + lower.constant("b"));
    const double C = std::max(C_upper, C_lower);

    double upper_violation = -std::numeric_limits<double>::infinity();
    double lower_violation = -std::numeric_limits<double>::infinity();
    double envelope_violation = -std::numeric_limits<double>::infinity();
    bool center_decreasing = true;
    double prev_center = std::numeric_limits<double>::infinity();
    std::size_t checked_levels = 0;
    Table table{"center", {"t", "u_center", "upper_center", "lower_center", "envelope"}, {}};
    for (std::size_t j = 0; j < f.levels(); ++j) {
        const double t = f.times[j];
        if (t < Ts || t <= 0.0) continue;
        ++checked_levels;
        for (std::size_t i = 0; i <= N; ++i) {
            const double r = f.grid.r(i);
            upper_violation = std::max(upper_violation, f.values[j][i] - upper.value(r, t));
            lower_violation = std::max(lower_violation, lower.value(r, t) - f.values[j][i]);
        }
        const double u0 = f.values[j][0];
        const double log_center = std::abs(std::log(u0));
        const double envelope = C * std::pow(t, -alpha);
        // Value error cb maps to a log error of at most cb / u.
        envelope_violation = std::max(envelope_violation, log_center - envelope);
        if (log_center > prev_center + cb / u0) center_decreasing = false;
        prev_center = log_center;
        table.rows.push_back({t, u0, upper.value(0.0, t), lower.value(0.0, t), envelope});
    }
    double min_u = std::numeric_limits<double>::infinity();
    for (double v : f.values.back()) min_u = std::min(min_u, v);
    double sampled_gap = 0.0;
    for (std::size_t i = 0; i <= N; i += std::max<std::size_t>(1, N / 10)) {
        sampled_gap = std::max(sampled_gap, std::abs(f.values.back()[i] - 1.0));
    }

    rep.quantities.push_back(
        make_quantity("upper_sandwich_violation", upper_violation, 0.0, cb, Relation::AtMost, "upper barrier"));
    rep.quantities.push_back(
        make_quantity("lower_sandwich_violation", lower_violation, 0.0, cb, Relation::AtMost, "lower barrier"));
    rep.quantities.push_back(make_quantity("log_envelope_violation", envelope_violation, 0.0, cb / min_u,
                                           Relation::AtMost, "barrier envelope"));
    rep.quantities.push_back(make_quantity("center_gap_at_t_end", std::abs(f.values.back()[0] - 1.0), 0.0,
                                           options.center_tolerance, Relation::AtMost, "limit 1"));
    rep.quantities.push_back(make_quantity("sampled_gap_at_t_end", sampled_gap, 0.0, options.center_tolerance,
                                           Relation::AtMost, "limit 1"));
    rep.flags.emplace_back("sandwich_levels_checked", checked_levels > 0);
    rep.flags.emplace_back("center_log_decreasing", center_decreasing);
    add_run_flags(rep, "run", run);
    rep.diagnostics = {{"T0", T0},           {"T1", T1}, {"t_end", t_end}, {"envelope_C", C},
                       {"consistency_bound", cb}, {"space_gap", run.space_gap}, {"time_gap", run.time_gap}, {"levels", static_cast<double>(f.levels())}};
    rep.tables.push_back(std::move(table));
    rep.runtime_seconds = seconds_since(start);
    return rep;
}

ExperimentReport phragmen_lindelof_study(const Exponent& p, int n, double m, double M,
                                         const std::vector<double>& eps_list,
                                         const std::vector<double>& R_list, double t_probe) {
    if (eps_list.size() < 2 || R_list.size() < 2) throw DomainError("pl study needs at least two eps and two R");
    if (!(m > 0.0 && M >= m)) throw DomainError("pl study needs 0 < m <= M");
    if (!(t_probe > 0.0)) throw DomainError("t_probe must be positive");
    const auto start = Clock::now();
    ExperimentReport rep;
    rep.name = "pl";
    rep.p = p;
    rep.n = n;
    rep.inputs = {{"m", m}, {"M", M}, {"t_probe", t_probe}};
    for (double e : eps_list) rep.inputs.emplace_back("eps", e);
    for (double R : R_list) rep.inputs.emplace_back("R", R);
    const double deg = p.degree();
    const double p_power = p.is_infinite() ? 4.0 : p.value();  // lambda(R) scales as R^{-p_power}

    // Lower bound. The log gap lambda(R) t / deg is exact in closed form, so ratios are exact.
    Table lower_table{"lower", {"R", "lower_bound", "log_gap"}, {}};
    std::vector<double> log_gaps;
    std::vector<double> radii = R_list;
    std::sort(radii.begin(), radii.end());
    bool lower_monotone = true;
    double prev_lower = -1.0;
    for (double R : radii) {
        const double lambda = make_eigen_barrier(p, n, R).constant("lambda");
        const double log_gap = lambda * t_probe / deg;
        const double lower = m * std::exp(-log_gap);
        if (!(lower > prev_lower) || lower > m) lower_monotone = false;
        prev_lower = lower;
        log_gaps.push_back(log_gap);
        lower_table.rows.push_back({R, lower, log_gap});
    }
    double worst_ratio_error = 0.0;
    for (std::size_t k = 1; k < radii.size(); ++k) {
        const double expected = std::pow(radii[k - 1] / radii[k], p_power);
        worst_ratio_error = std::max(worst_ratio_error, std::abs(log_gaps[k] / log_gaps[k - 1] - expected));
    }
    rep.quantities.push_back(make_quantity("lower_gap_ratio_error", worst_ratio_error, 0.0, 1e-6, Relation::AtMost,
                                           "R^-p scaling"));
    rep.flags.emplace_back("lower_monotone_to_m", lower_monotone);

    // Upper bound with alpha = 1: M exp(a((1+t)^{e} - 1)), a proportional to b^{deg}, b = 3 eps.
    Table upper_table{"upper", {"eps", "upper_bound", "gap"}, {}};
    std::vector<double> log_eps, log_gap_up;
    std::vector<double> eps_sorted = eps_list;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    bool upper_monotone = true;
    double prev_upper = M;
    for (double eps : eps_sorted) {
        const BarrierSpec g = make_growth_barrier(p, n, t_probe, 1.0, 3.0 * eps);
        const double a = g.constant("a");
        const double e = deg + 1.0;
        const double x = a * std::expm1(e * std::log1p(t_probe));
        const double gap = M * std::expm1(x);
        const double upper = M + gap;
        if (!(upper > prev_upper)) upper_monotone = false;
        prev_upper = upper;
        log_eps.push_back(std::log(eps));
        log_gap_up.push_back(std::log(gap));
        upper_table.rows.push_back({eps, upper, gap});
    }
    // Gap ~ eps^{deg}: p-1 for finite p, 3 for Infinity.
    const double slope = fit_slope(log_eps, log_gap_up);
    rep.quantities.push_back(make_quantity("upper_gap_slope", slope, deg, 0.05, Relation::Equal, "b^(p-1) scaling"));
    rep.quantities.push_back(make_quantity("upper_at_zero_eps", M * std::exp(0.0), M, 0.0, Relation::Equal, "limit M"));
    rep.flags.emplace_back("upper_monotone_to_M", upper_monotone);
    rep.tables.push_back(std::move(lower_table));
    rep.tables.push_back(std::move(upper_table));
    rep.runtime_seconds = seconds_since(start);
    return rep;
}

std::vector<CatalogEntry> barrier_catalog(const Exponent& p, int n) {
    std::vector<CatalogEntry> out;
    auto add = [&out](BarrierSpec s) {
        Region region = s.default_region;
        out.push_back({std::move(s), region});
    };
    const double R = 1.0;
    add(make_eigen_barrier(p, n, R));
    add(make_growth_barrier(p, n, 1.0, 1.0, 0.5 * growth_barrier_b_bound(p, 1.0, 1.0)));
    add(make_kernel(p, n));
    add(make_power_solution(
        p, n, +1, [](double t) { return 1.0 + 0.5 * t; }, [](double) { return 0.5; }));
    const double alpha = default_flatten_alpha(p);
    add(make_thm161_upper(p, n, R, 2.0, alpha));
    add(make_thm161_lower(p, n, R, 0.5, alpha));
    add(make_paraboloid(p, n, R));
    if (p.is_infinite()) return out;

    const double pv = p.value();
    EigenOptions eo;
    eo.intervals = 4000;
    const double lambda_R = first_eigenvalue(p, n, R, eo).lambda;
    const double lambda = 0.5 * lambda_R;
    const BvpResult bvp = solve_delta_bvp(p, n, R, lambda, 2.0, 4000);
    // beta(S, T) = 3 keeps the closed-form residual strictly negative.
    const double T = p.degree() * std::log(3.0) / lambda;
    add(attach_profile(make_time_factor(lambda, p, 0.0, T), bvp.solution.profile(), n));
    if (n < pv) {
        BoundaryCaseHigh hi{0.5, R, 1.0, 0.0};
        hi.lambda = 0.5 * boundary_high_lambda_bound(p, n, hi.theta, R);
        add(make_boundary_barrier(p, n, hi));
    }
    if (pv <= n) {
        BoundaryCaseLow lo{std::max(0.0, (n - pv) / (pv - 1.0)) + 0.5, 0.5, R, 1.0, 0.0};
        lo.lambda = 0.5 * boundary_low_lambda_bound(p, n, lo.alpha, lo.rho, lo.R);
        add(make_boundary_barrier(p, n, lo));
    }
    return out;
}

double transform_identity_deviation(const BarrierSpec& spec, const Region& region, std::size_t samples,
                                    std::uint64_t seed) {
    const SpaceTimeFunction u = spec.direct();
    const SpaceTimeFunction v = u.log_of();
    double worst = 0.0;
    for (const auto& pt : sample_points(region, samples, samples / 10, seed)) {
        const double value = u.value(pt.r, pt.t);
        // Skip u = 0 (eigen barrier at r = R) and points where u^deg is subnormal.
        const double weight = std::pow(value, spec.p.degree());
        if (!(weight > 1e-280) || !std::isfinite(weight)) continue;
        const double dev = log_transform_consistency(u, spec.p, spec.n, {pt});
        const double scale = gamma_p_terms(u, spec.p, spec.n, pt).magnitude +
                             weight * g_p_terms(v, spec.p, spec.n, pt).magnitude;
        if (scale > 0.0) worst = std::max(worst, dev / scale);
    }
    return worst;
}

ExperimentReport catalog_experiment(const Exponent& p, int n, const VerifyOptions& options) {
    const auto start = Clock::now();
    ExperimentReport rep;
    rep.name = "catalog";
    rep.p = p;
    rep.n = n;
    rep.inputs = {{"samples", static_cast<double>(options.samples)},
                  {"random_samples", static_cast<double>(options.random_samples)},
                  {"tolerance", options.tolerance},
                  {"seed", static_cast<double>(options.seed)}};
    Table table{"families", {"index", "min_residual", "max_residual", "scale", "transform_deviation"}, {}};
    double index = 0.0;
    for (const auto& entry : barrier_catalog(p, n)) {
        const ResidualReport r = verify_sign(entry.spec, entry.region, entry.spec.expected, options);
        const std::string name = to_string(entry.spec.family);
        rep.flags.emplace_back(name + ".verdict_" + to_string(r.verdict), r.matches_expected());
        const double dev = transform_identity_deviation(entry.spec, entry.region, 1000, options.seed);
        rep.quantities.push_back(
            make_quantity(name + ".transform_identity", dev, 0.0, 1e-8, Relation::AtMost, "log transform identity"));
        table.rows.push_back({index++, r.min_residual, r.max_residual, r.scale, dev});
    }
    rep.tables.push_back(std::move(table));
    rep.runtime_seconds = seconds_since(start);
    return rep;
}

}  // namespace trudlab
