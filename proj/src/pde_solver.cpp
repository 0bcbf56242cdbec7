#include "trudlab/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trudlab/errors.hpp"
#include "trudlab/operators.hpp"

namespace trudlab {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::LogImplicit: return "LogImplicit";
        case Scheme::DirectExplicit: return "DirectExplicit";
        case Scheme::DirectImplicit: return "DirectImplicit";
    }
    return "?";
}

Scheme parse_scheme(const std::string& text) {
    for (Scheme s : {Scheme::LogImplicit, Scheme::DirectExplicit, Scheme::DirectImplicit}) {
        if (text == to_string(s)) return s;
    }
    throw DomainError("unknown scheme: " + text);
}

namespace {

constexpr std::size_t kMaxNewton = 50;
constexpr int kMaxHalvingDepth = 12;
constexpr std::size_t kMaxExplicitSteps = 50'000'000;

/// Flux-form radial discretization. L_i = a+_i F(D+_i) - a-_i F(D-_i) with
/// F(q) = |q|^{p-2} q and finite-volume weights (face area over cell volume),
/// or F(q) = q^3/3 with a = 1/h for p = Infinity. The axis cell uses the
/// reflection u_{-1} = u_1.
struct Discrete {
    bool inf = false;
    double pv = 2.0;
    int n = 2;
    double h = 1.0;
    std::size_t N = 1;  // intervals; node N is the boundary
    std::vector<double> ap, am;

    Discrete(const Exponent& p, int dim, const RadialGrid& grid)
        : inf(p.is_infinite()), pv(inf ? 0.0 : p.value()), n(dim), h(grid.h()), N(grid.intervals),
          ap(N, 0.0), am(N, 0.0) {
        for (std::size_t i = 0; i < N; ++i) {
            if (inf) {
                ap[i] = (i == 0 ? 2.0 : 1.0) / h;
                am[i] = i == 0 ? 0.0 : 1.0 / h;
                continue;
            }
            if (i == 0) {
                ap[i] = 2.0 * n / h;
                continue;
            }
            const double rp = grid.r(i) + 0.5 * h, rm = grid.r(i) - 0.5 * h;
            const double volume = (std::pow(rp, n) - std::pow(rm, n)) / n;
            ap[i] = std::pow(rp, n - 1) / volume;
            am[i] = std::pow(rm, n - 1) / volume;
        }
    }

    double F(double q) const {
        if (inf) return q * q * q / 3.0;
        if (pv == 2.0 || q == 0.0) return q;
        return std::copysign(std::pow(std::abs(q), pv - 1.0), q);
    }
    double dF(double q) const {
        if (inf) return q * q;
        if (pv == 2.0) return 1.0;
        return q == 0.0 ? 0.0 : (pv - 1.0) * std::pow(std::abs(q), pv - 2.0);
    }
    /// |q|^p, or q^4 for Infinity.
    double H(double q) const {
        if (inf) return q * q * q * q;
        return std::pow(std::abs(q), pv);
    }
    double dH(double q) const {
        if (inf) return 4.0 * q * q * q;
        if (q == 0.0) return 0.0;
        return pv * std::copysign(std::pow(std::abs(q), pv - 1.0), q);
    }
    /// Coefficient of |Dv|^p in G_p and of v_t.
    double gradient_coefficient() const { return inf ? 1.0 : pv - 1.0; }
    double log_time_coefficient() const { return inf ? 3.0 : pv - 1.0; }
    /// b(u) = |u|^{p-2} u, or u^3.
    double b(double u) const {
        if (inf) return u * u * u;
        if (pv == 2.0) return u;
        return std::copysign(std::pow(std::abs(u), pv - 1.0), u);
    }
    double db(double u) const {
        if (inf) return 3.0 * u * u;
        if (pv == 2.0) return 1.0;
        return (pv - 1.0) * std::pow(std::abs(u), pv - 2.0);
    }
    /// Frozen-coefficient weight of u_t in the direct form.
    double time_weight(double u) const { return db(u); }
    double axis_factor() const { return inf ? 1.0 : static_cast<double>(n); }

    double L(const std::vector<double>& x, std::size_t i) const {
        const double dp = (x[i + 1] - x[i]) / h;
        if (i == 0) return ap[0] * F(dp);
        const double dm = (x[i] - x[i - 1]) / h;
        return ap[i] * F(dp) - am[i] * F(dm);
    }
};

struct Tridiagonal {
    std::vector<double> lower, diag, upper;
    explicit Tridiagonal(std::size_t m) : lower(m, 0.0), diag(m, 0.0), upper(m, 0.0) {}
};

/// Thomas algorithm; rhs is overwritten with the solution.
bool thomas(Tridiagonal t, std::vector<double>& rhs) {
    const std::size_t m = rhs.size();
    for (std::size_t i = 1; i < m; ++i) {
        if (t.diag[i - 1] == 0.0) return false;
        const double w = t.lower[i] / t.diag[i - 1];
        t.diag[i] -= w * t.upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (t.diag[m - 1] == 0.0) return false;
    rhs[m - 1] /= t.diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) rhs[i] = (rhs[i] - t.upper[i] * rhs[i + 1]) / t.diag[i];
    for (double v : rhs) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

/// One implicit system per step. x has N+1 entries with x[N] held fixed.
class ImplicitStep {
public:
    ImplicitStep(const Discrete& d, bool log_form, double reg) : d_(d), log_(log_form), reg_(reg) {}

    void residual(const std::vector<double>& x, const std::vector<double>& old, double dt,
                  std::vector<double>& out) const {
        for (std::size_t i = 0; i < d_.N; ++i) {
            double phi = d_.L(x, i);
            if (log_) {
                const double dp = (x[i + 1] - x[i]) / d_.h;
                const double ham = i == 0 ? d_.H(dp) : 0.5 * (d_.H(dp) + d_.H((x[i] - x[i - 1]) / d_.h));
                phi += d_.gradient_coefficient() * ham - d_.log_time_coefficient() * (x[i] - old[i]) / dt;
            } else {
                phi -= (d_.b(x[i]) - d_.b(old[i])) / dt;
            }
            out[i] = phi;
        }
    }

    void jacobian(const std::vector<double>& x, double dt, Tridiagonal& J) const {
        const double h = d_.h;
        for (std::size_t i = 0; i < d_.N; ++i) {
            const double dp = (x[i + 1] - x[i]) / h;
            const double fp = d_.ap[i] * d_.dF(dp) / h;
            double lo = 0.0, di = -fp, up = fp;
            if (i > 0) {
                const double dm = (x[i] - x[i - 1]) / h;
                const double fm = d_.am[i] * d_.dF(dm) / h;
                lo += fm;
                di -= fm;
                if (log_) {
                    const double c = 0.5 * d_.gradient_coefficient() / h;
                    up += c * d_.dH(dp);
                    di += c * (d_.dH(dm) - d_.dH(dp));
                    lo -= c * d_.dH(dm);
                }
            } else if (log_) {
                const double c = d_.gradient_coefficient() / h;
                up += c * d_.dH(dp);
                di -= c * d_.dH(dp);
            }
            if (log_) {
                di -= d_.log_time_coefficient() / dt;
            } else {
                di -= std::max(d_.db(x[i]), reg_) / dt;
            }
            J.lower[i] = lo;
            J.diag[i] = di;
            J.upper[i] = i + 1 < d_.N ? up : 0.0;
        }
    }

    /// Damped Newton; x holds the initial guess and receives the solution.
    /// The step residual is |Phi| * scale, with scale turning Phi into unknown units.
    bool solve(std::vector<double>& x, const std::vector<double>& old, double dt, double scale,
               double tol, std::size_t& iterations) const {
        const std::size_t N = d_.N;
        std::vector<double> phi(N), trial_phi(N), delta(N), trial(x);
        Tridiagonal J(N);
        residual(x, old, dt, phi);
        double norm = max_abs(phi) * scale;
        for (std::size_t it = 0; it < kMaxNewton; ++it) {
            if (norm < tol) return true;
            jacobian(x, dt, J);
            for (std::size_t i = 0; i < N; ++i) delta[i] = -phi[i];
            if (!thomas(J, delta)) return false;
            ++iterations;
            double damping = 1.0;
            bool accepted = false;
            for (int k = 0; k < 12; ++k, damping *= 0.5) {
                for (std::size_t i = 0; i < N; ++i) trial[i] = x[i] + damping * delta[i];
                residual(trial, old, dt, trial_phi);
                const double trial_norm = max_abs(trial_phi) * scale;
                if (std::isfinite(trial_norm) && trial_norm < norm) {
                    std::copy(trial.begin(), trial.begin() + static_cast<long>(N), x.begin());
                    phi.swap(trial_phi);
                    norm = trial_norm;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) return norm < tol;
        }
        return norm < tol;
    }

private:
    static double max_abs(const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }

    const Discrete& d_;
    bool log_;
    double reg_;
};

struct CoreResult {
    std::vector<std::vector<double>> values;
    std::size_t steps = 0;
    std::size_t newton = 0;
    std::size_t halvings = 0;
};

double data_sup(const SolverConfig& c, const RadialGrid& grid, const std::vector<double>& times) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.nodes(); ++i) s = std::max(s, std::abs(c.initial(grid.r(i))));
    for (double t : times) s = std::max(s, std::abs(c.boundary(t)));
    return s;
}

CoreResult run_implicit(const SolverConfig& c, const RadialGrid& grid, const std::vector<double>& times) {
    const bool log_form = c.scheme == Scheme::LogImplicit;
    const Discrete d(c.p, c.n, grid);
    const double eps_reg = 1e-12 * std::max(data_sup(c, grid, times), 1e-300);
    const ImplicitStep stepper(d, log_form, log_form ? 0.0 : d.db(eps_reg));
    const std::size_t N = grid.intervals;
    CoreResult out;

    auto to_unknown = [&](double u) { return log_form ? std::log(u) : u; };
    std::vector<double> x(N + 1);
    for (std::size_t i = 0; i <= N; ++i) x[i] = to_unknown(c.initial(grid.r(i)));
    x[N] = to_unknown(c.boundary(0.0));

    auto store = [&](const std::vector<double>& state) {
        std::vector<double> u(state);
        if (log_form) {
            for (double& v : u) v = std::exp(v);
        }
        out.values.push_back(std::move(u));
    };
    store(x);

    // Advances x from t0 to t1, halving the step when Newton fails.
    std::function<bool(std::vector<double>&, double, double, int)> advance =
        [&](std::vector<double>& state, double t0, double t1, int depth) -> bool {
        const double dt = t1 - t0;
        std::vector<double> old(state);
        std::vector<double> trial(state);
        trial[N] = to_unknown(c.boundary(t1));
        double scale = dt / d.log_time_coefficient();
        if (!log_form) {
            double B = std::abs(d.b(trial[N]));
            for (double v : old) B = std::max(B, std::abs(d.b(v)));
            scale = dt / std::max(B, 1e-300);
        }
        ++out.steps;
        if (stepper.solve(trial, old, dt, scale, c.tolerance, out.newton)) {
            state.swap(trial);
            return true;
        }
        if (depth >= kMaxHalvingDepth) return false;
        ++out.halvings;
        const double tm = 0.5 * (t0 + t1);
        return advance(state, t0, tm, depth + 1) && advance(state, tm, t1, depth + 1);
    };

    for (std::size_t j = 1; j < times.size(); ++j) {
        if (!advance(x, times[j - 1], times[j], 0)) {
            throw SolverError("inner iteration diverged at time level " + std::to_string(j) +
                              " (t = " + std::to_string(times[j]) + ")");
        }
        for (double v : x) {
            if (!std::isfinite(v)) {
                throw SolverError("non-finite value at time level " + std::to_string(j));
            }
        }
        store(x);
    }
    return out;
}

CoreResult run_explicit(const SolverConfig& c, const RadialGrid& grid, const std::vector<double>& times,
                        double cfl) {
    const Discrete d(c.p, c.n, grid);
    const std::size_t N = grid.intervals;
    const double h = grid.h();
    const double eps_reg = 1e-12 * std::max(data_sup(c, grid, times), 1e-300);
    CoreResult out;
    std::vector<double> u(N + 1), next(N + 1), rate(N);
    for (std::size_t i = 0; i <= N; ++i) u[i] = c.initial(grid.r(i));
    u[N] = c.boundary(0.0);
    out.values.push_back(u);

    double t = 0.0;
    for (std::size_t j = 1; j < times.size(); ++j) {
        while (t < times[j]) {
            double w_min = std::numeric_limits<double>::infinity();
            double k_max = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double w = d.time_weight(std::max(u[i], eps_reg));
                w_min = std::min(w_min, w);
                rate[i] = d.L(u, i) / w;
                k_max = std::max(k_max, d.dF((u[i + 1] - u[i]) / h));
            }
            double dt = cfl * h * h * w_min / (d.axis_factor() * k_max + 1e-300);
            dt = std::min(dt, times[j] - t);
            double sup = 0.0;
            for (double v : u) sup = std::max(sup, std::abs(v));
            // Halve on spikes: a forward Euler update may move any node by at most a quarter of sup|u|.
            for (int k = 0;; ++k) {
                bool ok = true;
                for (std::size_t i = 0; i < N; ++i) {
                    next[i] = u[i] + dt * rate[i];
                    if (!std::isfinite(next[i]) || std::abs(next[i] - u[i]) > 0.25 * sup + 1e-300) ok = false;
                }
                if (ok) break;
                if (k >= kMaxHalvingDepth) {
                    throw SolverError("explicit step collapsed at time level " + std::to_string(j));
                }
                dt *= 0.5;
                ++out.halvings;
            }
            const double t_new = dt >= times[j] - t ? times[j] : t + dt;
            next[N] = c.boundary(t_new);
            u.swap(next);
            t = t_new;
            if (++out.steps > kMaxExplicitSteps) {
                throw SolverError("explicit step budget exhausted before time level " + std::to_string(j));
            }
        }
        out.values.push_back(u);
    }
    return out;
}

CoreResult run_core(const SolverConfig& c, const RadialGrid& grid, const std::vector<double>& times,
                    double cfl) {
    if (c.scheme == Scheme::DirectExplicit) return run_explicit(c, grid, times, cfl);
    return run_implicit(c, grid, times);
}

bool needs_axis_exclusion(const Exponent& p) { return p.is_infinite() || p.value() > 2.0; }

}  // namespace

void validate(const SolverConfig& c) {
    if (c.n < 2) throw DomainError("dimension n must be >= 2");
    if (!(c.R > 0.0)) throw DomainError("R must be positive");
    if (!(c.t_end > 0.0)) throw DomainError("t_end must be positive");
    if (c.intervals < 2) throw GridError("need at least 3 radial nodes");
    if (c.dt && !(*c.dt > 0.0)) throw DomainError("dt must be positive");
    if (!(c.tolerance > 0.0)) throw DomainError("tolerance must be positive");
    if (!(c.cfl > 0.0 && c.cfl < 1.0)) throw DomainError("cfl must lie in (0, 1)");
    if (!c.initial || !c.boundary) throw DomainError("initial and boundary data are required");
    if (!c.dt && !(c.adaptive.growth >= 1.0)) throw DomainError("adaptive growth must be >= 1");
    const double f_R = c.initial(c.R);
    const double g0 = c.boundary(0.0);
    if (std::abs(f_R - g0) > 1e-8 * std::max(1.0, std::abs(g0))) {
        throw DomainError("incompatible data: f(R) = " + std::to_string(f_R) + " but g(0) = " +
                          std::to_string(g0));
    }
    const RadialGrid grid{c.R, c.intervals};
    const auto times = time_grid(c);
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
        const double f = c.initial(grid.r(i));
        if (!std::isfinite(f)) throw DomainError("initial data not finite");
        if (c.scheme == Scheme::LogImplicit ? !(f > 0.0) : f < 0.0) {
            throw DomainError("initial data violates the sign requirement of " + to_string(c.scheme) +
                              " at r = " + std::to_string(grid.r(i)));
        }
    }
    for (double t : times) {
        const double g = c.boundary(t);
        if (!std::isfinite(g)) throw DomainError("boundary data not finite");
        if (c.scheme == Scheme::LogImplicit ? !(g > 0.0) : g < 0.0) {
            throw DomainError("boundary data violates the sign requirement of " + to_string(c.scheme) +
                              " at t = " + std::to_string(t));
        }
    }
}

std::vector<double> time_grid(const SolverConfig& c) {
    std::vector<double> times{0.0};
    if (c.dt) {
        const double dt = *c.dt;
        const auto count = static_cast<std::size_t>(std::ceil(c.t_end / dt - 1e-9));
        for (std::size_t j = 1; j < count; ++j) times.push_back(static_cast<double>(j) * dt);
        times.push_back(c.t_end);
        return times;
    }
    if (c.scheme == Scheme::DirectExplicit) {
        const std::size_t m = std::max<std::size_t>(1, c.adaptive.record_intervals);
        for (std::size_t j = 1; j < m; ++j) times.push_back(c.t_end * static_cast<double>(j) / m);
        times.push_back(c.t_end);
        return times;
    }
    const double dt_max = c.adaptive.dt_max > 0.0 ? c.adaptive.dt_max : c.t_end / 100.0;
    double dt = c.adaptive.dt_initial > 0.0 ? c.adaptive.dt_initial : 1e-4 * c.t_end;
    double t = 0.0;
    while (t + dt < c.t_end * (1.0 - 1e-12)) {
        t += dt;
        times.push_back(t);
        dt = std::min(dt * c.adaptive.growth, dt_max);
    }
    times.push_back(c.t_end);
    return times;
}

SolverRun solve_gamma_p_radial(const SolverConfig& config) {
    validate(config);
    const RadialGrid grid{config.R, config.intervals};
    const auto times = time_grid(config);
    const CoreResult core = run_core(config, grid, times, config.cfl);

    SolverRun run;
    run.config = config;
    run.field.grid = grid;
    run.field.times = times;
    run.field.values = core.values;
    run.field.p = config.p;
    run.field.n = config.n;
    run.field.scheme = to_string(config.scheme);
    run.steps = core.steps;
    run.newton_iterations = core.newton;
    run.step_halvings = core.halvings;
    const double S = data_sup(config, grid, times);
    run.epsilon_reg = 1e-12 * S;

    run.audit_r_min = needs_axis_exclusion(config.p) ? 0.1 * config.R : 0.0;
    run.audit_t_min = std::min(0.1 * config.t_end, times[times.size() - 1]);
    if (times.size() >= 2) {
        const auto audit = fd_residual_on_field(run.field, config.p, config.n);
        run.audit_residual = audit.max_abs(run.audit_r_min, run.audit_t_min);
        run.residual_bound = std::numeric_limits<double>::infinity();
        if (config.estimate_consistency) {
            if (config.intervals % 2 != 0) {
                throw GridError("consistency estimate needs an even number of intervals");
            }
            // Half resolution in space on the same time levels.
            const RadialGrid coarse_grid{config.R, config.intervals / 2};
            const CoreResult cs = run_core(config, coarse_grid, times, config.cfl);
            // Double step in time on the same nodes (explicit: double the CFL fraction).
            std::vector<std::size_t> kept;
            std::vector<double> coarse_times;
            const bool explicit_scheme = config.scheme == Scheme::DirectExplicit;
            for (std::size_t j = 0; j < times.size(); ++j) {
                if (explicit_scheme || j % 2 == 0 || j + 1 == times.size()) {
                    kept.push_back(j);
                    coarse_times.push_back(times[j]);
                }
            }
            const CoreResult ct =
                run_core(config, grid, coarse_times, explicit_scheme ? std::min(0.9, 2.0 * config.cfl) : config.cfl);

            double e_h = 0.0, e_t = 0.0;
            for (std::size_t j = 0; j < times.size(); ++j) {
                for (std::size_t i = 0; i <= config.intervals; i += 2) {
                    e_h = std::max(e_h, std::abs(core.values[j][i] - cs.values[j][i / 2]));
                }
            }
            for (std::size_t k = 0; k < kept.size(); ++k) {
                for (std::size_t i = 0; i <= config.intervals; ++i) {
                    e_t = std::max(e_t, std::abs(core.values[kept[k]][i] - ct.values[k][i]));
                }
            }
            // Richardson: second order in h, first order in dt; safety factor 2.
            run.space_gap = e_h;
            run.time_gap = e_t;
            run.consistency_bound = 2.0 * (e_h / 3.0 + e_t) + config.tolerance * S;

            SpaceTimeField fs = run.field;
            fs.grid = coarse_grid;
            fs.values = cs.values;
            SpaceTimeField ft = run.field;
            ft.times = coarse_times;
            ft.values = ct.values;
            const double a_s = fd_residual_on_field(fs, config.p, config.n).max_abs(run.audit_r_min, run.audit_t_min);
            double a_t = 0.0;
            if (coarse_times.size() >= 2) {
                a_t = fd_residual_on_field(ft, config.p, config.n).max_abs(run.audit_r_min, run.audit_t_min);
            }
            run.residual_bound =
                1.25 * std::max(a_s, a_t) + config.tolerance * audit.max_magnitude(run.audit_r_min, run.audit_t_min);
        } else {
            run.consistency_bound = config.tolerance * S;
        }
    }
    return run;
}

double measure_decay_rate(const SpaceTimeField& field, double t_a, double t_b) {
    if (!(t_b > t_a)) throw DomainError("decay window must have t_b > t_a");
    if (field.times.empty() || t_b > field.times.back() * (1.0 + 1e-12)) {
        throw DomainError("decay window extends past the run");
    }
    std::vector<double> ts, ys;
    double last_usable = field.times.front();
    for (std::size_t j = 0; j < field.levels(); ++j) {
        const double t = field.times[j];
        const double sup = field.sup_at(j);
        if (sup > 0.0) last_usable = t;
        if (t < t_a || t > t_b) continue;
        if (!(sup > 0.0)) {
            throw SolverError("sup u vanished on the window; last usable time " + std::to_string(last_usable));
        }
        ts.push_back(t);
        ys.push_back(std::log(sup));
    }
    if (ts.size() < 2) throw DomainError("decay window holds fewer than two time levels");
    const double m = static_cast<double>(ts.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        st += ts[k];
        sy += ys[k];
    }
    const double tm = st / m, ym = sy / m;
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        num += (ts[k] - tm) * (ys[k] - ym);
        den += (ts[k] - tm) * (ts[k] - tm);
    }
    return num / den;
}

double comparison_check(const SpaceTimeField& a, const SpaceTimeField& b) {
    if (a.grid.intervals != b.grid.intervals || a.grid.R != b.grid.R || a.times != b.times) {
        throw GridError("comparison_check needs identical grids and time levels");
    }
    const std::size_t N = a.grid.intervals;
    double boundary = -std::numeric_limits<double>::infinity();
    double interior = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < a.levels(); ++j) {
        for (std::size_t i = 0; i <= N; ++i) {
            const double bv = b.values[j][i];
            if (!(bv > 0.0)) throw DomainError("comparison_check needs b > 0");
            const double ratio = a.values[j][i] / bv;
            if (j == 0 || i == N) boundary = std::max(boundary, ratio);
            else interior = std::max(interior, ratio);
        }
    }
    if (a.levels() < 2) return 0.0;
    return std::max(0.0, interior - boundary);
}

MaxPrincipleReport max_principle_check(const SpaceTimeField& field) {
    const std::size_t N = field.grid.intervals;
    double b_sup = -std::numeric_limits<double>::infinity(), b_inf = std::numeric_limits<double>::infinity();
    double i_sup = -std::numeric_limits<double>::infinity(), i_inf = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < field.levels(); ++j) {
        for (std::size_t i = 0; i <= N; ++i) {
            const double v = field.values[j][i];
            if (j == 0 || i == N) {
                b_sup = std::max(b_sup, v);
                b_inf = std::min(b_inf, v);
            } else {
                i_sup = std::max(i_sup, v);
                i_inf = std::min(i_inf, v);
            }
        }
    }
    MaxPrincipleReport rep;
    if (field.levels() < 2) return rep;
    rep.sup_violation = std::max(0.0, i_sup - b_sup);
    rep.inf_violation = std::max(0.0, b_inf - i_inf);
    return rep;
}

}  // namespace trudlab
