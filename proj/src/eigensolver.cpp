#include "trudlab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <string>

#include "trudlab/barriers.hpp"
#include "trudlab/errors.hpp"
#include "trudlab/ode.hpp"

namespace trudlab {

namespace {

/// sign(w)|w|^{1/(p-1)}: psi' recovered from the flux.
double flux_inverse(double w, double pv) {
    if (pv == 2.0 || w == 0.0) return w;
    return std::copysign(std::pow(std::abs(w), 1.0 / (pv - 1.0)), w);
}

/// |q|^{p-2} q.
double flux_of(double q, double pv) {
    if (pv == 2.0 || q == 0.0) return q;
    return std::copysign(std::pow(std::abs(q), pv - 1.0), q);
}

double signed_power(double x, double pv) { return flux_of(x, pv); }

void require_finite(const Exponent& p) {
    if (p.is_infinite()) throw Unsupported("p=∞ eigenvalue out of scope");
}

double hermite(double y0, double d0, double y1, double d1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
}

}  // namespace

RadialProfile RadialSamples::profile() const {
    struct Data {
        double pv, lambda, h;
        int n;
        std::vector<double> psi, flux, dpsi, dflux;
    };
    auto d = std::make_shared<Data>();
    d->pv = p.value();
    d->lambda = lambda;
    d->h = grid.h();
    d->n = n;
    d->psi = psi;
    d->flux = flux;
    const std::size_t count = psi.size();
    if (count < 2) throw GridError("profile needs at least two samples");
    d->dpsi.resize(count);
    d->dflux.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = grid.r(i);
        d->dpsi[i] = flux_inverse(flux[i], d->pv);
        const double force = -lambda * signed_power(psi[i], d->pv);
        d->dflux[i] = i == 0 ? force / n : force - (n - 1) * flux[i] / r;
    }
    auto locate = [d](double r, std::size_t& i, double& s) {
        const std::size_t last = d->psi.size() - 1;
        i = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, r / d->h)), last - 1);
        s = (r - static_cast<double>(i) * d->h) / d->h;
    };
    auto value = [d, locate](double r) {
        std::size_t i;
        double s;
        locate(r, i, s);
        return hermite(d->psi[i], d->dpsi[i], d->psi[i + 1], d->dpsi[i + 1], d->h, s);
    };
    auto flux_at = [d, locate](double r) {
        std::size_t i;
        double s;
        locate(r, i, s);
        return hermite(d->flux[i], d->dflux[i], d->flux[i + 1], d->dflux[i + 1], d->h, s);
    };
    RadialProfile out;
    out.value = value;
    out.d1 = [d, flux_at](double r) { return flux_inverse(flux_at(r), d->pv); };
    out.d2 = [d, value, flux_at](double r) {
        if (r == 0.0) return d->pv == 2.0 ? -d->lambda * d->psi[0] / d->n : 0.0;
        const double w = flux_at(r);
        const double q = flux_inverse(w, d->pv);
        if (q == 0.0) return 0.0;
        const double dw = -d->lambda * signed_power(value(r), d->pv) - (d->n - 1) * w / r;
        const double weight = d->pv == 2.0 ? 1.0 : std::pow(std::abs(q), d->pv - 2.0);
        return dw / ((d->pv - 1.0) * weight);
    };
    out.lo = 0.0;
    out.hi = grid.r(count - 1);
    if (d->pv > 2.0) {
        const double beta = p.beta();
        const double c = -std::pow(lambda * std::pow(psi[0], d->pv - 1.0) / n, 1.0 / (d->pv - 1.0)) / beta;
        out.origin = OriginRule::power(beta, c);
    }
    return out;
}

ShootResult shoot_radial(const Exponent& p, int n, double R, double lambda, double psi0,
                         std::size_t intervals, bool stop_at_zero, double start_fraction) {
    require_finite(p);
    if (!(R > 0.0)) throw DomainError("R must be positive");
    if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
    if (!(psi0 > 0.0)) throw DomainError("psi0 must be positive");
    if (intervals < 2) throw GridError("shooting needs at least 2 intervals");
    const double pv = p.value();
    const RadialGrid grid{R, intervals};
    const double h = grid.h();
    double r0 = start_fraction * R;
    if (!(r0 < 0.5 * h)) r0 = 1e-2 * h;
    // Leading terms: w = -lambda psi0^{p-1} r / n, psi = psi0 - (lambda psi0^{p-1}/n)^{1/(p-1)} r^beta / beta.
    const double force0 = lambda * std::pow(psi0, pv - 1.0);
    const double beta = p.beta();
    const State2 y0{psi0 - std::pow(force0 / n, 1.0 / (pv - 1.0)) * std::pow(r0, beta) / beta,
                    -force0 * r0 / n};
    const Rhs2 rhs = [pv, n, lambda](double r, const State2& y) -> State2 {
        return {flux_inverse(y[1], pv), -lambda * signed_power(y[0], pv) - (n - 1) * y[1] / r};
    };
    std::vector<double> outputs(intervals);
    for (std::size_t i = 1; i <= intervals; ++i) outputs[i - 1] = grid.r(i);
    OdeOptions opt;
    opt.atol = 1e-14 * psi0;
    const OdeTrace trace = integrate_dopri(rhs, r0, y0, outputs, stop_at_zero, opt);
    ShootResult out;
    out.samples.p = p;
    out.samples.n = n;
    out.samples.lambda = lambda;
    out.samples.grid = grid;
    out.samples.psi.reserve(intervals + 1);
    out.samples.psi.push_back(psi0);
    out.samples.flux.push_back(0.0);
    for (const auto& s : trace.states) {
        out.samples.psi.push_back(s[0]);
        out.samples.flux.push_back(s[1]);
    }
    out.zero = trace.zero;
    out.steps = trace.steps;
    return out;
}

double flux_residual(const RadialSamples& s, double r_min) {
    const double pv = s.p.value();
    const double h = s.grid.h();
    const int n = s.n;
    const auto& u = s.psi;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double r = s.grid.r(i);
        if (r < r_min) continue;
        double L = 0.0;
        if (i == 0) {
            L = 2.0 * n * flux_of((u[1] - u[0]) / h, pv) / h;
        } else {
            // Finite-volume weights: face areas over the cell volume, exact on quadratics.
            const double rp = r + 0.5 * h, rm = r - 0.5 * h;
            const double volume = (std::pow(rp, n) - std::pow(rm, n)) / n;
            L = (std::pow(rp, n - 1) * flux_of((u[i + 1] - u[i]) / h, pv) -
                 std::pow(rm, n - 1) * flux_of((u[i] - u[i - 1]) / h, pv)) / volume;
        }
        worst = std::max(worst, std::abs(L + s.lambda * signed_power(u[i], pv)));
    }
    return s.lambda > 0.0 ? worst / s.lambda : worst;
}

EigenResult first_eigenvalue(const Exponent& p, int n, double R, const EigenOptions& options) {
    require_finite(p);
    if (!(options.tol > 0.0)) throw DomainError("tolerance must be positive");
    const double barrier = make_eigen_barrier(p, n, R).constant("lambda");
    auto too_large = [&](double lambda) {
        return shoot_radial(p, n, R, lambda, 1.0, options.intervals, true, options.start_fraction)
            .zero.has_value();
    };
    double lo = barrier / 10.0;
    double hi = barrier;
    std::size_t expansions = 0;
    while (!too_large(hi)) {
        if (++expansions > options.max_expansions) {
            throw SolverError("no eigenvalue bracket below " + std::to_string(hi));
        }
        lo = hi;
        hi *= 2.0;
    }
    expansions = 0;
    while (too_large(lo)) {
        if (++expansions > options.max_expansions) {
            throw SolverError("no eigenvalue bracket above " + std::to_string(lo));
        }
        hi = lo;
        lo *= 0.5;
    }
    EigenResult res;
    while (hi - lo > options.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (too_large(mid) ? hi : lo) = mid;
        ++res.bisection_iterations;
    }
    res.bracket_low = lo;
    res.bracket_high = hi;
    res.lambda = 0.5 * (lo + hi);
    res.eigenfunction =
        shoot_radial(p, n, R, res.lambda, 1.0, options.intervals, false, options.start_fraction).samples;
    res.residual_norm = flux_residual(res.eigenfunction, p.value() > 2.0 ? 0.1 * R : 0.0);
    return res;
}

ScalingResult scaling_check(const Exponent& p, int n, const std::vector<double>& radii,
                            const EigenOptions& options, unsigned jobs) {
    require_finite(p);
    if (radii.empty()) throw DomainError("scaling check needs at least one radius");
    ScalingResult out;
    out.radii = radii;
    out.lambdas.resize(radii.size());
    if (jobs > 1) {
        std::vector<std::future<double>> futures;
        for (double R : radii) {
            futures.push_back(std::async(std::launch::async, [=] {
                return first_eigenvalue(p, n, R, options).lambda;
            }));
        }
        for (std::size_t i = 0; i < radii.size(); ++i) out.lambdas[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < radii.size(); ++i) {
            out.lambdas[i] = first_eigenvalue(p, n, radii[i], options).lambda;
        }
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        out.products.push_back(out.lambdas[i] * std::pow(radii[i], p.value()));
    }
    std::vector<double> sorted = out.products;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    out.median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    for (double v : out.products) out.spread = std::max(out.spread, std::abs(v - out.median) / out.median);
    return out;
}

BvpResult solve_delta_bvp(const Exponent& p, int n, double R, double lambda, double delta,
                          std::size_t intervals) {
    require_finite(p);
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
    BvpResult out;
    out.lambda = lambda;
    out.delta = delta;
    ShootResult shot = shoot_radial(p, n, R, lambda, 1.0, intervals, true);
    if (shot.zero) {
        throw SolverError("lambda = " + std::to_string(lambda) +
                          " is at or above the first eigenvalue: no bounded positive solution "
                          "(M_lambda blows up as lambda approaches lambda_R)");
    }
    // Delta_p is (p-1)-homogeneous, so M psi_1 solves the problem with psi(0) = M.
    const double end = shot.samples.psi.back();
    const double M = delta / end;
    const double flux_scale = std::pow(M, p.value() - 1.0);
    for (double& v : shot.samples.psi) v *= M;
    for (double& v : shot.samples.flux) v *= flux_scale;
    shot.samples.psi.back() = delta;
    out.M_lambda = shot.samples.psi.front();
    out.solution = std::move(shot.samples);
    return out;
}

double blowup_lower_bound(const Exponent& p, double lambda, double lambda_R, double delta) {
    const double e = 1.0 / p.degree();
    const double a = std::pow(lambda_R, e);
    const double b = std::pow(lambda, e);
    return delta * a / (a - b);
}

EpsilonGain epsilon_gain(const BvpResult& bvp, double t, double tolerance) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("epsilon_gain needs t in (0, 1)");
    const RadialSamples& s = bvp.solution;
    const double pv = s.p.value();
    const int n = s.n;
    const double lambda = bvp.lambda;
    const auto& u = s.psi;
    const auto& w = s.flux;
    const std::size_t N = u.size() - 1;
    if (N < 4) throw GridError("epsilon_gain needs at least 5 nodes");
    const double h = s.grid.h();
    const double m = u.back();
    const double M = u.front();
    EpsilonGain g;
    g.epsilon = lambda * (std::pow(1.0 / (1.0 - t * m / M), pv - 1.0) - 1.0);
    g.scale = lambda * std::pow(M, pv - 1.0);
    // w is odd in r, so w_{-k} = -w_k extends the stencil through the axis.
    auto wi = [&](long k) { return k < 0 ? -w[static_cast<std::size_t>(-k)] : w[static_cast<std::size_t>(k)]; };
    g.worst_residual = -1e300;
    for (std::size_t i = 0; i <= N; ++i) {
        const long k = static_cast<long>(i);
        double dw = 0.0;
        if (i == 0) {
            // w is only C^{1,1/(p-1)} at the axis for p > 2; use the series slope there.
            dw = -lambda * signed_power(u[0], pv) / n;
        } else if (i + 2 <= N) {
            dw = (-wi(k + 2) + 8.0 * wi(k + 1) - 8.0 * wi(k - 1) + wi(k - 2)) / (12.0 * h);
        } else if (i + 1 <= N) {
            dw = (wi(k + 1) - wi(k - 1)) / (2.0 * h);
        } else {
            dw = (3.0 * w[N] - 4.0 * w[N - 1] + w[N - 2]) / (2.0 * h);
        }
        const double lap = i == 0 ? n * dw : dw + (n - 1) * w[i] / s.grid.r(i);
        const double v = u[i] - t * m;
        const double res = lap + (lambda + g.epsilon) * signed_power(v, pv);
        g.worst_residual = std::max(g.worst_residual, res);
    }
    g.verified = g.worst_residual <= tolerance * g.scale;
    if (!g.verified) {
        throw SolverError("epsilon gain check failed: worst residual " + std::to_string(g.worst_residual) +
                          " exceeds " + std::to_string(tolerance * g.scale));
    }
    return g;
}

QuotientCheck quotient_comparison_check(const std::vector<double>& u, const std::vector<double>& v,
                                        double lambda, double lambda_bar, double tolerance) {
    if (u.size() != v.size() || u.size() < 2) throw GridError("quotient check needs matching samples");
    if (lambda > lambda_bar) throw DomainError("quotient comparison needs lambda <= lambda_bar");
    QuotientCheck q;
    q.interior_max = -1e300;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(v[i] > 0.0)) throw DomainError("quotient comparison needs v > 0");
        const double ratio = u[i] / v[i];
        if (i + 1 < u.size()) q.interior_max = std::max(q.interior_max, ratio);
        else q.boundary_value = ratio;
    }
    q.pass = q.interior_max <= q.boundary_value + tolerance;
    return q;
}

}  // namespace trudlab
