#include "trudlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trudlab/errors.hpp"

namespace trudlab {

namespace {

thread_local std::uint64_t g_finite_calls = 0;
thread_local std::uint64_t g_zero_base = 0;

/// |q|^e with the convention |0|^0 = 1 and |0|^e = 0 for e > 0.
double abs_pow(double q, double e) {
    if (e == 0.0) return 1.0;
    if (q == 0.0) return 0.0;
    return std::pow(std::abs(q), e);
}

void check_domain(const RadialProfile& profile, double r) {
    const double slack = 1e-12 * std::max(1.0, std::abs(profile.hi));
    if (!(r >= profile.lo - slack) || !(r <= profile.hi + slack)) {
        throw DomainError("r = " + std::to_string(r) + " outside [" + std::to_string(profile.lo) +
                          ", " + std::to_string(profile.hi) + "]");
    }
}

/// Finite-p radial Delta_p from derivative values at r > 0.
ResidualTerms finite_terms(double p, int n, double r, double q, double d2) {
    ++g_finite_calls;
    if (p > 2.0 && q == 0.0) return {0.0, 0.0};
    const double w = abs_pow(q, p - 2.0);
    const double radial = (n - 1) * q / r;
    return {w * ((p - 1.0) * d2 + radial), w * ((p - 1.0) * std::abs(d2) + std::abs(radial))};
}

ResidualTerms infinity_terms(double q, double d2) {
    const double v = q * q * d2;
    return {v, std::abs(v)};
}

/// Operator value at r = 0 from the origin rule.
ResidualTerms origin_terms(const RadialProfile& profile, const Exponent& p, int n) {
    const OriginRule& rule = profile.origin;
    const bool power = rule.kind == OriginRule::Kind::Power && rule.coefficient != 0.0;
    if (!power) {
        if (p.is_infinite()) return {0.0, 0.0};
        ++g_finite_calls;
        if (p.value() > 2.0) return {0.0, 0.0};
        const double v = n * profile.d2(0.0);
        return {v, std::abs(v)};
    }
    const double g = rule.gamma;
    const double c = rule.coefficient;
    double exponent = 0.0;
    double value = 0.0;
    if (p.is_infinite()) {
        exponent = 3.0 * g - 4.0;
        value = c * c * c * g * g * g * (g - 1.0);
    } else {
        ++g_finite_calls;
        const double pv = p.value();
        exponent = (g - 1.0) * (pv - 1.0) - 1.0;
        value = c * abs_pow(c, pv - 2.0) * std::pow(g, pv - 1.0) * ((pv - 1.0) * (g - 1.0) + n - 1);
    }
    if (std::abs(exponent) < 1e-12) return {value, std::abs(value)};
    if (exponent > 0.0) return {0.0, 0.0};
    throw DomainError("operator is unbounded at r = 0 for power r^" + std::to_string(g));
}

ResidualTerms lap_terms(const RadialProfile& profile, const Exponent& p, int n, double r) {
    check_domain(profile, r);
    if (r == 0.0) return origin_terms(profile, p, n);
    const double q = profile.d1(r);
    const double d2 = profile.d2(r);
    if (p.is_infinite()) return infinity_terms(q, d2);
    return finite_terms(p.value(), n, r, q, d2);
}

double time_weight(const Exponent& p, double u) {
    if (p.is_infinite()) return 3.0 * u * u;
    const double pv = p.value();
    if (pv == 2.0) {
        if (u == 0.0) ++g_zero_base;
        return 1.0;
    }
    return (pv - 1.0) * abs_pow(u, pv - 2.0);
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Subsolution: return "Subsolution";
        case Verdict::Supersolution: return "Supersolution";
        case Verdict::Solution: return "Solution";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

Verdict parse_verdict(const std::string& text) {
    if (text == "Subsolution") return Verdict::Subsolution;
    if (text == "Supersolution") return Verdict::Supersolution;
    if (text == "Solution") return Verdict::Solution;
    if (text == "Indeterminate") return Verdict::Indeterminate;
    throw DomainError("unknown verdict '" + text + "'");
}

bool verdict_satisfies(Verdict measured, Verdict expected) {
    if (expected == Verdict::Indeterminate) return true;
    if (measured == expected) return true;
    return measured == Verdict::Solution &&
           (expected == Verdict::Subsolution || expected == Verdict::Supersolution);
}

Verdict classify(double min_residual, double max_residual, double tolerance, double scale) {
    const double slack = tolerance * scale;
    const bool sub = min_residual >= -slack;
    const bool super = max_residual <= slack;
    if (sub && super) return Verdict::Solution;
    if (sub) return Verdict::Subsolution;
    if (super) return Verdict::Supersolution;
    return Verdict::Indeterminate;
}

double eval_p_laplacian_radial(const RadialProfile& profile, const Exponent& p, int n, double r) {
    if (p.is_infinite()) throw Unsupported("use eval_inf_laplacian_radial for p = inf");
    return lap_terms(profile, p, n, r).residual;
}

double eval_inf_laplacian_radial(const RadialProfile& profile, double r) {
    return lap_terms(profile, Exponent::infinity(), 2, r).residual;
}

double eval_laplacian_radial(const RadialProfile& profile, const Exponent& p, int n, double r) {
    return lap_terms(profile, p, n, r).residual;
}

ResidualTerms laplacian_terms(const RadialProfile& profile, const Exponent& p, int n, double r) {
    return lap_terms(profile, p, n, r);
}

ResidualTerms gamma_p_terms(const SpaceTimeFunction& u, const Exponent& p, int n, SpaceTimePoint pt) {
    const ResidualTerms lap = lap_terms(u.at_time(pt.t), p, n, pt.r);
    const double time = time_weight(p, u.value(pt.r, pt.t)) * u.dt(pt.r, pt.t);
    const ResidualTerms out{lap.residual - time, lap.magnitude + std::abs(time)};
    if (!std::isfinite(out.residual)) throw SolverError("non-finite Gamma_p residual");
    return out;
}

double gamma_p_residual(const SpaceTimeFunction& u, const Exponent& p, int n, SpaceTimePoint pt) {
    return gamma_p_terms(u, p, n, pt).residual;
}

ResidualTerms g_p_terms(const SpaceTimeFunction& v, const Exponent& p, int n, SpaceTimePoint pt) {
    const ResidualTerms lap = lap_terms(v.at_time(pt.t), p, n, pt.r);
    const double q = v.dr(pt.r, pt.t);
    double grad = 0.0;
    double time = 0.0;
    if (p.is_infinite()) {
        grad = q * q * q * q;
        time = 3.0 * v.dt(pt.r, pt.t);
    } else {
        const double pv = p.value();
        grad = (pv - 1.0) * abs_pow(q, pv);
        time = (pv - 1.0) * v.dt(pt.r, pt.t);
    }
    const ResidualTerms out{lap.residual + grad - time, lap.magnitude + grad + std::abs(time)};
    if (!std::isfinite(out.residual)) throw SolverError("non-finite G_p residual");
    return out;
}

double g_p_residual(const SpaceTimeFunction& v, const Exponent& p, int n, SpaceTimePoint pt) {
    return g_p_terms(v, p, n, pt).residual;
}

double log_transform_consistency(const SpaceTimeFunction& u, const Exponent& p, int n,
                                 const std::vector<SpaceTimePoint>& points) {
    const SpaceTimeFunction v = u.log_of();
    double worst = 0.0;
    for (const auto& pt : points) {
        const double value = u.value(pt.r, pt.t);
        if (!(value > 0.0)) {
            throw DomainError("log transform needs u > 0, got u = " + std::to_string(value) +
                              " at r = " + std::to_string(pt.r));
        }
        const double weight = std::pow(value, p.degree());
        const double lhs = gamma_p_residual(u, p, n, pt);
        const double rhs = weight * g_p_residual(v, p, n, pt);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double FieldResidual::max_abs(double r_min, double t_min) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < residual.size(); ++j) {
        if (times[j] < t_min) continue;
        for (std::size_t i = 0; i < residual[j].size(); ++i) {
            if (grid.r(i) < r_min) continue;
            worst = std::max(worst, std::abs(residual[j][i]));
        }
    }
    return worst;
}

double FieldResidual::max_magnitude(double r_min, double t_min) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < magnitude.size(); ++j) {
        if (times[j] < t_min) continue;
        for (std::size_t i = 0; i < magnitude[j].size(); ++i) {
            if (grid.r(i) < r_min) continue;
            worst = std::max(worst, magnitude[j][i]);
        }
    }
    return worst;
}

FieldResidual fd_residual_on_field(const SpaceTimeField& field, const Exponent& p, int n) {
    const std::size_t N = field.grid.intervals;
    if (field.grid.nodes() < 3 || field.levels() < 2) {
        throw GridError("residual audit needs >= 3 nodes and >= 2 time levels");
    }
    const double h = field.grid.h();
    FieldResidual out;
    out.grid = field.grid;
    for (std::size_t j = 1; j < field.levels(); ++j) {
        const auto& u = field.values[j];
        const auto& uo = field.values[j - 1];
        if (u.size() != N + 1 || uo.size() != N + 1) throw GridError("ragged field");
        const double dt = field.times[j] - field.times[j - 1];
        if (!(dt > 0.0)) throw GridError("time levels must increase");
        std::vector<double> res(N), mag(N);
        for (std::size_t i = 0; i < N; ++i) {
            ResidualTerms lap;
            if (i == 0) {
                const double d2 = 2.0 * (u[1] - u[0]) / (h * h);
                if (!p.is_infinite()) {
                    ++g_finite_calls;
                    if (p.value() == 2.0) lap = {n * d2, std::abs(n * d2)};
                }
            } else {
                const double q = (u[i + 1] - u[i - 1]) / (2.0 * h);
                const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
                lap = p.is_infinite() ? infinity_terms(q, d2)
                                      : finite_terms(p.value(), n, field.grid.r(i), q, d2);
            }
            const double time = time_weight(p, u[i]) * (u[i] - uo[i]) / dt;
            res[i] = lap.residual - time;
            mag[i] = lap.magnitude + std::abs(time);
        }
        out.residual.push_back(std::move(res));
        out.magnitude.push_back(std::move(mag));
        out.times.push_back(field.times[j]);
    }
    return out;
}

std::uint64_t finite_path_calls() { return g_finite_calls; }
void reset_finite_path_calls() { g_finite_calls = 0; }
std::uint64_t zero_base_hits() { return g_zero_base; }
void reset_zero_base_hits() { g_zero_base = 0; }

}  // namespace trudlab
