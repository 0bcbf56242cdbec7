#include "trudlab/barriers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "trudlab/errors.hpp"

namespace trudlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// x^e that stays finite when x = 0 and e >= 0, and returns +inf for e < 0.
double safe_pow(double x, double e) {
    if (x == 0.0) return e == 0.0 ? 1.0 : (e > 0.0 ? 0.0 : kInf);
    return std::pow(x, e);
}

double degree_of(const Exponent& p) { return p.degree(); }

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be positive and finite");
    }
}

void require_dimension(int n) {
    if (n < 2) throw DomainError("dimension n must be >= 2");
}

struct FamilyName {
    Family family;
    const char* name;
};

constexpr std::array<FamilyName, 13> kFamilyNames{{
    {Family::EigenBarrier26, "eigen26"},
    {Family::GrowthBarrier27, "growth27"},
    {Family::Kernel29, "kernel"},
    {Family::PowerSolution270, "power270"},
    {Family::UpperBound320, "upper320"},
    {Family::LowerBound324, "lower324"},
    {Family::InfUpperBound, "inf-upper"},
    {Family::InfLowerBound, "inf-lower"},
    {Family::TimeFactor35, "timefactor35"},
    {Family::BoundaryBarrierHighP, "boundary-high"},
    {Family::BoundaryBarrierLowP, "boundary-low"},
    {Family::Paraboloid314, "paraboloid314"},
    {Family::Separated25, "separated25"},
}};

/// v = coefficient(t) * r^gamma + offset(t), the building block of every power family.
SpaceTimeFunction power_family(double gamma, std::function<double(double)> coef,
                               std::function<double(double)> dcoef,
                               std::function<double(double)> offset,
                               std::function<double(double)> doffset, double r_hi) {
    SpaceTimeFunction f;
    f.value = [=](double r, double t) { return coef(t) * safe_pow(r, gamma) + offset(t); };
    f.dr = [=](double r, double t) { return coef(t) * gamma * safe_pow(r, gamma - 1.0); };
    f.drr = [=](double r, double t) {
        return coef(t) * gamma * (gamma - 1.0) * safe_pow(r, gamma - 2.0);
    };
    f.dt = [=](double r, double t) { return dcoef(t) * safe_pow(r, gamma) + doffset(t); };
    f.r_hi = r_hi;
    f.origin.kind = OriginRule::Kind::Power;
    f.origin.gamma = gamma;
    f.origin.coefficient = coef;
    return f;
}

}  // namespace

std::string to_string(Family f) {
    for (const auto& entry : kFamilyNames) {
        if (entry.family == f) return entry.name;
    }
    return "unknown";
}

Family parse_family(const std::string& text) {
    for (const auto& entry : kFamilyNames) {
        if (text == entry.name) return entry.family;
    }
    throw DomainError("unknown barrier family '" + text + "'");
}

bool Region::contains(const Region& other, double slack) const {
    auto below = [slack](double a, double b) {
        return a <= b + slack * std::max(1.0, std::abs(b));
    };
    return below(r_lo, other.r_lo) && below(other.r_hi, r_hi) && below(t_lo, other.t_lo) &&
           below(other.t_hi, t_hi) && other.r_lo <= other.r_hi && other.t_lo <= other.t_hi;
}

double BarrierSpec::param(const std::string& name) const {
    for (const auto& [key, value] : params) {
        if (key == name) return value;
    }
    throw DomainError("family " + to_string(family) + " has no parameter '" + name + "'");
}

double BarrierSpec::constant(const std::string& name) const {
    for (const auto& [key, value] : derived) {
        if (key == name) return value;
    }
    throw DomainError("family " + to_string(family) + " has no derived constant '" + name + "'");
}

bool BarrierSpec::has(const std::string& name) const {
    auto match = [&name](const auto& kv) { return kv.first == name; };
    return std::any_of(params.begin(), params.end(), match) ||
           std::any_of(derived.begin(), derived.end(), match);
}

BarrierEval BarrierSpec::eval(double r, double t) const {
    const bool log_form = form == ResidualForm::Log || form == ResidualForm::ClosedFormIdentity;
    return {stored.value(r, t), log_form};
}

double BarrierSpec::value(double r, double t) const {
    const BarrierEval e = eval(r, t);
    return e.is_log_form ? std::exp(e.value) : e.value;
}

SpaceTimeFunction BarrierSpec::direct() const {
    if (form == ResidualForm::Log || form == ResidualForm::ClosedFormIdentity) return stored.exp_of();
    return stored;
}

ResidualTerms BarrierSpec::residual(double r, double t) const {
    const SpaceTimePoint pt{r, t};
    switch (form) {
        case ResidualForm::Direct:
            return gamma_p_terms(stored, p, n, pt);
        case ResidualForm::Log:
            return g_p_terms(stored, p, n, pt);
        case ResidualForm::ClosedFormIdentity: {
            const ResidualTerms g = g_p_terms(stored, p, n, pt);
            const double c = closed_form(r, t);
            return {g.residual - c, g.magnitude + std::abs(c)};
        }
        case ResidualForm::Elliptic: {
            RadialProfile w = stored.at_time(t);
            w.lo = validity.r_lo;
            const ResidualTerms lap = laplacian_terms(w, p, n, r);
            const double value = w.value(r);
            const double deg = degree_of(p);
            const double term = elliptic_lambda * safe_pow(std::abs(value), deg - 1.0) * value;
            return {lap.residual + term, lap.magnitude + std::abs(term)};
        }
    }
    throw DomainError("unknown residual form");
}

// ---------------------------------------------------------------------------

BarrierSpec make_eigen_barrier(const Exponent& p, int n, double R) {
    require_positive(R, "R");
    require_dimension(n);
    BarrierSpec s;
    s.family = Family::EigenBarrier26;
    s.p = p;
    s.n = n;
    s.params = {{"R", R}};
    double alpha = 2.0;
    double lambda = 0.0;
    if (p.is_infinite()) {
        const double theta = 1.0 / std::sqrt(2.0);
        lambda = 256.0 / std::pow(R, 4.0);
        s.derived = {{"theta", theta}, {"alpha", alpha}, {"lambda", lambda}};
    } else {
        const double pv = p.value();
        const double k = pv + n - 2.0;
        alpha = (2.0 * pv + k - 1.0) / (2.0 * (pv - 1.0));
        const double theta2 = k / (k + 1.0);
        const double theta = std::sqrt(theta2);
        lambda = k * std::pow(theta, pv - 2.0) / std::pow(R, pv) *
                 std::pow(2.0 * alpha / (1.0 - theta2), pv - 1.0);
        s.derived = {{"k", k}, {"alpha", alpha}, {"theta2", theta2}, {"theta", theta},
                     {"lambda", lambda}};
    }
    const double deg = p.degree();
    const double R2 = R * R;
    auto decay = [lambda, deg](double t) { return std::exp(-lambda * t / deg); };
    auto h = [R2](double r) { return std::max(0.0, 1.0 - r * r / R2); };
    s.stored.value = [=](double r, double t) { return safe_pow(h(r), alpha) * decay(t); };
    s.stored.dr = [=](double r, double t) {
        return alpha * safe_pow(h(r), alpha - 1.0) * (-2.0 * r / R2) * decay(t);
    };
    s.stored.drr = [=](double r, double t) {
        const double hr = h(r);
        const double first = alpha * safe_pow(hr, alpha - 1.0) * (-2.0 / R2);
        const double second =
            r == 0.0 ? 0.0 : alpha * (alpha - 1.0) * safe_pow(hr, alpha - 2.0) * (4.0 * r * r / (R2 * R2));
        return (first + second) * decay(t);
    };
    s.stored.dt = [=](double r, double t) {
        return -lambda / deg * safe_pow(h(r), alpha) * decay(t);
    };
    s.stored.r_hi = R;
    s.form = ResidualForm::Direct;
    s.validity = {0.0, R, 0.0, kInf};
    s.default_region = {0.0, R, 0.0, 5.0};
    s.expected = Verdict::Subsolution;
    return s;
}

double growth_barrier_b_bound(const Exponent& p, double T, double alpha) {
    if (p.is_infinite()) {
        return std::cbrt(alpha * 243.0 / (256.0 * std::pow(T + 1.0, 3.0 * alpha + 1.0)));
    }
    const double pv = p.value();
    const double e = alpha * (pv - 1.0) + 1.0;
    return std::pow(alpha / (std::pow(p.beta(), pv) * std::pow(T + 1.0, e)), 1.0 / (pv - 1.0));
}

BarrierSpec make_growth_barrier(const Exponent& p, int n, double T, double alpha, double b) {
    require_positive(T, "T");
    require_positive(alpha, "alpha");
    require_dimension(n);
    const double bound = growth_barrier_b_bound(p, T, alpha);
    double a = 0.0;
    double e = 0.0;
    double lhs = 0.0;
    if (p.is_infinite()) {
        e = 3.0 * alpha + 1.0;
        lhs = b * b * b * (256.0 / 243.0) * std::pow(T + 1.0, e);
        a = 64.0 * b * b * b / (243.0 * (3.0 * alpha + 1.0));
    } else {
        const double pv = p.value();
        e = alpha * (pv - 1.0) + 1.0;
        lhs = std::pow(b, pv - 1.0) * std::pow(p.beta(), pv) * std::pow(T + 1.0, e);
        a = n * std::pow(pv, pv - 1.0) * std::pow(b, pv - 1.0) /
            (std::pow(pv - 1.0, pv) * (1.0 + alpha * (pv - 1.0)));
    }
    if (!(b > 0.0) || !(lhs < alpha) || !(b < bound)) {
        throw ConstraintViolation("growth barrier needs 0 < b < " + std::to_string(bound) +
                                      " for T = " + std::to_string(T) +
                                      ", alpha = " + std::to_string(alpha),
                                  bound);
    }
    BarrierSpec s;
    s.family = Family::GrowthBarrier27;
    s.p = p;
    s.n = n;
    s.params = {{"T", T}, {"alpha", alpha}, {"b", b}};
    s.derived = {{"a", a}, {"b_bound", bound}};
    const double beta = p.beta();
    s.stored = power_family(
        beta, [=](double t) { return b * std::pow(t + 1.0, alpha); },
        [=](double t) { return b * alpha * std::pow(t + 1.0, alpha - 1.0); },
        [=](double t) { return a * (std::pow(t + 1.0, e) - 1.0); },
        [=](double t) { return a * e * std::pow(t + 1.0, e - 1.0); }, kInf);
    s.form = ResidualForm::Log;
    s.validity = {0.0, kInf, 0.0, T};
    s.default_region = {0.0, 10.0, 0.0, T};
    s.expected = Verdict::Supersolution;
    return s;
}

BarrierSpec make_kernel(const Exponent& p, int n) {
    require_dimension(n);
    BarrierSpec s;
    s.family = Family::Kernel29;
    s.p = p;
    s.n = n;
    double sexp = 0.0;
    double c = 0.0;
    const double deg = p.degree();
    const double beta = p.beta();
    if (p.is_infinite()) {
        sexp = 1.0 / 12.0;
        c = std::pow(0.75, 4.0 / 3.0);
    } else {
        const double pv = p.value();
        sexp = n / (pv * (pv - 1.0));
        c = (pv - 1.0) / std::pow(pv, beta);
    }
    s.derived = {{"time_exponent", sexp}, {"c", c}};
    auto check_t = [](double t) {
        if (!(t > 0.0)) throw DomainError("kernel is defined for t > 0 only");
    };
    auto tau = [deg](double t) { return std::pow(t, -1.0 / deg); };
    auto K = [=](double r, double t) {
        check_t(t);
        return std::pow(t, -sexp) * std::exp(-c * tau(t) * safe_pow(r, beta));
    };
    s.stored.value = K;
    s.stored.dr = [=](double r, double t) {
        return -K(r, t) * c * tau(t) * beta * safe_pow(r, beta - 1.0);
    };
    s.stored.drr = [=](double r, double t) {
        const double g = c * tau(t) * beta * safe_pow(r, beta - 1.0);
        return K(r, t) * (g * g - c * tau(t) * beta * (beta - 1.0) * safe_pow(r, beta - 2.0));
    };
    s.stored.dt = [=](double r, double t) {
        const double z = c * tau(t) * safe_pow(r, beta);
        return K(r, t) * (-sexp / t + z / (deg * t));
    };
    s.stored.r_hi = kInf;
    s.stored.origin.kind = OriginRule::Kind::Power;
    s.stored.origin.gamma = beta;
    s.stored.origin.coefficient = [=](double t) {
        check_t(t);
        return -c * tau(t) * std::pow(t, -sexp);
    };
    s.form = ResidualForm::Direct;
    s.validity = {0.0, kInf, std::numeric_limits<double>::min(), kInf};
    s.default_region = {0.0, 2.0, 0.1, 2.0};
    s.expected = Verdict::Solution;
    return s;
}

BarrierSpec make_power_solution(const Exponent& p, int n, int sign, std::function<double(double)> f,
                                std::function<double(double)> df, double r_hi, double t_hi) {
    require_dimension(n);
    require_positive(r_hi, "r_hi");
    require_positive(t_hi, "t_hi");
    if (sign != 1 && sign != -1) throw DomainError("sign must be +1 or -1");
    for (int i = 0; i <= 100; ++i) {
        const double t = t_hi * i / 100.0;
        if (f(t) < 0.0) throw DomainError("power solution needs f(t) >= 0, f(" + std::to_string(t) + ") < 0");
    }
    BarrierSpec s;
    s.family = Family::PowerSolution270;
    s.p = p;
    s.n = n;
    const double A = p.power_constant_a(n);
    const double B = p.power_constant_b();
    const double beta = p.beta();
    const double deg = p.degree();
    s.params = {{"sign", static_cast<double>(sign)}};
    s.derived = {{"A", A}, {"B", B}};
    const double sg = sign;
    s.stored = power_family(
        beta, [=](double t) { return sg * f(t); }, [=](double t) { return sg * df(t); },
        [](double) { return 0.0; }, [](double) { return 0.0; }, r_hi);
    // The gradient term is sign-free: |D(+-f r^beta)|^p = B f^p r^beta.
    const double grad_coef = p.is_infinite() ? 1.0 : deg;
    s.closed_form = [=](double r, double t) {
        const double ft = f(t);
        const double rb = safe_pow(r, beta);
        return sg * A * std::pow(ft, deg) + grad_coef * B * std::pow(ft, deg + 1.0) * rb -
               sg * deg * rb * df(t);
    };
    s.form = ResidualForm::ClosedFormIdentity;
    s.validity = {0.0, r_hi, 0.0, t_hi};
    s.default_region = s.validity;
    s.expected = Verdict::Solution;
    return s;
}

double thm161_alpha_max(const Exponent& p) {
    if (p.is_infinite()) return 0.5;
    const double pv = p.value();
    return pv == 2.0 ? kInf : 1.0 / (pv - 2.0);
}

namespace {

void check_alpha(const Exponent& p, double alpha) {
    const double top = thm161_alpha_max(p);
    if (!(alpha > 0.0) || alpha > top * (1.0 + 1e-12)) {
        throw ConstraintViolation("alpha must lie in (0, " + std::to_string(top) + "]", top);
    }
}

/// v = -coef * r^beta / (1+t)^alpha + offset / (1+t)^alpha with coef, offset constants.
SpaceTimeFunction decaying_power(double beta, double coef, double offset, double alpha, double R) {
    return power_family(
        beta, [=](double t) { return coef / std::pow(1.0 + t, alpha); },
        [=](double t) { return -alpha * coef / std::pow(1.0 + t, alpha + 1.0); },
        [=](double t) { return offset / std::pow(1.0 + t, alpha); },
        [=](double t) { return -alpha * offset / std::pow(1.0 + t, alpha + 1.0); }, R);
}

}  // namespace

BarrierSpec make_thm161_upper(const Exponent& p, int n, double R, double M, double alpha,
                              double safety) {
    require_positive(R, "R");
    require_dimension(n);
    if (!(M >= 1.0) || !std::isfinite(M)) throw DomainError("upper barrier needs M >= 1");
    check_alpha(p, alpha);
    const double beta = p.beta();
    const double Rb = std::pow(R, beta);
    const double logM = std::log(M);
    BarrierSpec s;
    s.p = p;
    s.n = n;
    s.params = {{"R", R}, {"M", M}, {"alpha", alpha}, {"safety", safety}};
    double A = 0.0, B = 0.0, a0 = 0.0, K = 0.0, Kbar = 0.0;
    if (p.is_infinite()) {
        s.family = Family::InfUpperBound;
        A = 64.0 / 81.0;
        B = std::pow(4.0 / 3.0, 4.0) * Rb;
        a0 = 3.0 * A / (4.0 * B);
        K = A * a0 * a0 * a0 / 4.0;
        Kbar = 3.0 * alpha * (a0 * Rb + logM);
    } else {
        s.family = Family::UpperBound320;
        const double pv = p.value();
        A = n * std::pow(beta, pv - 1.0);
        B = (pv - 1.0) * std::pow(beta, pv) * Rb;
        a0 = A * (pv - 1.0) / (pv * B);
        K = A / pv * std::pow(a0, pv - 1.0);
        Kbar = alpha * (pv - 1.0) * (a0 * Rb + logM);
    }
    const double T0_min = Kbar / K - 1.0;
    const double T0 = safety * std::max(T0_min, 0.0);
    const double scale = std::pow(1.0 + T0, alpha);
    const double a = a0 * scale;
    const double b = scale * logM / a;
    s.derived = {{"A", A},       {"B", B},   {"a", a},   {"b", b},        {"K", K},
                 {"Kbar", Kbar}, {"T0_min", T0_min},    {"T0", T0}};
    s.stored = decaying_power(beta, -a, a * (Rb + b), alpha, R);
    s.form = ResidualForm::Log;
    s.validity = {0.0, R, T0, kInf};
    s.default_region = {0.0, R, T0, T0 + 10.0 * (1.0 + T0)};
    s.expected = Verdict::Supersolution;
    return s;
}

BarrierSpec make_thm161_lower(const Exponent& p, int n, double R, double m, double alpha,
                              double safety) {
    require_positive(R, "R");
    require_dimension(n);
    if (!(m > 0.0 && m <= 1.0)) throw DomainError("lower barrier needs 0 < m <= 1");
    check_alpha(p, alpha);
    const double beta = p.beta();
    const double Rb = std::pow(R, beta);
    const double logm = std::log(m);
    BarrierSpec s;
    s.p = p;
    s.n = n;
    s.params = {{"R", R}, {"m", m}, {"alpha", alpha}, {"safety", safety}};
    double a = 0.0, b = 0.0, T1 = 0.0;
    if (p.is_infinite()) {
        s.family = Family::InfLowerBound;
        const double A = 64.0 / 81.0;
        // Positive root of A a^3 - 3 alpha R^{4/3} a + 3 alpha log m = 0.
        auto g = [=](double x) { return A * x * x * x - 3.0 * alpha * Rb * x + 3.0 * alpha * logm; };
        double lo = 0.0, hi = 1.0;
        while (g(hi) <= 0.0) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? hi : lo) = mid;
        }
        a = safety * hi;
        b = a > 0.0 ? -logm / a : 0.0;
        s.derived = {{"A", A}, {"a_min", hi}, {"a", a}, {"b", b}, {"T1", 0.0}};
    } else {
        s.family = Family::LowerBound324;
        const double pv = p.value();
        const double A = n * std::pow(beta, pv - 1.0);
        const double K = alpha * (pv - 1.0) * (Rb - logm);
        const double T1_min = K / A - 1.0;
        T1 = safety * std::max(T1_min, 0.0);
        a = std::pow(1.0 + T1, alpha);
        b = -logm / a;
        s.derived = {{"A", A}, {"K", K}, {"T1_min", T1_min}, {"T1", T1}, {"a", a}, {"b", b}};
    }
    s.stored = decaying_power(beta, a, -a * (Rb + b), alpha, R);
    s.form = ResidualForm::Log;
    s.validity = {0.0, R, T1, kInf};
    s.default_region = {0.0, R, T1, T1 + 10.0 * (1.0 + T1)};
    s.expected = Verdict::Subsolution;
    return s;
}

BarrierSpec make_time_factor(double lambda, const Exponent& p, double S, double T) {
    require_positive(lambda, "lambda");
    if (!(T > S)) throw DomainError("time factor needs S < T");
    const double deg = p.degree();
    const double beta_S = std::exp(lambda * (T - S) / deg);
    if (beta_S < 2.0 * (1.0 - 1e-12)) {
        const double T_min = S + deg * std::log(2.0) / lambda;
        throw ConstraintViolation("time factor needs beta(S,T) >= 2, got " + std::to_string(beta_S) +
                                      "; smallest admissible T is " + std::to_string(T_min),
                                  T_min);
    }
    BarrierSpec s;
    s.family = Family::TimeFactor35;
    s.p = p;
    s.params = {{"lambda", lambda}, {"S", S}, {"T", T}};
    s.derived = {{"beta_S", beta_S}};
    auto F = [=](double t) {
        return 0.5 * (1.0 + (std::exp(lambda * (T - t) / deg) - 1.0) / (beta_S - 1.0));
    };
    auto Ft = [=](double t) {
        return -lambda * std::exp(lambda * (T - t) / deg) / (2.0 * deg * (beta_S - 1.0));
    };
    s.stored.value = [F](double, double t) { return F(t); };
    s.stored.dr = [](double, double) { return 0.0; };
    s.stored.drr = [](double, double) { return 0.0; };
    s.stored.dt = [Ft](double, double t) { return Ft(t); };
    s.stored.r_hi = 1.0;
    s.form = ResidualForm::Direct;
    s.validity = {0.0, 1.0, S, T};
    s.default_region = s.validity;
    s.expected = Verdict::Supersolution;
    return s;
}

double time_factor_F(const BarrierSpec& spec, double t) {
    const double lambda = spec.param("lambda");
    const double T = spec.param("T");
    const double beta_S = spec.constant("beta_S");
    return 0.5 * (1.0 + (std::exp(lambda * (T - t) / spec.p.degree()) - 1.0) / (beta_S - 1.0));
}

double time_factor_Ft(const BarrierSpec& spec, double t) {
    const double lambda = spec.param("lambda");
    const double T = spec.param("T");
    const double beta_S = spec.constant("beta_S");
    const double deg = spec.p.degree();
    return -lambda * std::exp(lambda * (T - t) / deg) / (2.0 * deg * (beta_S - 1.0));
}

BarrierSpec attach_profile(const BarrierSpec& time_factor, const RadialProfile& psi, int n) {
    if (time_factor.family != Family::TimeFactor35) throw DomainError("attach_profile needs a time factor");
    require_dimension(n);
    BarrierSpec s = time_factor;
    s.n = n;
    const SpaceTimeFunction F = time_factor.stored;
    s.stored.value = [=](double r, double t) { return psi.value(r) * F.value(0.0, t); };
    s.stored.dr = [=](double r, double t) { return psi.d1(r) * F.value(0.0, t); };
    s.stored.drr = [=](double r, double t) { return psi.d2(r) * F.value(0.0, t); };
    s.stored.dt = [=](double r, double t) { return psi.value(r) * F.dt(0.0, t); };
    s.stored.r_hi = psi.hi;
    s.stored.origin.kind = psi.origin.kind;
    s.stored.origin.gamma = psi.origin.gamma;
    if (psi.origin.kind == OriginRule::Kind::Power) {
        s.stored.origin.coefficient = [c = psi.origin.coefficient, F](double t) {
            return c * F.value(0.0, t);
        };
    }
    s.params.emplace_back("R", psi.hi);
    s.validity.r_lo = psi.lo;
    s.validity.r_hi = psi.hi;
    s.default_region = s.validity;
    return s;
}

double time_factor_closed_form(const BarrierSpec& spec, double psi_value, double t) {
    const double lambda = spec.param("lambda");
    const double beta_S = spec.constant("beta_S");
    const double deg = spec.p.degree();
    const double F = time_factor_F(spec, t);
    return -0.5 * lambda * std::pow(psi_value, deg) * std::pow(F, deg - 1.0) * (beta_S - 2.0) /
           (beta_S - 1.0);
}

double boundary_high_lambda_bound(const Exponent& p, int n, double theta, double R) {
    const double pv = p.value();
    const double alpha = theta * (pv - n) / (pv - 1.0);
    return (1.0 - theta) * (pv - n) * std::pow(alpha, pv - 1.0) / std::pow(R, pv);
}

BarrierSpec make_boundary_barrier(const Exponent& p, int n, const BoundaryCaseHigh& args,
                                  double safety) {
    if (p.is_infinite()) throw Unsupported("boundary barriers need finite p");
    require_dimension(n);
    const double pv = p.value();
    if (!(n < pv)) throw DomainError("case (i) boundary barrier needs n < p");
    if (!(args.theta > 0.0 && args.theta < 1.0)) throw DomainError("theta must lie in (0, 1)");
    require_positive(args.R, "R");
    require_positive(args.delta, "delta");
    const double alpha = args.theta * (pv - n) / (pv - 1.0);
    const double bound = boundary_high_lambda_bound(p, n, args.theta, args.R);
    if (!(args.lambda >= 0.0) || !(args.lambda < bound)) {
        throw ConstraintViolation("boundary barrier needs 0 <= lambda < " + std::to_string(bound), bound);
    }
    const double ratio = std::pow(args.lambda / bound, 1.0 / (pv - 1.0));
    const double c_min = ratio * args.delta / ((1.0 - ratio) * std::pow(args.R, alpha));
    const double c = safety * c_min;
    BarrierSpec s;
    s.family = Family::BoundaryBarrierHighP;
    s.p = p;
    s.n = n;
    s.params = {{"theta", args.theta}, {"R", args.R}, {"delta", args.delta}, {"lambda", args.lambda}};
    s.derived = {{"alpha", alpha}, {"lambda_bound", bound}, {"c_min", c_min}, {"c", c}};
    s.stored = power_family(
        alpha, [c](double) { return c; }, [](double) { return 0.0; },
        [d = args.delta](double) { return d; }, [](double) { return 0.0; }, args.R);
    s.elliptic_lambda = args.lambda;
    s.form = ResidualForm::Elliptic;
    s.validity = {1e-6 * args.R, args.R, 0.0, 0.0};
    s.default_region = {0.05 * args.R, args.R, 0.0, 0.0};
    s.expected = Verdict::Supersolution;
    return s;
}

double boundary_low_lambda_bound(const Exponent& p, int n, double alpha, double rho, double R) {
    const double pv = p.value();
    const double k = std::pow(alpha, pv - 1.0) * (alpha * (pv - 1.0) + pv - n);
    const double ra = std::pow(rho, alpha);
    return k / std::pow(R + rho, pv) * std::pow(ra / (std::pow(R + rho, alpha) - ra), pv - 1.0);
}

BarrierSpec make_boundary_barrier(const Exponent& p, int n, const BoundaryCaseLow& args,
                                  double safety) {
    if (p.is_infinite()) throw Unsupported("boundary barriers need finite p");
    require_dimension(n);
    const double pv = p.value();
    if (!(pv <= n)) throw DomainError("case (ii) boundary barrier needs 2 <= p <= n");
    const double alpha_min = std::max(0.0, (n - pv) / (pv - 1.0));
    if (!(args.alpha > alpha_min)) {
        throw ConstraintViolation("alpha must exceed " + std::to_string(alpha_min), alpha_min);
    }
    require_positive(args.rho, "rho");
    require_positive(args.R, "R");
    require_positive(args.delta, "delta");
    const double alpha = args.alpha;
    const double k = std::pow(alpha, pv - 1.0) * (alpha * (pv - 1.0) + pv - n);
    const double bound = boundary_low_lambda_bound(p, n, alpha, args.rho, args.R);
    if (!(args.lambda >= 0.0) || !(args.lambda < bound)) {
        throw ConstraintViolation("boundary barrier needs 0 <= lambda < " + std::to_string(bound), bound);
    }
    const double outer = args.rho + args.R;
    const double J = std::pow(args.rho, -alpha) - std::pow(outer, -alpha);
    const double Q = args.lambda * std::pow(outer, alpha * (pv - 1.0) + pv) / k;
    const double q = std::pow(Q, 1.0 / (pv - 1.0));
    const double c_min = q * args.delta / (1.0 - q * J);
    const double c = safety * c_min;
    BarrierSpec s;
    s.family = Family::BoundaryBarrierLowP;
    s.p = p;
    s.n = n;
    s.params = {{"alpha", alpha}, {"rho", args.rho}, {"R", args.R}, {"delta", args.delta},
                {"lambda", args.lambda}};
    s.derived = {{"k", k}, {"J", J}, {"lambda_bound", bound}, {"c_min", c_min}, {"c", c}};
    const double offset = args.delta + c * std::pow(args.rho, -alpha);
    s.stored = power_family(
        -alpha, [c](double) { return -c; }, [](double) { return 0.0; },
        [offset](double) { return offset; }, [](double) { return 0.0; }, outer);
    s.elliptic_lambda = args.lambda;
    s.form = ResidualForm::Elliptic;
    s.validity = {args.rho, outer, 0.0, 0.0};
    s.default_region = s.validity;
    s.expected = Verdict::Supersolution;
    return s;
}

BarrierSpec make_paraboloid(const Exponent& p, int n, double R) {
    require_positive(R, "R");
    require_dimension(n);
    BarrierSpec s;
    s.family = Family::Paraboloid314;
    s.p = p;
    s.n = n;
    s.params = {{"R", R}};
    s.stored.value = [R](double r, double) { return R * R - r * r; };
    s.stored.dr = [](double r, double) { return -2.0 * r; };
    s.stored.drr = [](double, double) { return -2.0; };
    s.stored.dt = [](double, double) { return 0.0; };
    s.stored.r_hi = R;
    s.form = ResidualForm::Direct;
    s.validity = {0.0, R, 0.0, kInf};
    s.default_region = {0.0, R, 0.0, 1.0};
    s.expected = Verdict::Supersolution;
    return s;
}

BarrierSpec separated_solution(const RadialProfile& psi, double lambda, double mu, const Exponent& p,
                               int n, double t_hi) {
    require_dimension(n);
    for (int i = 0; i <= 200; ++i) {
        const double r = psi.lo + (psi.hi - psi.lo) * i / 200.0;
        if (psi.value(r) < 0.0) throw DomainError("separated solution needs psi >= 0");
    }
    const double deg = p.degree();
    BarrierSpec s;
    s.family = Family::Separated25;
    s.p = p;
    s.n = n;
    s.params = {{"lambda", lambda}, {"mu", mu}};
    auto E = [mu, deg](double t) { return std::exp(-mu * t / deg); };
    s.stored.value = [=](double r, double t) { return psi.value(r) * E(t); };
    s.stored.dr = [=](double r, double t) { return psi.d1(r) * E(t); };
    s.stored.drr = [=](double r, double t) { return psi.d2(r) * E(t); };
    s.stored.dt = [=](double r, double t) { return -mu / deg * psi.value(r) * E(t); };
    s.stored.r_hi = psi.hi;
    s.stored.origin.kind = psi.origin.kind;
    s.stored.origin.gamma = psi.origin.gamma;
    if (psi.origin.kind == OriginRule::Kind::Power) {
        s.stored.origin.coefficient = [c = psi.origin.coefficient, E](double t) { return c * E(t); };
    }
    s.form = ResidualForm::Direct;
    s.validity = {psi.lo, psi.hi, 0.0, kInf};
    s.default_region = {psi.lo, psi.hi, 0.0, t_hi};
    s.expected = mu == lambda ? Verdict::Solution
                              : (mu > lambda ? Verdict::Subsolution : Verdict::Supersolution);
    return s;
}

// ---------------------------------------------------------------------------

std::vector<SpaceTimePoint> sample_points(const Region& region, std::size_t samples,
                                          std::size_t random_samples, std::uint64_t seed) {
    std::vector<SpaceTimePoint> pts;
    const auto m = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples)))));
    const bool flat_t = region.t_hi == region.t_lo;
    const std::size_t mt = flat_t ? 1 : m;
    pts.reserve(m * mt + random_samples);
    for (std::size_t j = 0; j < mt; ++j) {
        const double t = flat_t ? region.t_lo
                                : region.t_lo + (region.t_hi - region.t_lo) * j / double(m - 1);
        for (std::size_t i = 0; i < m; ++i) {
            pts.push_back({region.r_lo + (region.r_hi - region.r_lo) * i / double(m - 1), t});
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = 0; k < random_samples; ++k) {
        const double a = unit(rng);
        const double b = unit(rng);
        pts.push_back({region.r_lo + (region.r_hi - region.r_lo) * a,
                       region.t_lo + (region.t_hi - region.t_lo) * b});
    }
    return pts;
}

ResidualReport verify_sign(const BarrierSpec& spec, const Region& region, Verdict expected,
                           const VerifyOptions& options) {
    if (!spec.validity.contains(region)) {
        throw DomainError("sample region leaves the validity domain of " + to_string(spec.family));
    }
    if (!std::isfinite(region.r_hi) || !std::isfinite(region.t_hi)) {
        throw DomainError("sample region must be bounded");
    }
    if (spec.family == Family::TimeFactor35 && !spec.has("R")) {
        throw DomainError("time factor needs an attached profile before verification");
    }
    ResidualReport rep;
    rep.family = to_string(spec.family);
    rep.p = spec.p;
    rep.n = spec.n;
    rep.params = spec.params;
    rep.derived = spec.derived;
    rep.expected = expected;
    rep.tolerance = options.tolerance;
    rep.seed = options.seed;
    rep.min_residual = kInf;
    rep.max_residual = -kInf;
    const auto pts = sample_points(region, options.samples, options.random_samples, options.seed);
    const std::uint64_t zero_before = zero_base_hits();
    for (const auto& pt : pts) {
        const ResidualTerms terms = spec.residual(pt.r, pt.t);
        if (terms.residual < rep.min_residual) {
            rep.min_residual = terms.residual;
            rep.argmin = pt;
        }
        if (terms.residual > rep.max_residual) {
            rep.max_residual = terms.residual;
            rep.argmax = pt;
        }
        rep.scale = std::max(rep.scale, terms.magnitude);
    }
    rep.zero_base_hits = zero_base_hits() - zero_before;
    rep.samples = pts.size();
    rep.verdict = classify(rep.min_residual, rep.max_residual, rep.tolerance, rep.scale);
    return rep;
}

ResidualReport verify_sign(const BarrierSpec& spec, const VerifyOptions& options) {
    return verify_sign(spec, spec.default_region, spec.expected, options);
}

}  // namespace trudlab
