#pragma once

#include <functional>

namespace trudlab {

/// Behaviour of a radial profile at r = 0.
///
/// Smooth: v'(0) = 0 and v'' is finite, so (n-1)v'/r -> (n-1)v''(0).
/// Power: near the axis v ~ v(0) + coefficient * r^gamma, and the operator
/// value at r = 0 is the limit of the operator applied to that power.
struct OriginRule {
    enum class Kind { Smooth, Power };
    Kind kind = Kind::Smooth;
    double gamma = 2.0;
    double coefficient = 0.0;

    static OriginRule smooth() { return {}; }
    static OriginRule power(double gamma, double coefficient) {
        return {Kind::Power, gamma, coefficient};
    }
};

/// A function of r on [lo, hi] with exact first and second derivatives.
struct RadialProfile {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    double lo = 0.0;
    double hi = 1.0;
    OriginRule origin{};
};

/// Time-dependent origin rule: the power coefficient may depend on t.
struct SpaceTimeOrigin {
    OriginRule::Kind kind = OriginRule::Kind::Smooth;
    double gamma = 2.0;
    std::function<double(double)> coefficient;  // t -> coefficient, Power only
};

/// A radial function u(r, t) with exact derivatives u_r, u_rr, u_t.
struct SpaceTimeFunction {
    std::function<double(double, double)> value;
    std::function<double(double, double)> dr;
    std::function<double(double, double)> drr;
    std::function<double(double, double)> dt;
    double r_hi = 1.0;
    SpaceTimeOrigin origin{};

    /// Freezes t and returns the spatial profile.
    RadialProfile at_time(double t) const;

    /// exp(u) with the origin coefficient carried through (e^{v0} * c).
    SpaceTimeFunction exp_of() const;
    /// log(u) for positive u, origin coefficient c / u(0, t).
    SpaceTimeFunction log_of() const;
    /// Time-independent lift of a radial profile.
    static SpaceTimeFunction stationary(const RadialProfile& profile);
};

}  // namespace trudlab
