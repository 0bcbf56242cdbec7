#include "trudlab/radial.hpp"

#include <cmath>

namespace trudlab {

RadialProfile SpaceTimeFunction::at_time(double t) const {
    RadialProfile out;
    out.value = [f = value, t](double r) { return f(r, t); };
    out.d1 = [f = dr, t](double r) { return f(r, t); };
    out.d2 = [f = drr, t](double r) { return f(r, t); };
    out.lo = 0.0;
    out.hi = r_hi;
    if (origin.kind == OriginRule::Kind::Power) {
        out.origin = OriginRule::power(origin.gamma, origin.coefficient(t));
    }
    return out;
}

SpaceTimeFunction SpaceTimeFunction::exp_of() const {
    SpaceTimeFunction out;
    auto v = value;
    auto vr = dr;
    auto vrr = drr;
    auto vt = dt;
    out.value = [v](double r, double t) { return std::exp(v(r, t)); };
    out.dr = [v, vr](double r, double t) { return std::exp(v(r, t)) * vr(r, t); };
    out.drr = [v, vr, vrr](double r, double t) {
        const double g = vr(r, t);
        return std::exp(v(r, t)) * (vrr(r, t) + g * g);
    };
    out.dt = [v, vt](double r, double t) { return std::exp(v(r, t)) * vt(r, t); };
    out.r_hi = r_hi;
    out.origin.kind = origin.kind;
    out.origin.gamma = origin.gamma;
    if (origin.kind == OriginRule::Kind::Power) {
        out.origin.coefficient = [v, c = origin.coefficient](double t) {
            return std::exp(v(0.0, t)) * c(t);
        };
    }
    return out;
}

SpaceTimeFunction SpaceTimeFunction::log_of() const {
    SpaceTimeFunction out;
    auto u = value;
    auto ur = dr;
    auto urr = drr;
    auto ut = dt;
    out.value = [u](double r, double t) { return std::log(u(r, t)); };
    out.dr = [u, ur](double r, double t) { return ur(r, t) / u(r, t); };
    out.drr = [u, ur, urr](double r, double t) {
        const double w = u(r, t);
        const double g = ur(r, t) / w;
        return urr(r, t) / w - g * g;
    };
    out.dt = [u, ut](double r, double t) { return ut(r, t) / u(r, t); };
    out.r_hi = r_hi;
    out.origin.kind = origin.kind;
    out.origin.gamma = origin.gamma;
    if (origin.kind == OriginRule::Kind::Power) {
        out.origin.coefficient = [u, c = origin.coefficient](double t) {
            return c(t) / u(0.0, t);
        };
    }
    return out;
}

SpaceTimeFunction SpaceTimeFunction::stationary(const RadialProfile& profile) {
    SpaceTimeFunction out;
    out.value = [f = profile.value](double r, double) { return f(r); };
    out.dr = [f = profile.d1](double r, double) { return f(r); };
    out.drr = [f = profile.d2](double r, double) { return f(r); };
    out.dt = [](double, double) { return 0.0; };
    out.r_hi = profile.hi;
    out.origin.kind = profile.origin.kind;
    out.origin.gamma = profile.origin.gamma;
    if (profile.origin.kind == OriginRule::Kind::Power) {
        out.origin.coefficient = [c = profile.origin.coefficient](double) { return c; };
    }
    return out;
}

}  // namespace trudlab
