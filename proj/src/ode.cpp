#include "trudlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "trudlab/errors.hpp"

namespace trudlab {

namespace odeint = boost::numeric::odeint;

OdeTrace integrate_dopri(const Rhs2& f, double r0, State2 y0, const std::vector<double>& outputs,
                         bool stop_on_zero, const OdeOptions& opt) {
    OdeTrace trace;
    if (outputs.empty()) return trace;
    trace.states.reserve(outputs.size());
    if (!(outputs.front() > r0) || !std::is_sorted(outputs.begin(), outputs.end())) {
        throw SolverError("ODE output points must increase past the start");
    }
    auto system = [&f](const State2& y, State2& dy, double r) { dy = f(r, y); };
    auto stepper = odeint::make_dense_output(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State2>());
    stepper.initialize(y0, r0, std::min(1e-3 * (outputs.back() - r0), outputs.front() - r0));

    std::size_t next = 0;
    State2 y{};
    while (next < outputs.size()) {
        if (trace.steps++ > opt.max_steps) {
            throw SolverError("ODE step budget exhausted at r = " + std::to_string(stepper.current_time()));
        }
        try {
            stepper.do_step(system);
        } catch (const std::exception& e) {
            throw SolverError(std::string("ODE step-size failure (") + e.what() +
                              "); last valid r = " + std::to_string(stepper.current_time()));
        }
        const double a = stepper.previous_time();
        const double b = stepper.current_time();
        const State2& ya = stepper.previous_state();
        const State2& yb = stepper.current_state();
        if (!std::isfinite(yb[0]) || !std::isfinite(yb[1])) {
            throw SolverError("ODE state not finite; last valid r = " + std::to_string(a));
        }
        if (b - a < opt.min_step * std::max(1.0, std::abs(a))) {
            throw SolverError("ODE step-size underflow; last valid r = " + std::to_string(a));
        }
        double stop = b;
        if (stop_on_zero && ((ya[0] > 0.0 && yb[0] <= 0.0) || (ya[0] < 0.0 && yb[0] >= 0.0))) {
            // Bisection on the dense-output interpolant of this step.
            const bool positive = ya[0] > 0.0;
            double lo = a, hi = b;
            for (int it = 0; it < 100 && hi > lo; ++it) {
                const double mid = 0.5 * (lo + hi);
                stepper.calc_state(mid, y);
                ((y[0] > 0.0) == positive ? lo : hi) = mid;
            }
            // The stepper may overshoot the last output; crossings past it are not reported.
            if (hi <= outputs.back()) {
                trace.zero = hi;
                stop = hi;
            }
        }
        for (; next < outputs.size() && outputs[next] <= b; ++next) {
            if (trace.zero && outputs[next] >= stop) break;
            stepper.calc_state(outputs[next], y);
            trace.states.push_back(y);
        }
        if (trace.zero) return trace;
    }
    return trace;
}

}  // namespace trudlab
