#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace trudlab {

using State2 = std::array<double, 2>;
using Rhs2 = std::function<State2(double, const State2&)>;

struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    /// Minimum step relative to max(1, |r|) before reporting underflow.
    double min_step = 1e-15;
    std::size_t max_steps = 10'000'000;
};

struct OdeTrace {
    /// States at the requested output points that were reached.
    std::vector<State2> states;
    /// First r where y[0] changes sign, if stop_on_zero was set and it happened.
    std::optional<double> zero;
    std::size_t steps = 0;
};

/// Adaptive Dormand-Prince 5(4) (Boost.odeint dense output) for a 2-component system.
/// States at the output points (sorted, > r0) come from the dense-output interpolant.
/// With stop_on_zero the run ends in the step where y[0] first changes sign;
/// the crossing is located by bisection on that step's interpolant.
/// Throws SolverError on step-size underflow, reporting the last valid r.
OdeTrace integrate_dopri(const Rhs2& f, double r0, State2 y0, const std::vector<double>& outputs,
                         bool stop_on_zero, const OdeOptions& options = {});

}  // namespace trudlab
