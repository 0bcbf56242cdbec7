#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trudlab/exponent.hpp"

namespace trudlab {

/// Uniform nodes r_i = i * h on [0, R], i = 0..intervals.
struct RadialGrid {
    double R = 1.0;
    std::size_t intervals = 1;

    double h() const { return R / static_cast<double>(intervals); }
    std::size_t nodes() const { return intervals + 1; }
    double r(std::size_t i) const { return static_cast<double>(i) * h(); }
};

/// Values u(r_i, t_j) stored as values[j][i].
struct SpaceTimeField {
    RadialGrid grid;
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    Exponent p = Exponent::finite(2.0);
    int n = 2;
    std::string scheme;

    std::size_t levels() const { return times.size(); }
    /// sup over r of u(., t_j).
    double sup_at(std::size_t j) const;
    double inf_at(std::size_t j) const;
};

}  // namespace trudlab
