#pragma once

#include <random>
#include <stdexcept>

#include "floq/dual_cocycle.hpp"
#include "floq/state_space.hpp"

namespace floq::testing {

inline StateVector random_state(const GridSpec& g, std::mt19937_64& rng,
                                bool strictly_positive) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    StateVector u = zero_state(g);
    auto draw = [&] {
        const double x = unit(rng);
        return strictly_positive ? 0.1 + 0.9 * x : x - 0.5;
    };
    u.head = draw();
    for (double& t : u.tail) t = draw();
    return u;
}

inline DualVector random_dual(const GridSpec& g, std::mt19937_64& rng,
                              bool strictly_positive = true) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DualVector v = zero_dual(g);
    auto draw = [&] {
        const double x = unit(rng);
        return strictly_positive ? 0.1 + 0.9 * x : x - 0.5;
    };
    v.head = draw();
    for (double& t : v.tail) t = draw();
    return v;
}

inline StateVector unit_state(const StateVector& u, const GridSpec& g) {
    return scaled(u, 1.0 / norm_x(u, g));
}

} // namespace floq::testing
