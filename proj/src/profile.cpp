#include "fracfront/profile.hpp"

#include <cmath>
#include <string>

#include "fracfront/errors.hpp"

namespace fracfront {

bool Profile::is_monotone(double tol) const {
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i + 1] > values[i] + tol) return false;
    return true;
}

void Profile::validate(double edge_tol) const {
    if (values.size() < 4) throw InvariantError("profile: need at least 4 nodes");
    if (!(dx > 0.0)) throw InvariantError("profile: dx must be positive");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!(v >= -1e-8) || !(v <= 1.0 + 1e-8))
            throw InvariantError("profile: value out of [0,1] at node " + std::to_string(i) +
                                 " (u = " + std::to_string(v) + ")");
    }
    if (monotone_decreasing && !is_monotone())
        throw InvariantError("profile: monotone flag set but values increase");
    if (std::abs(values.front() - left_state) > edge_tol)
        throw InvariantError("profile: window inadequate on the left (first value far from state)");
    if (std::abs(values.back() - right_state) > edge_tol)
        throw InvariantError("profile: window inadequate on the right (last value far from state)");
}

}  // namespace fracfront
