#pragma once

#include <cstddef>
#include <vector>

namespace fracfront {

// A grid function u on a uniform window with analytic far-field states:
// u = left_state for x < x0, u = right_state past the last node.
struct Profile {
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> values{};
    double left_state = 1.0;
    double right_state = 0.0;
    double time = 0.0;
    bool monotone_decreasing = false;

    std::size_t size() const { return values.size(); }
    double x_at(std::ptrdiff_t i) const { return x0 + dx * static_cast<double>(i); }
    double x_last() const { return x_at(static_cast<std::ptrdiff_t>(values.size()) - 1); }

    // Clamps to the far-field states outside the stored window.
    double u_at(std::ptrdiff_t i) const {
        if (i < 0) return left_state;
        if (i >= static_cast<std::ptrdiff_t>(values.size())) return right_state;
        return values[static_cast<std::size_t>(i)];
    }

    bool is_monotone(double tol = 1e-10) const;

    // Checks the range bound, the monotone flag when set, and window
    // adequacy (edge values within edge_tol of their states). Throws
    // InvariantError. Accelerating runs relax edge_tol: algebraic tails
    // keep the stored edges visibly away from the far-field states at any
    // affordable window size.
    void validate(double edge_tol = 1e-3) const;
};

}  // namespace fracfront
