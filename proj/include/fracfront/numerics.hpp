#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace fracfront {

// n log-spaced points on [lo, hi], lo > 0, n >= 2, endpoints exact.
std::vector<double> logspace(double lo, double hi, std::size_t n);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

// Least-squares line through (x_i, y_i).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// parallel_for(n, threads, body): body(i) for i in [0, n), split across
// `threads` std::threads (<=1 or n small runs inline).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

// Hardware thread count clamped to [1, 16].
unsigned default_threads();

// Deterministic xorshift generator for property-style test sweeps.
class XorShift64 {
  public:
    explicit XorShift64(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }
    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  private:
    std::uint64_t state_;
};

}  // namespace fracfront
