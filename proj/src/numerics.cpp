#include "fracfront/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "fracfront/errors.hpp"

namespace fracfront {

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError("logspace: need 0 < lo < hi");
    if (n < 2) throw DomainError("logspace: need n >= 2");
    std::vector<double> out(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("fit_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::atomic<std::size_t> next{0};
    const std::size_t chunk = std::max<std::size_t>(1, n / (threads * 8));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= n) return;
                const std::size_t end = std::min(n, begin + chunk);
                for (std::size_t i = begin; i < end; ++i) body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

unsigned default_threads() {
    unsigned h = std::thread::hardware_concurrency();
    if (h == 0) h = 1;
    return std::min(h, 16u);
}

}  // namespace fracfront
