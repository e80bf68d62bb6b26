#include "fracfront/nonlocal_operator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "fracfront/errors.hpp"
#include "fracfront/numerics.hpp"
#include "fracfront/quadrature.hpp"

namespace fracfront {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cubic Lagrange weights at fraction t in [0, 1] for nodes {-1, 0, 1, 2}.
inline void cubic_weights(double t, double w[4]) {
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) * 0.5;
    w[2] = -(t + 1.0) * t * (t - 2.0) * 0.5;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
}

// Near-zone integral Integral_0^{K dx} D2(z) J(z) dz for u given by node
// values through `u_off` (offset relative to the evaluation node).
// Cell 0 uses an even z^2/z^4 fit against exact kernel moments (the
// symmetrized difference is even in z, so odd moments - divergent for
// s = 1/2 - never enter). Cells 1..K-1 use fixed GK15 panels.
double near_integral(const KernelSpec& spec, double dx, int K,
                     const std::function<double(int)>& u_off) {
    auto d2 = [&](double z) {
        int k = std::min(static_cast<int>(z / dx), K - 1);
        const double t = z / dx - k;
        double w[4];
        cubic_weights(t, w);
        double up = 0.0, um = 0.0;
        for (int m = 0; m < 4; ++m) {
            up += w[m] * u_off(k + m - 1);
            um += w[m] * u_off(-(k + m - 1));
        }
        return up + um - 2.0 * u_off(0);
    };

    const double h = dx;
    const double d_half = d2(0.5 * h);
    const double d_full = d2(h);
    const double b2 = (16.0 * d_half - d_full) / (3.0 * h * h);
    const double b4 = (d_full - b2 * h * h) / (h * h * h * h);
    double value = b2 * partial_moment(spec, 2, 0.0, h) + b4 * partial_moment(spec, 4, 0.0, h);

    if (K > 1) {
        std::vector<double> kinks;
        if (spec.family == KernelFamily::TruncatedPowerTail) kinks.push_back(1.0);
        if (spec.family == KernelFamily::TabulatedSymmetric) {
            for (const auto& r : spec.table)
                if (r.first > 0.0) kinks.push_back(r.first);
        }
        auto f = [&](double z) { return d2(z) * eval_kernel(spec, z); };
        for (int k = 1; k < K; ++k) {
            const double a = k * h, b = (k + 1) * h;
            std::vector<double> edges{a};
            for (double kk : kinks)
                if (kk > a && kk < b) edges.push_back(kk);
            edges.push_back(b);
            std::sort(edges.begin(), edges.end());
            for (std::size_t e = 0; e + 1 < edges.size(); ++e)
                value += quad::gk15(f, edges[e], edges[e + 1]).value;
        }
    }
    return value;
}

}  // namespace

OperatorPlan::OperatorPlan(KernelSpec spec, double dx) : spec_(std::move(spec)), dx_(dx) {
    spec_.validate();
    if (!(dx > 0.0)) throw DomainError("operator: dx must be positive");
    K_ = std::clamp(static_cast<int>(1.0 / dx + 1e-9), 1, 8);

    // Probe unit vectors to turn the near-zone machinery into a stencil.
    const int P = K_ + 1;
    near_stencil_.assign(2 * P + 1, 0.0);
    for (int j = -P; j <= P; ++j) {
        auto unit = [j](int off) { return off == j ? 1.0 : 0.0; };
        near_stencil_[j + P] = near_integral(spec_, dx_, K_, unit);
    }
    // Re-derive the center weight so constants are annihilated exactly.
    double off_sum = 0.0;
    for (int j = -P; j <= P; ++j)
        if (j != 0) off_sum += near_stencil_[j + P];
    near_stencil_[P] = -off_sum;
}

void OperatorPlan::ensure_table(std::size_t n) const {
    if (J_.size() >= n) return;
    const std::size_t old = J_.size();
    J_.resize(n);
    Jsum_.resize(n);
    for (std::size_t k = std::max<std::size_t>(old, 1); k < n; ++k)
        J_[k] = eval_kernel(spec_, static_cast<double>(k) * dx_);
    const std::size_t K = static_cast<std::size_t>(K_);
    for (std::size_t k = std::max<std::size_t>(old, 1); k < n; ++k)
        Jsum_[k] = (k < K) ? 0.0 : (k == K ? J_[k] : Jsum_[k - 1] + J_[k]);
}

double OperatorPlan::tail_mass(double Z) const { return partial_moment(spec_, 0, Z, kInf); }

double OperatorPlan::apply_padded(const std::vector<double>& padded, const Profile& p,
                                  std::size_t i) const {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(p.values.size());
    const std::ptrdiff_t K = K_;
    const int P = K_ + 1;
    const double* u = padded.data() + P;
    const std::ptrdiff_t ii = static_cast<std::ptrdiff_t>(i);
    const double ui = u[ii];

    double near = 0.0;
    for (int j = -P; j <= P; ++j)
        if (j != 0) near += near_stencil_[j + P] * (u[ii + j] - ui);

    const std::ptrdiff_t KL = ii;
    const std::ptrdiff_t KR = n - 1 - ii;
    const std::ptrdiff_t ksym = std::min(KL, KR);

    double acc = 0.0;
    for (std::ptrdiff_t k = K; k <= ksym; ++k)
        acc += J_[k] * ((u[ii - k] - ui) + (u[ii + k] - ui));
    if (KR > ksym)
        for (std::ptrdiff_t k = std::max(K, ksym + 1); k <= KR; ++k)
            acc += J_[k] * (u[ii + k] - ui);
    if (KL > ksym)
        for (std::ptrdiff_t k = std::max(K, ksym + 1); k <= KL; ++k)
            acc += J_[k] * (u[ii - k] - ui);

    double mid = dx_ * acc;
    // trapezoid endpoint half-weights
    if (KR >= K)
        mid -= 0.5 * dx_ * (J_[K] * (u[ii + K] - ui) + J_[KR] * (u[ii + KR] - ui));
    if (KL >= K)
        mid -= 0.5 * dx_ * (J_[K] * (u[ii - K] - ui) + J_[KL] * (u[ii - KL] - ui));

    const double zr = static_cast<double>(std::max(KR, K)) * dx_;
    const double zl = static_cast<double>(std::max(KL, K)) * dx_;
    const double tail =
        (p.right_state - ui) * tail_mass(zr) + (p.left_state - ui) * tail_mass(zl);

    return near + mid + tail;
}

double OperatorPlan::apply(const Profile& p, std::size_t i) const {
    if (i >= p.values.size()) throw DomainError("operator apply: index out of range");
    p.validate(relaxed_window_ ? 1e300 : 1e-3);
    if ((static_cast<double>(p.values.size()) - 1.0) * dx_ < 2.0 * spec_.R0)
        throw ConfigError("window", "window too small relative to R0");
    ensure_table(p.values.size());
    const int P = K_ + 1;
    std::vector<double> padded(p.values.size() + 2 * P);
    std::fill(padded.begin(), padded.begin() + P, p.left_state);
    std::copy(p.values.begin(), p.values.end(), padded.begin() + P);
    std::fill(padded.end() - P, padded.end(), p.right_state);
    return apply_padded(padded, p, i);
}

void OperatorPlan::apply_all(const Profile& p, std::vector<double>& out, unsigned threads) const {
    p.validate(relaxed_window_ ? 1e300 : 1e-3);
    if ((static_cast<double>(p.values.size()) - 1.0) * dx_ < 2.0 * spec_.R0)
        throw ConfigError("window", "window too small relative to R0");
    const std::size_t n = p.values.size();
    ensure_table(n);
    const int P = K_ + 1;
    std::vector<double> padded(n + 2 * P);
    std::fill(padded.begin(), padded.begin() + P, p.left_state);
    std::copy(p.values.begin(), p.values.end(), padded.begin() + P);
    std::fill(padded.end() - P, padded.end(), p.right_state);

    out.resize(n);
    parallel_for(n, threads, [&](std::size_t i) { out[i] = apply_padded(padded, p, i); });
}

double OperatorPlan::diagonal_bound() const {
    const int P = K_ + 1;
    double near_diag = std::abs(near_stencil_[P]);
    const double zK = static_cast<double>(K_) * dx_;
    return near_diag + 2.0 * (tail_mass(zK) + dx_ * eval_kernel(spec_, zK));
}

double apply(const KernelSpec& spec, const Profile& p, std::size_t i) {
    OperatorPlan plan(spec, p.dx);
    return plan.apply(p, i);
}

std::vector<double> apply_all(const KernelSpec& spec, const Profile& p, unsigned threads) {
    OperatorPlan plan(spec, p.dx);
    std::vector<double> out;
    plan.apply_all(p, out, threads);
    return out;
}

}  // namespace fracfront
