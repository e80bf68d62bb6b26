#include "fracfront/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fracfront/errors.hpp"

namespace fracfront::quad {

namespace {

// QUADPACK dqk15 abscissae/weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace

Result gk15(const Fn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fv[15];
    const double fc = f(c);
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv[j] = f(c - dx);
        fv[14 - j] = f(c + dx);
    }

    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double sum = fv[j] + fv[14 - j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

    resk *= h;
    resg *= h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);

    double err = std::abs(resk - resg);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps_floor = 50.0 * 2.220446049250313e-16 * resabs;
    err = std::max(err, eps_floor);

    return {resk, err, 15};
}

namespace {

Result integrate_impl(const Fn& f, double a, double b, const Options& opt, bool throw_on_budget) {
    if (a == b) return {0.0, 0.0, 0};

    std::vector<double> edges{a};
    for (double s : opt.split_points)
        if (s > a && s < b) edges.push_back(s);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0;
    std::size_t evals = 0, n_panels = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Result r = gk15(f, edges[i], edges[i + 1]);
        evals += r.evals;
        ++n_panels;
        heap.push({edges[i], edges[i + 1], r.value, r.error});
        total += r.value;
        total_err += r.error;
    }

    auto tol = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };

    while (total_err > tol() && n_panels < opt.max_panels) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);  // interval at round-off resolution
            break;
        }
        Result rl = gk15(f, worst.a, mid);
        Result rr = gk15(f, mid, worst.b);
        evals += rl.evals + rr.evals;
        ++n_panels;
        total += rl.value + rr.value - worst.value;
        total_err += rl.error + rr.error - worst.error;
        heap.push({worst.a, mid, rl.value, rl.error});
        heap.push({mid, worst.b, rr.value, rr.error});
    }

    // Recompute the error sum from the heap to avoid drift.
    double err = 0.0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            err += copy.top().error;
            copy.pop();
        }
    }

    if (throw_on_budget && err > tol())
        throw ToleranceError("adaptive quadrature: panel budget exhausted", total, err);
    return {total, err, evals};
}

}  // namespace

Result integrate(const Fn& f, double a, double b, const Options& opt) {
    return integrate_impl(f, a, b, opt, true);
}

Result integrate_lenient(const Fn& f, double a, double b, const Options& opt) {
    return integrate_impl(f, a, b, opt, false);
}

Result integrate_log(const Fn& f, double a, double b, const Options& opt) {
    if (!(a > 0.0) || !(b > a)) throw DomainError("integrate_log: need 0 < a < b");
    Options lopt = opt;
    lopt.split_points.clear();
    for (double s : opt.split_points)
        if (s > a && s < b) lopt.split_points.push_back(std::log(s));
    auto g = [&f](double v) {
        const double z = std::exp(v);
        return f(z) * z;
    };
    return integrate_impl(g, std::log(a), std::log(b), lopt, true);
}

namespace {

// ∫_a^b p(xi) cos(omega xi) dxi for the cubic p through (x_i, y_i),
// by two integrations by parts (exact for cubics).
double cubic_cos_integral(const double x[4], const double y[4], double omega) {
    // Newton -> monomial coefficients of p about x[0].
    double d01 = (y[1] - y[0]) / (x[1] - x[0]);
    double d12 = (y[2] - y[1]) / (x[2] - x[1]);
    double d23 = (y[3] - y[2]) / (x[3] - x[2]);
    double d012 = (d12 - d01) / (x[2] - x[0]);
    double d123 = (d23 - d12) / (x[3] - x[1]);
    double d0123 = (d123 - d012) / (x[3] - x[0]);

    const double t1 = x[1] - x[0], t2 = x[2] - x[0];
    // p(u) = c0 + c1 u + c2 u^2 + c3 u^3, u = xi - x[0]
    const double c3 = d0123;
    const double c2 = d012 - d0123 * (t1 + t2);
    const double c1 = d01 - d012 * t1 + d0123 * t1 * t2;
    const double c0 = y[0];

    const double L = x[3] - x[0];
    auto p = [&](double u) { return ((c3 * u + c2) * u + c1) * u + c0; };
    auto dp = [&](double u) { return (3.0 * c3 * u + 2.0 * c2) * u + c1; };
    auto d2p = [&](double u) { return 6.0 * c3 * u + 2.0 * c2; };

    const double w = omega;
    const double phase0 = w * x[0], phase1 = w * x[3];
    const double s0 = std::sin(phase0), c0s = std::cos(phase0);
    const double s1 = std::sin(phase1), c1s = std::cos(phase1);

    // ∫ p cos(w xi) dxi = [p sin/w + p' cos/w^2 - p'' sin/w^3 - p''' cos/w^4]
    const double w2 = w * w, w3 = w2 * w, w4 = w3 * w;
    double upper = p(L) * s1 / w + dp(L) * c1s / w2 - d2p(L) * s1 / w3 - 6.0 * c3 * c1s / w4;
    double lower = p(0.0) * s0 / w + dp(0.0) * c0s / w2 - d2p(0.0) * s0 / w3 - 6.0 * c3 * c0s / w4;
    return upper - lower;
}

struct OscPanel {
    double a, b;
    double value;
    double error;
    bool operator<(const OscPanel& o) const { return error < o.error; }
};

}  // namespace

Result oscillatory_cos(const Fn& F, double a, double b, double omega,
                       double abs_tol, double first, std::size_t max_panels,
                       const std::vector<double>& splits) {
    if (b <= a) return {0.0, 0.0, 0};
    omega = std::abs(omega);

    std::size_t evals = 0;

    auto panel_value = [&](double pa, double pb) -> double {
        const double h = pb - pa;
        if (omega * h < 0.5) {
            Result r = gk15([&](double xi) { return F(xi) * std::cos(omega * xi); }, pa, pb);
            evals += r.evals;
            return r.value;
        }
        double xs[4], ys[4];
        for (int j = 0; j < 4; ++j) {
            xs[j] = pa + h * j / 3.0;
            ys[j] = F(xs[j]);
        }
        evals += 4;
        return cubic_cos_integral(xs, ys, omega);
    };

    auto panel_with_error = [&](double pa, double pb) -> OscPanel {
        const double whole = panel_value(pa, pb);
        const double mid = 0.5 * (pa + pb);
        const double halves = panel_value(pa, mid) + panel_value(mid, pb);
        return {pa, pb, halves, std::abs(halves - whole)};
    };

    // Geometric initial partition resolves an endpoint kink of F at a.
    std::vector<double> edges{a};
    double step = std::max(first, (b - a) * 1e-12);
    double x = a;
    while (x + step < b) {
        x += step;
        edges.push_back(x);
        step *= 2.0;
        if (edges.size() > 200) break;
    }
    edges.push_back(b);
    for (double s : splits)
        if (s > a && s < b) edges.push_back(s);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<OscPanel> heap;
    double total = 0.0;
    std::size_t n_panels = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        OscPanel p = panel_with_error(edges[i], edges[i + 1]);
        total += p.value;
        heap.push(p);
        ++n_panels;
    }

    auto err_sum = [&heap] {
        double e = 0.0;
        auto c = heap;
        while (!c.empty()) {
            e += c.top().error;
            c.pop();
        }
        return e;
    };

    double err = err_sum();
    while (err > abs_tol && n_panels < max_panels) {
        OscPanel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);
            break;
        }
        OscPanel pl = panel_with_error(worst.a, mid);
        OscPanel pr = panel_with_error(mid, worst.b);
        total += pl.value + pr.value - worst.value;
        err += pl.error + pr.error - worst.error;
        heap.push(pl);
        heap.push(pr);
        ++n_panels;
    }

    return {total, err_sum(), evals};
}

}  // namespace fracfront::quad
