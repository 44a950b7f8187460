#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <utility>
#include <vector>

namespace biphoton {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int initial_panels = 1;   // seed panels; callers raise this for oscillatory integrands
    int max_depth = 26;       // per-panel bisection limit
    long max_evaluations = 4000000;
};

struct QuadratureResult {
    double value = 0.0;
    double err_estimate = 0.0;
    bool converged = true;
    double achieved_rel_tol = 0.0;
    long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1]; positive abscissae, center last.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839998060075660, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// 7-point Gauss weights, paired with nodes 1, 3, 5 and the center.
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = kGk15Weights[7] * fc;
    double gauss = kG7Weights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGk15Nodes[i];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kGk15Weights[i] * fsum;
        if (i % 2 == 1) gauss += kG7Weights[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

struct Panel {
    double a, b, value, err;
    int depth;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.a > y.a;  // deterministic tie-break
    }
};

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration on [a,b]: worst-panel-first
// bisection until the accumulated error estimate meets the tolerance.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, QuadratureOptions opt = {}) {
    QuadratureResult res;
    if (a == b) return res;

    const int n0 = std::max(1, opt.initial_panels);
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse> active;
    double total_v = 0.0;
    double total_e = 0.0;
    double done_v = 0.0;  // panels at max depth, no longer refinable
    double done_e = 0.0;
    const double w = (b - a) / n0;
    for (int i = 0; i < n0; ++i) {
        const double pa = a + i * w;
        const double pb = (i == n0 - 1) ? b : a + (i + 1) * w;
        auto [v, e] = detail::gk15(f, pa, pb);
        res.evaluations += 15;
        active.push({pa, pb, v, e, 0});
        total_v += v;
        total_e += e;
    }

    const auto target = [&]() {
        return std::max(opt.abs_tol, opt.rel_tol * std::abs(total_v + done_v));
    };

    while (total_e + done_e > target() && !active.empty() && res.evaluations < opt.max_evaluations) {
        detail::Panel p = active.top();
        active.pop();
        if (p.depth >= opt.max_depth) {
            total_v -= p.value;
            total_e -= p.err;
            done_v += p.value;
            done_e += p.err;
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        auto [vl, el] = detail::gk15(f, p.a, mid);
        auto [vr, er] = detail::gk15(f, mid, p.b);
        res.evaluations += 30;
        total_v += vl + vr - p.value;
        total_e += el + er - p.err;
        active.push({p.a, mid, vl, el, p.depth + 1});
        active.push({mid, p.b, vr, er, p.depth + 1});
    }

    res.value = total_v + done_v;
    res.err_estimate = total_e + done_e;
    res.converged = res.err_estimate <= std::max(target(), 1e-300);
    res.achieved_rel_tol =
        std::abs(res.value) > 0.0 ? res.err_estimate / std::abs(res.value) : res.err_estimate;
    return res;
}

// Initial panel count for integrands carrying a cos(omega*tau) fringe on
// [a,b]: a few panels per oscillation so the first pass resolves the phase.
inline int oscillation_panels(double a, double b, double tau) {
    const double cycles = std::abs(tau) * (b - a) / (2.0 * 3.141592653589793);
    const double panels = 4.0 * cycles;
    return static_cast<int>(std::clamp(panels, 8.0, 4000.0));
}

}  // namespace biphoton
