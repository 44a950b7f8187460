#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "biphoton/types.hpp"

namespace biphoton {

// Gauss-Hermite rule in the physicists' convention: integrates f against
// e^{-x^2} on (-inf, inf); the weights sum to sqrt(pi).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;
};

// Nodes and weights by Newton iteration on the orthonormal Hermite recurrence.
// Deterministic; valid for 2 <= order <= 200.
inline GaussHermiteRule gauss_hermite_rule(int order) {
    if (order < 2 || order > 200)
        throw std::invalid_argument("gauss_hermite_rule: order must lie in [2,200], got " +
                                    std::to_string(order));
    const int n = order;
    GaussHermiteRule rule;
    rule.order = n;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    const int m = (n + 1) / 2;
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    double z = 0.0;
    double dpn = 0.0;
    for (int i = 0; i < m; ++i) {
        // Initial guesses for the roots, largest first.
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * rule.nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * rule.nodes[1];
        else
            z = 2.0 * z - rule.nodes[i - 2];

        for (int it = 0; it < 200; ++it) {
            // Orthonormal recurrence: p_j(z) = z sqrt(2/j) p_{j-1} - sqrt((j-1)/j) p_{j-2}.
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            dpn = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / dpn;
            if (std::abs(z - z1) <= 1e-14 * std::max(1.0, std::abs(z))) break;
        }
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (dpn * dpn);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    if (n % 2 == 1) rule.nodes[m - 1] = 0.0;  // middle root is exactly zero by symmetry
    return rule;
}

namespace detail {
inline const GaussHermiteRule& cached_gauss_hermite_rule(int order) {
    static std::map<int, GaussHermiteRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, gauss_hermite_rule(order)).first;
    return it->second;
}
}  // namespace detail

// Average of f(eps, theta) over the factorized Gaussian noise law with RMS
// strengths (eta_eps, eta_theta), via tensor-product Gauss-Hermite after the
// change of variables eps = sqrt(2) eta_eps x, theta = sqrt(2) eta_theta y.
// Collapses to 1-D or the bare value f(0,0) when a strength is zero.
template <class F>
double average_over_noise(F&& f, const NoiseParams& noise, int order = 64) {
    if (order < 2) throw std::invalid_argument("average_over_noise: order must be >= 2");
    constexpr double inv_sqrt_pi = 0.5641895835477563;
    const double se = std::sqrt(2.0) * noise.eta_eps;
    const double st = std::sqrt(2.0) * noise.eta_theta;

    const auto check = [](double v, double eps, double theta) {
        if (!std::isfinite(v))
            throw std::domain_error("average_over_noise: non-finite sample at eps=" +
                                    std::to_string(eps) + ", theta=" + std::to_string(theta));
        return v;
    };

    if (noise.eta_eps == 0.0 && noise.eta_theta == 0.0) return check(f(0.0, 0.0), 0.0, 0.0);

    const GaussHermiteRule& rule = detail::cached_gauss_hermite_rule(order);
    if (noise.eta_theta == 0.0) {
        double acc = 0.0;
        for (int i = 0; i < rule.order; ++i) {
            const double eps = se * rule.nodes[i];
            acc += rule.weights[i] * check(f(eps, 0.0), eps, 0.0);
        }
        return acc * inv_sqrt_pi;
    }
    if (noise.eta_eps == 0.0) {
        double acc = 0.0;
        for (int j = 0; j < rule.order; ++j) {
            const double theta = st * rule.nodes[j];
            acc += rule.weights[j] * check(f(0.0, theta), 0.0, theta);
        }
        return acc * inv_sqrt_pi;
    }
    double acc = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double eps = se * rule.nodes[i];
        double inner = 0.0;
        for (int j = 0; j < rule.order; ++j) {
            const double theta = st * rule.nodes[j];
            inner += rule.weights[j] * check(f(eps, theta), eps, theta);
        }
        acc += rule.weights[i] * inner;
    }
    return acc * inv_sqrt_pi * inv_sqrt_pi;
}

// Noise average applied componentwise to an outcome-triple model.
template <class Model>
OutcomeTriple average_triple_over_noise(Model&& model, const NoiseParams& noise, int order = 64) {
    OutcomeTriple t;
    t.p0 = average_over_noise(
        [&](double e, double th) { return model(NoiseRealization{e, th}).p0; }, noise, order);
    t.p1 = average_over_noise(
        [&](double e, double th) { return model(NoiseRealization{e, th}).p1; }, noise, order);
    t.p2 = average_over_noise(
        [&](double e, double th) { return model(NoiseRealization{e, th}).p2; }, noise, order);
    return t;
}

}  // namespace biphoton
