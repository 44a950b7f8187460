#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/model.hpp"
#include "biphoton/rng.hpp"
#include "biphoton/types.hpp"

namespace biphoton {

struct OutcomeCounts {
    std::int64_t n0 = 0;
    std::int64_t n1 = 0;
    std::int64_t n2 = 0;
    std::int64_t n_total = 0;
};

struct SpectralSample {
    double freq = 0.0;
    int outcome = 0;  // 0, 1 or 2
};
using SpectralRecord = std::vector<SpectralSample>;

// Monte Carlo MLE summary over repeated synthetic experiments.
struct EstimationReport {
    double tau_true = 0.0;
    double tau_hat_mean = 0.0;
    double tau_hat_std = 0.0;
    double crb_std = 0.0;  // 1/sqrt(n_pairs * F(tau_true))
    double saturation_ratio = 0.0;
    int n_trials = 0;
    std::int64_t n_pairs_per_trial = 0;
    std::uint64_t seed = 0;
    bool infinite_crb = false;
    int n_boundary_hits = 0;
};

inline OutcomeCounts sample_counts(const OutcomeTriple& triple, std::int64_t n_pairs,
                                   CounterRng& rng) {
    if (std::abs(triple.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("sample_counts: triple is not normalized, sum=" +
                                    std::to_string(triple.sum()));
    OutcomeCounts c;
    c.n_total = n_pairs;
    const double c0 = triple.p0;
    const double c1 = triple.p0 + triple.p1;
    for (std::int64_t i = 0; i < n_pairs; ++i) {
        const double u = rng.uniform();
        if (u < c0)
            ++c.n0;
        else if (u < c1)
            ++c.n1;
        else
            ++c.n2;
    }
    return c;
}

inline OutcomeCounts sample_counts(const OutcomeTriple& triple, std::int64_t n_pairs,
                                   std::uint64_t seed) {
    CounterRng rng(seed);
    return sample_counts(triple, n_pairs, rng);
}

// Draws (frequency, outcome) records: the frequency marginal is exactly the
// Gaussian envelope (the fringes cancel in the outcome sum), sampled through
// the inverse CDF; the outcome is then drawn from the conditional densities.
inline SpectralRecord sample_spectral(const ExperimentConfig& cfg, double tau,
                                      std::int64_t n_pairs, CounterRng& rng) {
    const auto [center, width] = spectral_marginal(cfg);
    SpectralRecord rec;
    rec.reserve(static_cast<std::size_t>(n_pairs));
    for (std::int64_t i = 0; i < n_pairs; ++i) {
        const double w = center + width * rng.normal();
        const auto d = spectral_density_sampling(cfg, tau, w);
        const double total = d.sum();
        const double u = rng.uniform() * total;
        int outcome = 2;
        if (u < d.d0)
            outcome = 0;
        else if (u < d.d0 + d.d1)
            outcome = 1;
        rec.push_back({w, outcome});
    }
    return rec;
}

inline SpectralRecord sample_spectral(const ExperimentConfig& cfg, double tau,
                                      std::int64_t n_pairs, std::uint64_t seed) {
    CounterRng rng(seed);
    return sample_spectral(cfg, tau, n_pairs, rng);
}

struct SearchWindow {
    double lo = 0.0;
    double hi = 0.0;
};

struct MleResult {
    double tau_hat = 0.0;
    double loglik = 0.0;
    bool on_boundary = false;
};

namespace detail {

inline double loglik_counts(const OutcomeCounts& c, const ExperimentConfig& cfg, double tau) {
    const OutcomeTriple p = outcome_probs(cfg, tau);
    double ll = 0.0;
    const auto add = [&](std::int64_t n, double prob) {
        if (n == 0) return;
        if (prob <= 0.0) {
            ll = -std::numeric_limits<double>::infinity();
            return;
        }
        ll += static_cast<double>(n) * std::log(prob);
    };
    add(c.n0, p.p0);
    add(c.n1, p.p1);
    add(c.n2, p.p2);
    return ll;
}

inline double loglik_spectral(const SpectralRecord& rec, const ExperimentConfig& cfg, double tau) {
    double ll = 0.0;
    for (const auto& s : rec) {
        const auto d = spectral_density_sampling(cfg, tau, s.freq);
        const double dens = s.outcome == 0 ? d.d0 : (s.outcome == 1 ? d.d1 : d.d2);
        if (dens <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += std::log(dens);
    }
    return ll;
}

// Coarse grid then golden-section refinement to 1e-10 of the window width.
template <class LogLik>
MleResult maximize_loglik(LogLik&& ll, const ExperimentConfig& cfg, SearchWindow window) {
    if (!(window.hi > window.lo)) throw std::invalid_argument("mle_tau: empty search window");
    const double width = window.hi - window.lo;
    double feature;  // scale of the finest likelihood structure
    if (cfg.interferometer == Interferometer::noon)
        feature = 2.0 * M_PI / cfg.spectral.omega_p;
    else
        feature = 1.0 / cfg.spectral.sigma_minus;
    const int points =
        std::max(41, static_cast<int>(std::ceil(40.0 * width / feature)) + 1);

    int best = 0;
    double best_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        grid[i] = window.lo + width * static_cast<double>(i) / (points - 1);
        const double v = ll(grid[i]);
        if (v > best_ll) {
            best_ll = v;
            best = i;
        }
    }

    double a = grid[std::max(0, best - 1)];
    double b = grid[std::min(points - 1, best + 1)];
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = ll(x1);
    double f2 = ll(x2);
    while (b - a > 1e-10 * width) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = ll(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = ll(x1);
        }
    }
    MleResult r;
    r.tau_hat = 0.5 * (a + b);
    r.loglik = ll(r.tau_hat);
    r.on_boundary = (r.tau_hat - window.lo) < 1e-9 * width || (window.hi - r.tau_hat) < 1e-9 * width;
    return r;
}

}  // namespace detail

inline MleResult mle_tau(const OutcomeCounts& counts, const ExperimentConfig& cfg,
                         SearchWindow window) {
    return detail::maximize_loglik(
        [&](double tau) { return detail::loglik_counts(counts, cfg, tau); }, cfg, window);
}

inline MleResult mle_tau(const SpectralRecord& record, const ExperimentConfig& cfg,
                         SearchWindow window) {
    return detail::maximize_loglik(
        [&](double tau) { return detail::loglik_spectral(record, cfg, tau); }, cfg, window);
}

// Default estimation windows. HOM likelihoods are even in tau, so estimation
// runs on tau >= 0; N00N likelihood maxima repeat every pi/omega_p, so the
// campaign window is one fringe period centered on the true delay.
inline SearchWindow default_campaign_window(const ExperimentConfig& cfg, double tau_true) {
    if (cfg.interferometer == Interferometer::hom)
        return {0.0, tau_true + 1.0 / cfg.spectral.sigma_minus};
    const double half = 0.5 * M_PI / cfg.spectral.omega_p;
    return {tau_true - half, tau_true + half};
}

// Repeated sample-and-estimate runs; deterministic given the seed (trial i
// uses the counter stream (seed, i)).
inline EstimationReport run_campaign(const ExperimentConfig& cfg, double tau_true, int n_trials,
                                     std::int64_t n_pairs, std::uint64_t seed) {
    if (n_trials < 2) throw std::invalid_argument("run_campaign: n_trials must be >= 2");
    const ExperimentConfig checked = validate(cfg);
    const SearchWindow window = default_campaign_window(checked, tau_true);

    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(n_trials));
    int boundary_hits = 0;
    for (int trial = 0; trial < n_trials; ++trial) {
        CounterRng rng(seed, static_cast<std::uint64_t>(trial) + 1);
        MleResult m;
        if (checked.detection == Detection::non_resolved) {
            const OutcomeTriple p = outcome_probs(checked, tau_true);
            const OutcomeCounts counts = sample_counts(p, n_pairs, rng);
            m = mle_tau(counts, checked, window);
        } else {
            const SpectralRecord rec = sample_spectral(checked, tau_true, n_pairs, rng);
            m = mle_tau(rec, checked, window);
        }
        if (m.on_boundary) ++boundary_hits;
        estimates.push_back(m.tau_hat);
    }

    double mean = 0.0;
    for (double t : estimates) mean += t;
    mean /= n_trials;
    double var = 0.0;
    for (double t : estimates) var += (t - mean) * (t - mean);
    var /= (n_trials - 1);

    EstimationReport rep;
    rep.tau_true = tau_true;
    rep.tau_hat_mean = mean;
    rep.tau_hat_std = std::sqrt(var);
    rep.n_trials = n_trials;
    rep.n_pairs_per_trial = n_pairs;
    rep.seed = seed;
    rep.n_boundary_hits = boundary_hits;

    const FisherResult fi = fisher_information(checked, tau_true);
    if (fi.value > 0.0) {
        rep.crb_std = 1.0 / std::sqrt(static_cast<double>(n_pairs) * fi.value);
        rep.saturation_ratio = rep.tau_hat_std / rep.crb_std;
    } else {
        rep.crb_std = std::numeric_limits<double>::infinity();
        rep.saturation_ratio = 0.0;
        rep.infinite_crb = true;
    }
    return rep;
}

}  // namespace biphoton
