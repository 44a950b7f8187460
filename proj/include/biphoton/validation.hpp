#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "biphoton/fisher.hpp"
#include "biphoton/gauss_hermite.hpp"
#include "biphoton/model.hpp"
#include "biphoton/quadrature.hpp"
#include "biphoton/rng.hpp"
#include "biphoton/types.hpp"

namespace biphoton {

// Self-contained cross-validation of the closed forms against the
// independent numerical oracles (Gauss-Hermite noise averaging, adaptive
// frequency quadrature, finite differences). Exposed through the `validate`
// CLI subcommand and reused by the acceptance suite.

struct ValidationOptions {
    int normalization_draws = 1000;
    int oracle_draws = 200;
    int fisher_draws = 200;
    int gh_order_low = 64;
    int gh_order_high = 96;
    std::uint64_t seed = 7;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;      // worst observed deviation
    double threshold = 0.0;  // allowed deviation
};

namespace validation_detail {

// Random scenario in pump units (omega_p = 1), covering the figure ranges.
struct Scenario {
    ChannelParams channel;
    SpectralParams spectral;
    NoiseParams noise;
    double tau;
};

inline Scenario draw_scenario(CounterRng& rng) {
    Scenario s;
    s.spectral.omega_p = 1.0;
    s.spectral.sigma_minus = 0.005 + 0.045 * rng.uniform();
    s.spectral.sigma_plus = 0.005 + 0.045 * rng.uniform();
    s.channel.gamma = 0.8 * rng.uniform();
    s.channel.visibility = 0.1 + 0.9 * rng.uniform();
    s.noise.eta_eps = 3.0 * rng.uniform();
    s.noise.eta_theta = 1.5 * rng.uniform();
    // log-uniform over omega_p*tau in [0.5, 400]
    s.tau = 0.5 * std::exp(std::log(800.0) * rng.uniform());
    return s;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

inline void track(CheckResult& c, double dev) { c.worst = std::max(c.worst, dev); }

}  // namespace validation_detail

// Non-resolved triples sum to one; resolved densities integrate to the model
// convention totals (1 for N00N, 2 for HOM).
inline std::vector<CheckResult> check_normalization(const ValidationOptions& opt) {
    using namespace validation_detail;
    CheckResult sums{"nonresolved triple sums to 1", false, 0.0, 1e-12};
    CheckResult hom_norm{"resolved HOM integrates to 2", false, 0.0, 1e-8};
    CheckResult noon_norm{"resolved N00N integrates to 1", false, 0.0, 1e-8};
    CounterRng rng(opt.seed, 1);
    for (int i = 0; i < opt.normalization_draws; ++i) {
        const Scenario s = draw_scenario(rng);
        const NoiseRealization nr{(rng.uniform() - 0.5) * 6.0 * (s.noise.eta_eps + 0.1),
                                  (rng.uniform() - 0.5) * 6.0 * (s.noise.eta_theta + 0.1)};
        track(sums, std::abs(
                        hom_probs_noisy(s.tau, s.channel, s.spectral, s.noise).sum() - 1.0));
        track(sums, std::abs(
                        noon_probs_noisy(s.tau, s.channel, s.spectral, s.noise).sum() - 1.0));
        track(sums, std::abs(
                        hom_probs_noiseless(s.tau, nr, s.channel, s.spectral).sum() - 1.0));
        track(sums, std::abs(
                        noon_probs_noiseless(s.tau, nr, s.channel, s.spectral).sum() - 1.0));

        QuadratureOptions q;
        q.rel_tol = 1e-10;
        const double ch = 16.0 * s.spectral.sigma_minus;
        q.initial_panels = oscillation_panels(-ch, ch, s.tau);
        const auto hom_total = integrate_adaptive(
            [&](double w) {
                return hom_resolved_density_noisy(s.tau, w, s.channel, s.spectral, s.noise).sum();
            },
            -ch, ch, q);
        track(hom_norm, std::abs(hom_total.value - 2.0));

        const double lo = s.spectral.omega_p - 16.0 * s.spectral.sigma_plus;
        const double hi = s.spectral.omega_p + 16.0 * s.spectral.sigma_plus;
        q.initial_panels = oscillation_panels(lo, hi, s.tau);
        const auto noon_total = integrate_adaptive(
            [&](double w) {
                return noon_resolved_density_noisy(s.tau, w, s.channel, s.spectral, s.noise).sum();
            },
            lo, hi, q);
        track(noon_norm, std::abs(noon_total.value - 1.0));
    }
    sums.pass = sums.worst <= sums.threshold;
    hom_norm.pass = hom_norm.worst <= hom_norm.threshold;
    noon_norm.pass = noon_norm.worst <= noon_norm.threshold;
    return {sums, hom_norm, noon_norm};
}

// Noise-averaged closed forms against Gauss-Hermite averaging of the
// fixed-realization forms, with two quadrature orders required to agree.
inline std::vector<CheckResult> check_noise_oracle(const ValidationOptions& opt) {
    using namespace validation_detail;
    CheckResult closed{"closed forms match Gauss-Hermite noise average", false, 0.0, 1e-8};
    CheckResult orders{"Gauss-Hermite orders agree", false, 0.0, 1e-10};
    CounterRng rng(opt.seed, 2);
    for (int i = 0; i < opt.oracle_draws; ++i) {
        const Scenario s = draw_scenario(rng);

        const auto compare_triple = [&](const OutcomeTriple& closed_form, auto&& model) {
            const OutcomeTriple lo = average_triple_over_noise(model, s.noise, opt.gh_order_low);
            const OutcomeTriple hi = average_triple_over_noise(model, s.noise, opt.gh_order_high);
            track(orders, std::abs(lo.p0 - hi.p0));
            track(orders, std::abs(lo.p1 - hi.p1));
            track(orders, std::abs(lo.p2 - hi.p2));
            track(closed, rel_diff(closed_form.p0, hi.p0));
            track(closed, rel_diff(closed_form.p1, hi.p1));
            track(closed, rel_diff(closed_form.p2, hi.p2));
        };

        compare_triple(hom_probs_noisy(s.tau, s.channel, s.spectral, s.noise),
                       [&](const NoiseRealization& nr) {
                           return hom_probs_noiseless(s.tau, nr, s.channel, s.spectral);
                       });
        compare_triple(noon_probs_noisy(s.tau, s.channel, s.spectral, s.noise),
                       [&](const NoiseRealization& nr) {
                           return noon_probs_noiseless(s.tau, nr, s.channel, s.spectral);
                       });

        // resolved densities at a random detected frequency
        const double wm = (rng.uniform() - 0.5) * 8.0 * s.spectral.sigma_minus;
        const auto hom_closed =
            hom_resolved_density_noisy(s.tau, wm, s.channel, s.spectral, s.noise);
        const auto hom_avg = [&](int order) {
            SpectralOutcomeTriple t;
            t.d0 = average_over_noise(
                [&](double e, double th) {
                    return hom_resolved_density(s.tau, wm, {e, th}, s.channel, s.spectral).d0;
                },
                s.noise, order);
            t.d1 = average_over_noise(
                [&](double e, double th) {
                    return hom_resolved_density(s.tau, wm, {e, th}, s.channel, s.spectral).d1;
                },
                s.noise, order);
            t.d2 = average_over_noise(
                [&](double e, double th) {
                    return hom_resolved_density(s.tau, wm, {e, th}, s.channel, s.spectral).d2;
                },
                s.noise, order);
            return t;
        };
        const auto hlo = hom_avg(opt.gh_order_low);
        const auto hhi = hom_avg(opt.gh_order_high);
        track(orders, std::abs(hlo.d0 - hhi.d0) * s.spectral.sigma_minus);
        track(orders, std::abs(hlo.d1 - hhi.d1) * s.spectral.sigma_minus);
        track(orders, std::abs(hlo.d2 - hhi.d2) * s.spectral.sigma_minus);
        track(closed, rel_diff(hom_closed.d0, hhi.d0));
        track(closed, rel_diff(hom_closed.d1, hhi.d1));
        track(closed, rel_diff(hom_closed.d2, hhi.d2));

        const double wpfreq =
            s.spectral.omega_p + (rng.uniform() - 0.5) * 8.0 * s.spectral.sigma_plus;
        const auto noon_closed =
            noon_resolved_density_noisy(s.tau, wpfreq, s.channel, s.spectral, s.noise);
        const auto noon_avg = [&](int order) {
            SpectralOutcomeTriple t;
            t.d0 = average_over_noise(
                [&](double e, double th) {
                    return noon_resolved_density(s.tau, wpfreq, {e, th}, s.channel, s.spectral).d0;
                },
                s.noise, order);
            t.d1 = average_over_noise(
                [&](double e, double th) {
                    return noon_resolved_density(s.tau, wpfreq, {e, th}, s.channel, s.spectral).d1;
                },
                s.noise, order);
            t.d2 = average_over_noise(
                [&](double e, double th) {
                    return noon_resolved_density(s.tau, wpfreq, {e, th}, s.channel, s.spectral).d2;
                },
                s.noise, order);
            return t;
        };
        const auto nlo = noon_avg(opt.gh_order_low);
        const auto nhi = noon_avg(opt.gh_order_high);
        track(orders, std::abs(nlo.d0 - nhi.d0) * s.spectral.sigma_plus);
        track(orders, std::abs(nlo.d1 - nhi.d1) * s.spectral.sigma_plus);
        track(orders, std::abs(nlo.d2 - nhi.d2) * s.spectral.sigma_plus);
        track(closed, rel_diff(noon_closed.d0, nhi.d0));
        track(closed, rel_diff(noon_closed.d1, nhi.d1));
        track(closed, rel_diff(noon_closed.d2, nhi.d2));
    }
    closed.pass = closed.worst <= closed.threshold;
    orders.pass = orders.worst <= orders.threshold;
    return {closed, orders};
}

// Closed-form FI against the finite-difference engine on the noise-averaged
// probabilities, wherever the FI is not vanishingly small.
inline std::vector<CheckResult> check_fisher_consistency(const ValidationOptions& opt) {
    using namespace validation_detail;
    CheckResult fd{"closed-form FI matches finite differences", false, 0.0, 1e-6};
    CounterRng rng(opt.seed, 3);
    const double step = 1e-4;  // omega_p = 1 units; fringe scale 1/omega_p
    int used = 0;
    for (int i = 0; i < opt.fisher_draws; ++i) {
        const Scenario s = draw_scenario(rng);

        const FisherResult hom_cf = hom_fi_nonresolved(s.tau, s.channel, s.spectral, s.noise);
        if (hom_cf.value > 1e-8 * qcrb(Interferometer::hom, s.spectral)) {
            const FisherResult hom_fd = fi_from_triple(
                [&](double t) { return hom_probs_noisy(t, s.channel, s.spectral, s.noise); },
                s.tau, step);
            track(fd, rel_diff(hom_cf.value, hom_fd.value));
            ++used;
        }
        const FisherResult noon_cf = noon_fi_nonresolved(s.tau, s.channel, s.spectral, s.noise);
        if (noon_cf.value > 1e-8 * qcrb(Interferometer::noon, s.spectral)) {
            const FisherResult noon_fd = fi_from_triple(
                [&](double t) { return noon_probs_noisy(t, s.channel, s.spectral, s.noise); },
                s.tau, step);
            track(fd, rel_diff(noon_cf.value, noon_fd.value));
            ++used;
        }
    }
    fd.pass = fd.worst <= fd.threshold && used > 0;
    return {fd};
}

inline std::vector<CheckResult> run_validation_suite(const ValidationOptions& opt = {}) {
    std::vector<CheckResult> all;
    for (auto&& c : check_normalization(opt)) all.push_back(c);
    for (auto&& c : check_noise_oracle(opt)) all.push_back(c);
    for (auto&& c : check_fisher_consistency(opt)) all.push_back(c);
    return all;
}

}  // namespace biphoton
