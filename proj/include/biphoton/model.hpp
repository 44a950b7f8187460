#pragma once

#include <utility>

#include "biphoton/fisher.hpp"
#include "biphoton/hom.hpp"
#include "biphoton/noon.hpp"
#include "biphoton/types.hpp"

namespace biphoton {

// Dispatch helpers over (interferometer, detection) so the estimation, sweep
// and strategy layers can stay model-agnostic.

// Noise-averaged outcome probabilities for the configured interferometer.
inline OutcomeTriple outcome_probs(const ExperimentConfig& cfg, double tau) {
    if (cfg.interferometer == Interferometer::hom)
        return hom_probs_noisy(tau, cfg.channel, cfg.spectral, cfg.noise);
    return noon_probs_noisy(tau, cfg.channel, cfg.spectral, cfg.noise);
}

// Outcome probabilities at a fixed noise realization.
inline OutcomeTriple outcome_probs_at(const ExperimentConfig& cfg, double tau,
                                      const NoiseRealization& nr) {
    if (cfg.interferometer == Interferometer::hom)
        return hom_probs_noiseless(tau, nr, cfg.channel, cfg.spectral);
    return noon_probs_noiseless(tau, nr, cfg.channel, cfg.spectral);
}

// Noise-averaged resolved densities in the model convention (HOM integrates
// to 2, N00N to 1).
inline SpectralOutcomeTriple spectral_density(const ExperimentConfig& cfg, double tau,
                                              double omega) {
    if (cfg.interferometer == Interferometer::hom)
        return hom_resolved_density_noisy(tau, omega, cfg.channel, cfg.spectral, cfg.noise);
    return noon_resolved_density_noisy(tau, omega, cfg.channel, cfg.spectral, cfg.noise);
}

// Resolved densities normalized to a probability density over
// (outcome, frequency); this is what the sampler and likelihood use.
inline SpectralOutcomeTriple spectral_density_sampling(const ExperimentConfig& cfg, double tau,
                                                       double omega) {
    if (cfg.interferometer == Interferometer::hom)
        return hom_resolved_density_normalized(tau, omega, cfg.channel, cfg.spectral, cfg.noise);
    return noon_resolved_density_noisy(tau, omega, cfg.channel, cfg.spectral, cfg.noise);
}

// Center and standard deviation of the (exactly Gaussian) frequency marginal,
// and the integration window used for resolved quadratures.
inline std::pair<double, double> spectral_marginal(const ExperimentConfig& cfg) {
    if (cfg.interferometer == Interferometer::hom)
        return {0.0, 2.0 * cfg.spectral.sigma_minus};
    return {cfg.spectral.omega_p, 2.0 * cfg.spectral.sigma_plus};
}

inline std::pair<double, double> spectral_window(const ExperimentConfig& cfg) {
    const auto [center, width] = spectral_marginal(cfg);
    return {center - 8.0 * width, center + 8.0 * width};
}

// Fisher information for the configured (interferometer, detection) pair:
// closed form for non-resolved detection, frequency quadrature for resolved.
inline FisherResult fisher_information(const ExperimentConfig& cfg, double tau,
                                       QuadratureOptions qopt = {}) {
    if (cfg.interferometer == Interferometer::hom) {
        if (cfg.detection == Detection::non_resolved)
            return hom_fi_nonresolved(tau, cfg.channel, cfg.spectral, cfg.noise);
        return hom_fi_resolved(tau, cfg.channel, cfg.spectral, cfg.noise, qopt);
    }
    if (cfg.detection == Detection::non_resolved)
        return noon_fi_nonresolved(tau, cfg.channel, cfg.spectral, cfg.noise);
    return noon_fi_resolved(tau, cfg.channel, cfg.spectral, cfg.noise, qopt);
}

inline double qcrb_value(const ExperimentConfig& cfg) {
    return qcrb(cfg.interferometer, cfg.spectral);
}

}  // namespace biphoton
