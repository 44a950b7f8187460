#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace biphoton {

// Spectral description of the Gaussian biphoton state.
// sigma_minus: RMS bandwidth of the frequency-difference envelope (rad/s),
// sigma_plus:  RMS bandwidth of the frequency-sum envelope (rad/s),
// omega_p:     pump center frequency (rad/s).
struct SpectralParams {
    double sigma_minus = 1.0;
    double sigma_plus = 1.0;
    double omega_p = 100.0;
};

// gamma: per-photon loss probability in [0,1); visibility: fringe contrast in [0,1].
struct ChannelParams {
    double gamma = 0.0;
    double visibility = 1.0;
};

// RMS strengths of the Gaussian phase-noise processes.
// eta_eps is the frequency-dependent (time-shift-like) noise, in seconds;
// eta_theta is the frequency-independent constant-phase noise, in radians.
struct NoiseParams {
    double eta_eps = 0.0;
    double eta_theta = 0.0;
};

// One concrete draw of the two noise variables.
struct NoiseRealization {
    double eps = 0.0;
    double theta = 0.0;
};

// Probabilities of the three detector outcomes at a given delay.
// p0: no click (total loss), p1: exactly one click (bunching), p2: coincidence.
struct OutcomeTriple {
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;

    double sum() const { return p0 + p1 + p2; }
};

// Outcome densities per unit detected frequency at a given delay.
// freq is the detected frequency variable: omega_minus for HOM, omega_plus for N00N.
struct SpectralOutcomeTriple {
    double d0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double freq = 0.0;

    double sum() const { return d0 + d1 + d2; }
};

enum class FiMethod { closed_form, freq_quadrature, noise_quadrature, finite_difference };

inline const char* to_string(FiMethod m) {
    switch (m) {
        case FiMethod::closed_form: return "closed_form";
        case FiMethod::freq_quadrature: return "freq_quadrature";
        case FiMethod::noise_quadrature: return "noise_quadrature";
        case FiMethod::finite_difference: return "finite_difference";
    }
    return "unknown";
}

// Fisher information about the delay, with provenance and an error bound for
// numerical methods. value_scaled is value/omega_p^2 (the figure convention).
struct FisherResult {
    double value = 0.0;
    double value_scaled = 0.0;
    FiMethod method = FiMethod::closed_form;
    double err_estimate = 0.0;
    bool converged = true;
};

enum class Interferometer { hom, noon };
enum class Detection { non_resolved, resolved };

inline const char* to_string(Interferometer i) { return i == Interferometer::hom ? "hom" : "noon"; }
inline const char* to_string(Detection d) { return d == Detection::resolved ? "resolved" : "nonresolved"; }

// Full parameterization of one sensing scenario.
struct ExperimentConfig {
    SpectralParams spectral;
    ChannelParams channel;
    NoiseParams noise;
    Interferometer interferometer = Interferometer::hom;
    Detection detection = Detection::non_resolved;
};

// Checks every invariant and returns the config unchanged. Throws
// std::invalid_argument naming the offending field otherwise.
inline ExperimentConfig validate(const ExperimentConfig& cfg) {
    const auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (!(cfg.spectral.sigma_minus > 0.0)) fail("sigma_minus must be > 0");
    if (!(cfg.spectral.sigma_plus > 0.0)) fail("sigma_plus must be > 0");
    if (!(cfg.spectral.omega_p > 0.0)) fail("omega_p must be > 0");
    if (!(cfg.channel.gamma >= 0.0 && cfg.channel.gamma < 1.0)) fail("gamma must lie in [0,1)");
    if (!(cfg.channel.visibility >= 0.0 && cfg.channel.visibility <= 1.0)) fail("visibility must lie in [0,1]");
    if (!(cfg.noise.eta_eps >= 0.0)) fail("eta_eps must be >= 0");
    if (!(cfg.noise.eta_theta >= 0.0)) fail("eta_theta must be >= 0");
    if (!std::isfinite(cfg.spectral.sigma_minus) || !std::isfinite(cfg.spectral.sigma_plus) ||
        !std::isfinite(cfg.spectral.omega_p))
        fail("spectral parameters must be finite");
    if (!std::isfinite(cfg.noise.eta_eps) || !std::isfinite(cfg.noise.eta_theta))
        fail("noise strengths must be finite");
    return cfg;
}

// Parameters rescaled to pump units (omega_p = 1): bandwidths as sigma/omega_p,
// eta_eps as eta_eps*omega_p, delays as omega_p*tau, FI as F/omega_p^2.
struct DimensionlessConfig {
    double sigma_minus_wp = 0.0;  // sigma_minus / omega_p
    double sigma_plus_wp = 0.0;   // sigma_plus / omega_p
    double eta_eps_wp = 0.0;      // eta_eps * omega_p
    double eta_theta = 0.0;
    double gamma = 0.0;
    double visibility = 1.0;
    Interferometer interferometer = Interferometer::hom;
    Detection detection = Detection::non_resolved;
};

inline DimensionlessConfig dimensionless_view(const ExperimentConfig& cfg) {
    DimensionlessConfig d;
    d.sigma_minus_wp = cfg.spectral.sigma_minus / cfg.spectral.omega_p;
    d.sigma_plus_wp = cfg.spectral.sigma_plus / cfg.spectral.omega_p;
    d.eta_eps_wp = cfg.noise.eta_eps * cfg.spectral.omega_p;
    d.eta_theta = cfg.noise.eta_theta;
    d.gamma = cfg.channel.gamma;
    d.visibility = cfg.channel.visibility;
    d.interferometer = cfg.interferometer;
    d.detection = cfg.detection;
    return d;
}

// Inverse of dimensionless_view for a given absolute pump frequency.
inline ExperimentConfig absolute_config(const DimensionlessConfig& d, double omega_p) {
    ExperimentConfig cfg;
    cfg.spectral.sigma_minus = d.sigma_minus_wp * omega_p;
    cfg.spectral.sigma_plus = d.sigma_plus_wp * omega_p;
    cfg.spectral.omega_p = omega_p;
    cfg.noise.eta_eps = d.eta_eps_wp / omega_p;
    cfg.noise.eta_theta = d.eta_theta;
    cfg.channel.gamma = d.gamma;
    cfg.channel.visibility = d.visibility;
    cfg.interferometer = d.interferometer;
    cfg.detection = d.detection;
    return cfg;
}

}  // namespace biphoton
