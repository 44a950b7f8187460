#pragma once

#include <cmath>

#include "biphoton/hom.hpp"  // detail::channel_factors
#include "biphoton/quadrature.hpp"
#include "biphoton/types.hpp"

namespace biphoton {

// A' = 1 + 4 sigma_plus^2 eta_eps^2, the frequency-sum analogue of the HOM
// visibility-degradation factor.
struct NoonNoiseFactor {
    double a_prime = 1.0;
};

inline NoonNoiseFactor noon_noise_factor(const SpectralParams& sp, const NoiseParams& np) {
    const double se = sp.sigma_plus * np.eta_eps;
    return {1.0 + 4.0 * se * se};
}

// Outcome probabilities at a fixed noise realization. The frequency-sum
// fringe cos[omega_p (tau - eps) + 2 theta] responds to both noise variables.
inline OutcomeTriple noon_probs_noiseless(double tau, const NoiseRealization& nr,
                                          const ChannelParams& ch, const SpectralParams& sp) {
    const auto cf = detail::channel_factors(ch);
    const double dt = tau - nr.eps;
    const double u = sp.sigma_plus * dt;
    const double fringe = ch.visibility * std::exp(-2.0 * u * u) *
                          std::cos(sp.omega_p * dt + 2.0 * nr.theta);
    OutcomeTriple t;
    t.p2 = cf.half_sq * (1.0 + fringe);
    t.p1 = cf.half_offset - cf.half_sq * fringe;
    t.p0 = ch.gamma * ch.gamma;
    return t;
}

// Noise-averaged probabilities. The fringe is attenuated by
// (V/sqrt(A')) e^{-2 eta_theta^2 - (2 sigma^2 tau^2 + eta_eps^2 omega_p^2/2)/A'}.
inline OutcomeTriple noon_probs_noisy(double tau, const ChannelParams& ch,
                                      const SpectralParams& sp, const NoiseParams& np) {
    const auto cf = detail::channel_factors(ch);
    const double s = sp.sigma_plus;
    const double ap = noon_noise_factor(sp, np).a_prime;
    const double ee_wp = np.eta_eps * sp.omega_p;
    const double expo =
        -2.0 * np.eta_theta * np.eta_theta - (2.0 * s * s * tau * tau + 0.5 * ee_wp * ee_wp) / ap;
    const double fringe =
        (ch.visibility / std::sqrt(ap)) * std::exp(expo) * std::cos(sp.omega_p * tau);
    OutcomeTriple t;
    t.p2 = cf.half_sq * (1.0 + fringe);
    t.p1 = cf.half_offset - cf.half_sq * fringe;
    t.p0 = ch.gamma * ch.gamma;
    return t;
}

// Frequency-resolved densities over omega_plus (total integrates to 1).
inline SpectralOutcomeTriple noon_resolved_density(double tau, double omega_plus,
                                                   const NoiseRealization& nr,
                                                   const ChannelParams& ch,
                                                   const SpectralParams& sp) {
    const auto cf = detail::channel_factors(ch);
    const double s = sp.sigma_plus;
    const double d = omega_plus - sp.omega_p;
    const double env = std::exp(-d * d / (8.0 * s * s)) / (2.0 * std::sqrt(2.0 * M_PI * s * s));
    const double fringe =
        ch.visibility * std::cos(omega_plus * (tau - nr.eps) + 2.0 * nr.theta);
    SpectralOutcomeTriple t;
    t.d2 = cf.half_sq * env * (1.0 + fringe);
    t.d1 = (cf.half_offset - cf.half_sq * fringe) * env;
    t.d0 = ch.gamma * ch.gamma * env;
    t.freq = omega_plus;
    return t;
}

// Noise-averaged resolved densities: fringe attenuated by
// e^{-2 eta_theta^2 - eta_eps^2 omega_plus^2 / 2}.
inline SpectralOutcomeTriple noon_resolved_density_noisy(double tau, double omega_plus,
                                                         const ChannelParams& ch,
                                                         const SpectralParams& sp,
                                                         const NoiseParams& np) {
    const auto cf = detail::channel_factors(ch);
    const double s = sp.sigma_plus;
    const double d = omega_plus - sp.omega_p;
    const double env = std::exp(-d * d / (8.0 * s * s)) / (2.0 * std::sqrt(2.0 * M_PI * s * s));
    const double atten = std::exp(-2.0 * np.eta_theta * np.eta_theta -
                                  0.5 * omega_plus * omega_plus * np.eta_eps * np.eta_eps);
    const double fringe = ch.visibility * atten * std::cos(omega_plus * tau);
    SpectralOutcomeTriple t;
    t.d2 = cf.half_sq * env * (1.0 + fringe);
    t.d1 = (cf.half_offset - cf.half_sq * fringe) * env;
    t.d0 = ch.gamma * ch.gamma * env;
    t.freq = omega_plus;
    return t;
}

// Closed-form Fisher information for non-resolved detection. Evaluated with
// the large exponential factored out (denominator terms carry e^{-X} <= 1)
// and expm1 compensation, so it neither overflows for eta_eps^2 omega_p^2/A'
// beyond ~40 nor loses the tau->0 ideal limit to cancellation. tau=0 is the
// QCRB anchor 4 sigma^2 + omega_p^2 in the fully ideal case and 0 otherwise.
inline FisherResult noon_fi_nonresolved(double tau, const ChannelParams& ch,
                                        const SpectralParams& sp, const NoiseParams& np) {
    const double s = sp.sigma_plus;
    const double wp = sp.omega_p;
    const double v = ch.visibility;
    const double g = ch.gamma;
    FisherResult fi;
    fi.method = FiMethod::closed_form;
    if (v == 0.0) return fi;

    const double ap = noon_noise_factor(sp, np).a_prime;
    const bool noiseless = (np.eta_eps == 0.0 && np.eta_theta == 0.0);
    if (tau == 0.0) {
        if (g == 0.0 && v == 1.0 && noiseless) {
            fi.value = 4.0 * s * s + wp * wp;
            fi.value_scaled = fi.value / (wp * wp);
        }
        return fi;
    }

    const auto cf = detail::channel_factors(ch);
    const double c = cf.c_ratio;
    const double kg = cf.k_gamma;
    const double ee_wp = np.eta_eps * wp;
    const double x = (4.0 * s * s * tau * tau + 4.0 * ap * np.eta_theta * np.eta_theta +
                      ee_wp * ee_wp) / ap;
    const double cw = std::cos(wp * tau);
    const double sw = std::sin(wp * tau);
    const double sqrt_ap = std::sqrt(ap);
    const double num = 4.0 * s * s * tau * cw + ap * wp * sw;
    // denominator * e^{-X}, regrouped so the ideal, zero-noise limit
    // (c=V=A'=1) reduces to sin^2 - cos^2*expm1(-X) without cancellation
    const double c0 = kg + (1.0 - v) * (1.0 + v) + c * (ap - 1.0) + v * v * sw * sw +
                      kg * sqrt_ap * v * cw;
    const double dscaled = c0 + kg * sqrt_ap * v * cw * std::expm1(-0.5 * x) -
                           v * v * cw * cw * std::expm1(-x);
    fi.value = v * v * (1.0 - g * g) * num * num * std::exp(-x) / (ap * ap * dscaled);
    fi.value_scaled = fi.value / (wp * wp);
    return fi;
}

namespace detail {
// Resolved N00N FI integrand, cancellation-free. With E' =
// e^{2 eta_theta^2 + omega^2 eta_eps^2/2}, s2 = sin^2(w tau/2), u2 = cos^2:
//   E' + V cos = (E'-V) + 2 V u2,   cE' - V cos = c(E'-1) + (c-V) + 2 V s2.
inline double noon_resolved_fi_integrand(double omega, double tau, const ChannelParams& ch,
                                         const SpectralParams& sp, const NoiseParams& np) {
    const double s = sp.sigma_plus;
    const double v = ch.visibility;
    const auto cf = channel_factors(ch);
    const double d = omega - sp.omega_p;
    const double g_env = std::exp(-d * d / (8.0 * s * s));
    const double sh = std::sin(0.5 * omega * tau);
    const double chh = std::cos(0.5 * omega * tau);
    const double s2 = sh * sh;
    const double u2 = chh * chh;
    const double em1 = std::expm1(2.0 * np.eta_theta * np.eta_theta +
                                  0.5 * omega * omega * np.eta_eps * np.eta_eps);  // E' - 1
    const double e_minus_v = em1 + (1.0 - v);
    const double c2 = cf.c_ratio * em1 + (cf.c_ratio - v);
    double ratio;
    if (e_minus_v == 0.0 && c2 == 0.0) {
        ratio = 1.0;
    } else if (e_minus_v == 0.0) {
        ratio = 2.0 * s2 / (v * (c2 + 2.0 * v * s2));
    } else {
        const double term1 = e_minus_v + 2.0 * v * u2;
        const double term2 = c2 + 2.0 * v * s2;
        ratio = 4.0 * s2 * u2 / (term1 * term2);
    }
    if (!std::isfinite(ratio)) ratio = 0.0;  // overflowed attenuation: integrand -> 0
    const double pref = 1.0 / (2.0 * std::sqrt(2.0 * M_PI) * s);
    const double gsq = (1.0 - ch.gamma) * (1.0 + ch.gamma);
    return pref * g_env * omega * omega * v * v * gsq * ratio;
}
}  // namespace detail

// Fisher information for resolved detection, by adaptive quadrature over
// omega_plus in omega_p +- 16 sigma. Under gamma=0, V=1, zero noise the
// result is 4 sigma^2 + omega_p^2 independent of tau.
inline FisherResult noon_fi_resolved(double tau, const ChannelParams& ch, const SpectralParams& sp,
                                     const NoiseParams& np, QuadratureOptions qopt = {}) {
    FisherResult fi;
    fi.method = FiMethod::freq_quadrature;
    if (ch.visibility == 0.0) return fi;
    const double lo = sp.omega_p - 16.0 * sp.sigma_plus;
    const double hi = sp.omega_p + 16.0 * sp.sigma_plus;
    qopt.initial_panels = std::max(qopt.initial_panels, oscillation_panels(lo, hi, tau));
    const auto q = integrate_adaptive(
        [&](double w) { return detail::noon_resolved_fi_integrand(w, tau, ch, sp, np); }, lo, hi,
        qopt);
    fi.value = q.value;
    fi.value_scaled = q.value / (sp.omega_p * sp.omega_p);
    fi.err_estimate = q.err_estimate;
    fi.converged = q.converged;
    return fi;
}

}  // namespace biphoton
