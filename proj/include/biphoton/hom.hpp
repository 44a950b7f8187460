#pragma once

#include <cmath>

#include "biphoton/quadrature.hpp"
#include "biphoton/types.hpp"

namespace biphoton {

// Visibility-degradation factor A = 1 + 4 sigma_minus^2 eta_eps^2. The noise
// washes out HOM interference by 1/sqrt(A) and widens the dip by sqrt(A).
struct HomNoiseFactor {
    double a_factor = 1.0;
};

inline HomNoiseFactor hom_noise_factor(const SpectralParams& sp, const NoiseParams& np) {
    const double se = sp.sigma_minus * np.eta_eps;
    return {1.0 + 4.0 * se * se};
}

namespace detail {
// 1/2 (1-gamma)^2 and the bunching offset 1/2 (1-gamma)(1+3gamma); the latter
// is (1+3gamma)/(1-gamma) times the former, computed without the division.
struct ChannelFactors {
    double half_sq;      // (1-gamma)^2 / 2
    double half_offset;  // (1-gamma)(1+3gamma) / 2
    double c_ratio;      // (1+3gamma)/(1-gamma)
    double k_gamma;      // 4 gamma/(1-gamma)
};

inline ChannelFactors channel_factors(const ChannelParams& ch) {
    const double g = ch.gamma;
    return {0.5 * (1.0 - g) * (1.0 - g), 0.5 * (1.0 - g) * (1.0 + 3.0 * g),
            (1.0 + 3.0 * g) / (1.0 - g), 4.0 * g / (1.0 - g)};
}
}  // namespace detail

// Outcome probabilities at a fixed noise realization. The frequency-difference
// interference depends only on the time shift eps; theta is accepted and has
// no effect on any HOM output.
inline OutcomeTriple hom_probs_noiseless(double tau, const NoiseRealization& nr,
                                         const ChannelParams& ch, const SpectralParams& sp) {
    const auto cf = detail::channel_factors(ch);
    const double u = sp.sigma_minus * (tau - nr.eps);
    const double fringe = ch.visibility * std::exp(-2.0 * u * u);
    OutcomeTriple t;
    t.p2 = cf.half_sq * (1.0 - fringe);
    t.p1 = cf.half_offset + cf.half_sq * fringe;
    t.p0 = ch.gamma * ch.gamma;
    return t;
}

// Noise-averaged probabilities: visibility V/sqrt(A), Gaussian width /A.
// Reduces exactly to hom_probs_noiseless(eps=0) when eta_eps = 0.
inline OutcomeTriple hom_probs_noisy(double tau, const ChannelParams& ch, const SpectralParams& sp,
                                     const NoiseParams& np) {
    const auto cf = detail::channel_factors(ch);
    const double a = hom_noise_factor(sp, np).a_factor;
    const double u2 = sp.sigma_minus * sp.sigma_minus * tau * tau / a;
    const double fringe = (ch.visibility / std::sqrt(a)) * std::exp(-2.0 * u2);
    OutcomeTriple t;
    t.p2 = cf.half_sq * (1.0 - fringe);
    t.p1 = cf.half_offset + cf.half_sq * fringe;
    t.p0 = ch.gamma * ch.gamma;
    return t;
}

// Frequency-resolved outcome densities (densities integrate to 2 over
// omega_minus: each pair appears at both signs of the frequency difference).
inline SpectralOutcomeTriple hom_resolved_density(double tau, double omega_minus,
                                                  const NoiseRealization& nr,
                                                  const ChannelParams& ch,
                                                  const SpectralParams& sp) {
    const auto cf = detail::channel_factors(ch);
    const double s = sp.sigma_minus;
    const double env = std::exp(-omega_minus * omega_minus / (8.0 * s * s)) /
                       std::sqrt(2.0 * M_PI * s * s);
    const double fringe = ch.visibility * std::cos(omega_minus * (tau - nr.eps));
    SpectralOutcomeTriple t;
    t.d2 = cf.half_sq * env * (1.0 - fringe);
    t.d1 = (cf.half_offset + cf.half_sq * fringe) * env;
    t.d0 = ch.gamma * ch.gamma * env;
    t.freq = omega_minus;
    return t;
}

// Noise-averaged resolved densities: the fringe is attenuated by
// e^{-omega^2 eta_eps^2 / 2}. The no-click density carries no fringe and is
// untouched by the averaging.
inline SpectralOutcomeTriple hom_resolved_density_noisy(double tau, double omega_minus,
                                                        const ChannelParams& ch,
                                                        const SpectralParams& sp,
                                                        const NoiseParams& np) {
    const auto cf = detail::channel_factors(ch);
    const double s = sp.sigma_minus;
    const double env = std::exp(-omega_minus * omega_minus / (8.0 * s * s)) /
                       std::sqrt(2.0 * M_PI * s * s);
    const double atten = std::exp(-0.5 * omega_minus * omega_minus * np.eta_eps * np.eta_eps);
    const double fringe = ch.visibility * atten * std::cos(omega_minus * tau);
    SpectralOutcomeTriple t;
    t.d2 = cf.half_sq * env * (1.0 - fringe);
    t.d1 = (cf.half_offset + cf.half_sq * fringe) * env;
    t.d0 = ch.gamma * ch.gamma * env;
    t.freq = omega_minus;
    return t;
}

// Sampling-normalized variant: divides by 2 so the three densities form a
// probability density over (outcome, omega_minus).
inline SpectralOutcomeTriple hom_resolved_density_normalized(double tau, double omega_minus,
                                                             const ChannelParams& ch,
                                                             const SpectralParams& sp,
                                                             const NoiseParams& np) {
    SpectralOutcomeTriple t = hom_resolved_density_noisy(tau, omega_minus, ch, sp, np);
    t.d0 *= 0.5;
    t.d1 *= 0.5;
    t.d2 *= 0.5;
    return t;
}

// Closed-form Fisher information for non-resolved detection. The tau=0 point
// is a 0/0 limit in the ideal branch; it evaluates to 4 sigma^2 (1-gamma)^2
// when V=1 and eta_eps=0 (the zero-loss case is the QCRB anchor 4 sigma^2)
// and to 0 otherwise.
inline FisherResult hom_fi_nonresolved(double tau, const ChannelParams& ch,
                                       const SpectralParams& sp, const NoiseParams& np) {
    const double s = sp.sigma_minus;
    const double wp2 = sp.omega_p * sp.omega_p;
    const double v = ch.visibility;
    const double g = ch.gamma;
    FisherResult fi;
    fi.method = FiMethod::closed_form;
    if (v == 0.0) return fi;

    const double a = hom_noise_factor(sp, np).a_factor;
    if (tau == 0.0) {
        if (v == 1.0 && a == 1.0) {
            fi.value = 4.0 * s * s * (1.0 - g) * (1.0 - g);
            fi.value_scaled = fi.value / wp2;
        }
        return fi;
    }

    const auto cf = detail::channel_factors(ch);
    const double y = 2.0 * s * s * tau * tau / a;
    const double sqrt_a = std::sqrt(a);
    const double veff = v / sqrt_a;
    const double fringe = veff * std::exp(-y);
    // 1 - fringe as a sum of non-negative pieces; exact when V=1 and A=1.
    const double one_minus_fringe =
        (1.0 - v) + v * (a - 1.0) / (sqrt_a * (sqrt_a + 1.0)) + veff * (-std::expm1(-y));
    const double bracket = 1.0 / one_minus_fringe + 1.0 / (cf.c_ratio + fringe);
    fi.value = 8.0 * v * v * s * s * s * s * tau * tau * (1.0 - g) * (1.0 - g) *
               std::exp(-2.0 * y) / (a * a * a) * bracket;
    fi.value_scaled = fi.value / wp2;
    return fi;
}

namespace detail {
// Resolved-FI integrand with the removable fringe singularities cancelled
// algebraically. With s2 = sin^2(w tau/2), u2 = cos^2(w tau/2):
//   E - V cos = (E - V) + 2 V s2,   cE + V cos = c(E-1) + (c - V) + 2 V u2,
// and sin^2(w tau) = 4 s2 u2, so the ratio stays finite wherever a density
// vanishes. The exact-degenerate branches are the V=1, eta=0 limits.
inline double hom_resolved_fi_integrand(double omega, double tau, const ChannelParams& ch,
                                        const SpectralParams& sp, const NoiseParams& np) {
    const double s = sp.sigma_minus;
    const double v = ch.visibility;
    const auto cf = channel_factors(ch);
    const double g_env = std::exp(-omega * omega / (8.0 * s * s));
    const double sh = std::sin(0.5 * omega * tau);
    const double chh = std::cos(0.5 * omega * tau);
    const double s2 = sh * sh;
    const double u2 = chh * chh;
    const double em1 = std::expm1(0.5 * omega * omega * np.eta_eps * np.eta_eps);  // E - 1
    const double e_minus_v = em1 + (1.0 - v);
    const double c2 = cf.c_ratio * em1 + (cf.c_ratio - v);
    const double term2 = c2 + 2.0 * v * u2;
    double ratio;
    if (e_minus_v == 0.0 && c2 == 0.0) {
        ratio = 1.0;
    } else if (e_minus_v == 0.0) {
        ratio = 2.0 * u2 / (v * term2);
    } else {
        const double term1 = e_minus_v + 2.0 * v * s2;
        ratio = 4.0 * s2 * u2 / (term1 * term2);
    }
    const double pref = 1.0 / (2.0 * std::sqrt(2.0 * M_PI) * s);
    const double gsq = (1.0 - ch.gamma) * (1.0 + ch.gamma);
    return pref * g_env * omega * omega * v * v * gsq * ratio;
}
}  // namespace detail

// Fisher information for resolved detection, by adaptive quadrature over
// omega_minus in [-16 sigma, 16 sigma] (8 envelope widths). Under gamma=0,
// V=1, eta_eps=0 the integrand collapses to the envelope moment and the
// result is 4 sigma^2 independent of tau.
inline FisherResult hom_fi_resolved(double tau, const ChannelParams& ch, const SpectralParams& sp,
                                    const NoiseParams& np, QuadratureOptions qopt = {}) {
    FisherResult fi;
    fi.method = FiMethod::freq_quadrature;
    if (ch.visibility == 0.0) return fi;
    const double c = 16.0 * sp.sigma_minus;
    qopt.initial_panels = std::max(qopt.initial_panels, oscillation_panels(-c, c, tau));
    const auto q = integrate_adaptive(
        [&](double w) { return detail::hom_resolved_fi_integrand(w, tau, ch, sp, np); }, -c, c,
        qopt);
    fi.value = q.value;
    fi.value_scaled = q.value / (sp.omega_p * sp.omega_p);
    fi.err_estimate = q.err_estimate;
    fi.converged = q.converged;
    return fi;
}

}  // namespace biphoton
