#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "biphoton/quadrature.hpp"
#include "biphoton/types.hpp"

namespace biphoton {

namespace detail {

struct TripleDeriv {
    double d0, d1, d2;
    double err0, err1, err2;
};

// Central differences at steps h and h/2 with one Richardson level.
// The difference between the two central estimates (over 3) bounds the
// leading term removed by the extrapolation.
template <class F>
TripleDeriv differentiate_triple(F&& f, double tau, double h) {
    const auto pp = f(tau + h);
    const auto pm = f(tau - h);
    const auto qp = f(tau + 0.5 * h);
    const auto qm = f(tau - 0.5 * h);
    const auto one = [&](double fp, double fm, double gp, double gm, double& d, double& e) {
        const double dh = (fp - fm) / (2.0 * h);
        const double dh2 = (gp - gm) / h;
        d = (4.0 * dh2 - dh) / 3.0;
        e = std::abs(dh2 - dh) / 3.0;
    };
    TripleDeriv out{};
    one(pp.p0, pm.p0, qp.p0, qm.p0, out.d0, out.err0);
    one(pp.p1, pm.p1, qp.p1, qm.p1, out.d1, out.err1);
    one(pp.p2, pm.p2, qp.p2, qm.p2, out.d2, out.err2);
    return out;
}

// One (dp)^2/p term of the Fisher sum. Components that are exactly flat in
// tau (p and dp both vanishing to machine depth) contribute zero.
inline double fisher_term(double p, double dp, double derr, double& err_acc) {
    if (p < 0.0)
        throw std::domain_error("fisher information: negative outcome probability p=" +
                                std::to_string(p));
    if (!std::isfinite(dp)) throw std::domain_error("fisher information: non-finite derivative");
    if (p < 1e-300 && std::abs(dp) < 1e-150) return 0.0;
    err_acc += 2.0 * std::abs(dp) * derr / std::max(p, 1e-300);
    return dp * dp / p;
}

}  // namespace detail

// Fisher information of a three-outcome model tau -> OutcomeTriple by
// finite differences. Independent of every closed form; used as the oracle.
template <class Model>
FisherResult fi_from_triple(Model&& model, double tau, double step, double omega_p = 1.0) {
    if (!(step > 0.0)) throw std::invalid_argument("fi_from_triple: step must be > 0");
    const auto d = detail::differentiate_triple(model, tau, step);
    const auto p = model(tau);
    FisherResult fi;
    fi.method = FiMethod::finite_difference;
    double err = 0.0;
    fi.value = detail::fisher_term(p.p0, d.d0, d.err0, err) +
               detail::fisher_term(p.p1, d.d1, d.err1, err) +
               detail::fisher_term(p.p2, d.d2, d.err2, err);
    fi.err_estimate = err;
    fi.value_scaled = fi.value / (omega_p * omega_p);
    return fi;
}

// Analytic tau-derivatives of a spectral triple, when the model supplies them.
struct SpectralDerivTriple {
    double d0 = 0.0, d1 = 0.0, d2 = 0.0;
};

// Fisher information of a resolved model (tau, omega) -> SpectralOutcomeTriple
// by quadrature of sum_i (d/dtau d_i)^2 / d_i over [omega_lo, omega_hi].
// Derivatives come from `deriv` when provided, else from central differences.
template <class Model, class Deriv>
FisherResult fi_from_spectral_triple_with_deriv(Model&& model, Deriv&& deriv, double tau,
                                                double omega_lo, double omega_hi,
                                                QuadratureOptions qopt = {}, double omega_p = 1.0) {
    qopt.initial_panels =
        std::max(qopt.initial_panels, oscillation_panels(omega_lo, omega_hi, tau));
    const auto integrand = [&](double w) {
        const auto t = model(tau, w);
        const auto dt = deriv(tau, w);
        double err = 0.0;
        return detail::fisher_term(t.d0, dt.d0, 0.0, err) +
               detail::fisher_term(t.d1, dt.d1, 0.0, err) +
               detail::fisher_term(t.d2, dt.d2, 0.0, err);
    };
    const auto q = integrate_adaptive(integrand, omega_lo, omega_hi, qopt);
    FisherResult fi;
    fi.method = FiMethod::freq_quadrature;
    fi.value = q.value;
    fi.value_scaled = q.value / (omega_p * omega_p);
    fi.err_estimate = q.err_estimate;
    fi.converged = q.converged;
    return fi;
}

template <class Model>
FisherResult fi_from_spectral_triple(Model&& model, double tau, double step, double omega_lo,
                                     double omega_hi, QuadratureOptions qopt = {},
                                     double omega_p = 1.0) {
    if (!(step > 0.0)) throw std::invalid_argument("fi_from_spectral_triple: step must be > 0");
    qopt.initial_panels =
        std::max(qopt.initial_panels, oscillation_panels(omega_lo, omega_hi, tau));
    const auto integrand = [&](double w) {
        const auto asTriple = [&](double t) {
            const auto s = model(t, w);
            return OutcomeTriple{s.d0, s.d1, s.d2};
        };
        const auto d = detail::differentiate_triple(asTriple, tau, step);
        const auto p = model(tau, w);
        double err = 0.0;
        return detail::fisher_term(p.d0, d.d0, d.err0, err) +
               detail::fisher_term(p.d1, d.d1, d.err1, err) +
               detail::fisher_term(p.d2, d.d2, d.err2, err);
    };
    const auto q = integrate_adaptive(integrand, omega_lo, omega_hi, qopt);
    FisherResult fi;
    fi.method = FiMethod::freq_quadrature;
    fi.value = q.value;
    fi.value_scaled = q.value / (omega_p * omega_p);
    fi.err_estimate = q.err_estimate;
    fi.converged = q.converged;
    return fi;
}

// Measurement-optimized bound on the Fisher information: 4 sigma_minus^2 for
// HOM, 4 sigma_plus^2 + omega_p^2 for the two-photon N00N interferometer.
inline double qcrb(Interferometer which, const SpectralParams& sp) {
    if (which == Interferometer::hom) return 4.0 * sp.sigma_minus * sp.sigma_minus;
    return 4.0 * sp.sigma_plus * sp.sigma_plus + sp.omega_p * sp.omega_p;
}

// Cramer-Rao bookkeeping for N repetitions.
struct CrbReport {
    FisherResult fisher;
    long long n_repetitions = 1;
    double delta_tau_crb = 0.0;  // 1/sqrt(N F)
    double qcrb_value = 0.0;
    double saturation = 0.0;  // F / QCRB
    bool infinite_crb = false;
};

inline CrbReport crb(const FisherResult& fisher, long long n, Interferometer which,
                     const SpectralParams& sp) {
    if (n < 1) throw std::invalid_argument("crb: n must be >= 1");
    CrbReport r;
    r.fisher = fisher;
    r.n_repetitions = n;
    r.qcrb_value = qcrb(which, sp);
    r.saturation = fisher.value / r.qcrb_value;
    if (fisher.value > 0.0) {
        r.delta_tau_crb = 1.0 / std::sqrt(static_cast<double>(n) * fisher.value);
    } else {
        r.delta_tau_crb = std::numeric_limits<double>::infinity();
        r.infinite_crb = true;
    }
    return r;
}

}  // namespace biphoton
