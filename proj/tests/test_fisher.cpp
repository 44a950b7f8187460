#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "biphoton/fisher.hpp"
#include "biphoton/hom.hpp"
#include "biphoton/noon.hpp"
#include "biphoton/rng.hpp"

using namespace biphoton;

namespace {
const SpectralParams kHomUnits{1.0, 1.0, 100.0};
const SpectralParams kNoonUnits{0.01, 0.01, 1.0};
const ChannelParams kIdeal{0.0, 1.0};
const ChannelParams kPractical{0.4, 0.9};
}  // namespace

TEST_CASE("flat outcome components contribute exactly zero", "[fisher]") {
    const auto fi = fi_from_triple(
        [](double) {
            return OutcomeTriple{0.16, 0.42, 0.42};
        },
        0.7, 1e-4);
    REQUIRE(fi.value == 0.0);
}

TEST_CASE("finite differences reproduce the ideal HOM value", "[fisher]") {
    const auto fi = fi_from_triple(
        [&](double t) { return hom_probs_noisy(t, kIdeal, kHomUnits, {}); }, 0.5, 1e-4 / 1.0);
    REQUIRE_THAT(fi.value, Catch::Matchers::WithinRel(2.3279068274773057, 1e-6));
    REQUIRE(fi.method == FiMethod::finite_difference);
    REQUIRE(fi.err_estimate >= 0.0);
}

TEST_CASE("finite differences match the N00N closed form on a practical grid", "[fisher]") {
    for (double x : {0.8, 1.5, 2.4, 7.9, 20.1}) {  // omega_p tau
        const auto cf = noon_fi_nonresolved(x, kPractical, kNoonUnits, {0.4, 0.2});
        const auto fd = fi_from_triple(
            [&](double t) { return noon_probs_noisy(t, kPractical, kNoonUnits, {0.4, 0.2}); }, x,
            1e-4);
        if (cf.value > 1e-8 * qcrb(Interferometer::noon, kNoonUnits))
            REQUIRE_THAT(fd.value, Catch::Matchers::WithinRel(cf.value, 1e-6));
    }
}

TEST_CASE("negative probabilities and non-finite derivatives are rejected", "[fisher]") {
    REQUIRE_THROWS_AS(fi_from_triple(
                          [](double t) {
                              return OutcomeTriple{-0.1, 0.6, 0.5 - t * 0.0};
                          },
                          0.1, 1e-4),
                      std::domain_error);
    REQUIRE_THROWS_AS(fi_from_triple(
                          [](double t) {
                              return OutcomeTriple{0.1, 0.4, t > 0.1 ? 1.0 / 0.0 : 0.5};
                          },
                          0.1, 1e-3),
                      std::domain_error);
    REQUIRE_THROWS_AS(fi_from_triple([](double) { return OutcomeTriple{0.2, 0.3, 0.5}; }, 0.0,
                                     0.0),
                      std::invalid_argument);
}

TEST_CASE("spectral engine with analytic derivatives hits both ideal limits", "[fisher]") {
    // ideal resolved HOM: 4 sigma^2 at any delay
    const auto hom_model = [&](double t, double w) {
        return hom_resolved_density_normalized(t, w, kIdeal, kHomUnits, {});
    };
    const auto hom_deriv = [&](double t, double w) {
        // d/dtau of the normalized densities: -+ (1/2)(1-g)^2/2 env' ...
        const double env = std::exp(-w * w / 8.0) / std::sqrt(2.0 * M_PI);
        const double d = 0.5 * 0.5 * env * w * std::sin(w * t);
        return SpectralDerivTriple{0.0, -d, d};
    };
    for (double tau : {0.3, 1.0, 3.0}) {
        const auto fi = fi_from_spectral_triple_with_deriv(hom_model, hom_deriv, tau, -16.0, 16.0,
                                                           {}, kHomUnits.omega_p);
        REQUIRE(fi.converged);
        REQUIRE_THAT(fi.value, Catch::Matchers::WithinRel(4.0, 1e-6));
        REQUIRE_THAT(fi.value_scaled, Catch::Matchers::WithinRel(4e-4, 1e-6));
    }

    // ideal resolved N00N: 4 sigma^2 + omega_p^2 at any delay
    const auto noon_model = [&](double t, double w) {
        return noon_resolved_density_noisy(t, w, kIdeal, kNoonUnits, {});
    };
    const auto noon_deriv = [&](double t, double w) {
        const double dd = w - 1.0;
        const double env = std::exp(-dd * dd / (8.0 * 1e-4)) /
                           (2.0 * std::sqrt(2.0 * M_PI) * 0.01);
        const double d = 0.5 * env * w * std::sin(w * t);
        return SpectralDerivTriple{0.0, d, -d};
    };
    for (double tau : {5.0, 60.0, 300.0}) {
        const auto fi = fi_from_spectral_triple_with_deriv(noon_model, noon_deriv, tau, 0.84, 1.16,
                                                           {}, 1.0);
        REQUIRE(fi.converged);
        REQUIRE_THAT(fi.value, Catch::Matchers::WithinRel(1.0004, 1e-6));
    }
}

TEST_CASE("spectral engine with finite differences matches the closed-form FI", "[fisher]") {
    const NoiseParams np{0.5, 0.0};
    for (double tau : {0.7, 2.3}) {
        const auto fd = fi_from_spectral_triple(
            [&](double t, double w) {
                return hom_resolved_density_normalized(t, w, kPractical, kHomUnits, np);
            },
            tau, 1e-4, -16.0, 16.0, {}, kHomUnits.omega_p);
        const auto cf = hom_fi_resolved(tau, kPractical, kHomUnits, np);
        REQUIRE_THAT(fd.value, Catch::Matchers::WithinRel(cf.value, 1e-6));
    }
}

TEST_CASE("zero-visibility spectral model carries no information", "[fisher]") {
    const ChannelParams dark{0.2, 0.0};
    const auto fi = fi_from_spectral_triple(
        [&](double t, double w) {
            return hom_resolved_density_normalized(t, w, dark, kHomUnits, {});
        },
        0.9, 1e-4, -16.0, 16.0, {}, kHomUnits.omega_p);
    REQUIRE_THAT(fi.value, Catch::Matchers::WithinAbs(0.0, 1e-18));
}

TEST_CASE("CRB report anchors", "[fisher]") {
    FisherResult f;
    f.value = 4.0;  // 4 sigma^2 with sigma = 1
    const auto r = crb(f, 1, Interferometer::hom, kHomUnits);
    REQUIRE_THAT(r.delta_tau_crb, Catch::Matchers::WithinRel(0.5, 1e-14));
    REQUIRE_THAT(r.saturation, Catch::Matchers::WithinRel(1.0, 1e-14));
    REQUIRE_FALSE(r.infinite_crb);

    const auto r4 = crb(f, 4, Interferometer::hom, kHomUnits);
    REQUIRE_THAT(r4.delta_tau_crb, Catch::Matchers::WithinRel(0.25, 1e-14));

    FisherResult fn;
    fn.value = qcrb(Interferometer::noon, kNoonUnits);
    const auto rn = crb(fn, 1, Interferometer::noon, kNoonUnits);
    REQUIRE_THAT(rn.saturation, Catch::Matchers::WithinRel(1.0, 1e-14));

    FisherResult zero;
    const auto rz = crb(zero, 10, Interferometer::hom, kHomUnits);
    REQUIRE(rz.infinite_crb);
    REQUIRE(std::isinf(rz.delta_tau_crb));

    REQUIRE_THROWS_AS(crb(f, 0, Interferometer::hom, kHomUnits), std::invalid_argument);
}

TEST_CASE("every computed FI respects the matching QCRB", "[fisher]") {
    CounterRng rng(17);
    for (int i = 0; i < 40; ++i) {
        SpectralParams sp{0.005 + 0.045 * rng.uniform(), 0.005 + 0.045 * rng.uniform(), 1.0};
        ChannelParams ch{0.8 * rng.uniform(), rng.uniform()};
        NoiseParams np{3.0 * rng.uniform(), 1.5 * rng.uniform()};
        const double tau = 400.0 * rng.uniform();
        REQUIRE(hom_fi_nonresolved(tau, ch, sp, np).value <=
                qcrb(Interferometer::hom, sp) * (1.0 + 1e-12));
        REQUIRE(noon_fi_nonresolved(tau, ch, sp, np).value <=
                qcrb(Interferometer::noon, sp) * (1.0 + 1e-12));
    }
}
