#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "biphoton/model.hpp"
#include "biphoton/types.hpp"

namespace biphoton {

enum class Strategy { noon_resolved, noon_nonresolved, hom_resolved, hom_nonresolved };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::noon_resolved: return "noon_resolved";
        case Strategy::noon_nonresolved: return "noon_nonresolved";
        case Strategy::hom_resolved: return "hom_resolved";
        case Strategy::hom_nonresolved: return "hom_nonresolved";
    }
    return "unknown";
}

// Delay grid in omega_p*tau units (the figure axis convention).
struct TauGrid {
    double start = 0.0;
    double stop = 400.0;
    int points = 2001;
};

struct StrategyScore {
    Strategy strategy = Strategy::hom_nonresolved;
    double peak_fi = 0.0;          // max FI over the grid (1/s^2)
    double peak_fi_scaled = 0.0;   // peak_fi / omega_p^2
    double argmax_omega_p_tau = 0.0;
};

struct RankResult {
    std::vector<StrategyScore> ranking;  // descending peak FI
    bool no_information = false;         // every peak is zero (e.g. V = 0)
};

namespace detail {

inline ExperimentConfig strategy_config(Strategy s, const ChannelParams& ch,
                                        const SpectralParams& sp, const NoiseParams& np) {
    ExperimentConfig cfg;
    cfg.channel = ch;
    cfg.spectral = sp;
    cfg.noise = np;
    cfg.interferometer = (s == Strategy::hom_resolved || s == Strategy::hom_nonresolved)
                             ? Interferometer::hom
                             : Interferometer::noon;
    cfg.detection = (s == Strategy::noon_resolved || s == Strategy::hom_resolved)
                        ? Detection::resolved
                        : Detection::non_resolved;
    return cfg;
}

inline StrategyScore peak_over_grid(Strategy s, const ChannelParams& ch, const SpectralParams& sp,
                                    const NoiseParams& np, const TauGrid& grid) {
    if (grid.points < 2 || !(grid.stop > grid.start))
        throw std::invalid_argument("rank_strategies: grid must have >= 2 points and stop > start");
    const ExperimentConfig cfg = strategy_config(s, ch, sp, np);
    StrategyScore score;
    score.strategy = s;
    for (int i = 0; i < grid.points; ++i) {
        const double x =
            grid.start + (grid.stop - grid.start) * static_cast<double>(i) / (grid.points - 1);
        const double tau = x / sp.omega_p;
        const FisherResult fi = fisher_information(cfg, tau);
        if (fi.value > score.peak_fi) {
            score.peak_fi = fi.value;
            score.peak_fi_scaled = fi.value_scaled;
            score.argmax_omega_p_tau = x;
        }
    }
    return score;
}

}  // namespace detail

// Evaluates all four (interferometer x detection) FI curves on the grid and
// ranks them by peak FI, descending. Ties (and the V=0 no-information case)
// fall back to the fixed order noon_resolved, noon_nonresolved, hom_resolved,
// hom_nonresolved.
inline RankResult rank_strategies(const ChannelParams& ch, const SpectralParams& sp,
                                  const NoiseParams& np, const TauGrid& grid = {}) {
    constexpr std::array<Strategy, 4> order = {Strategy::noon_resolved, Strategy::noon_nonresolved,
                                               Strategy::hom_resolved, Strategy::hom_nonresolved};
    RankResult result;
    for (Strategy s : order) result.ranking.push_back(detail::peak_over_grid(s, ch, sp, np, grid));
    std::stable_sort(result.ranking.begin(), result.ranking.end(),
                     [](const StrategyScore& a, const StrategyScore& b) {
                         return a.peak_fi > b.peak_fi;
                     });
    result.no_information = result.ranking.front().peak_fi == 0.0;
    return result;
}

inline Interferometer top_interferometer(const RankResult& r) {
    const Strategy s = r.ranking.front().strategy;
    return (s == Strategy::hom_resolved || s == Strategy::hom_nonresolved) ? Interferometer::hom
                                                                           : Interferometer::noon;
}

struct CrossoverPoint {
    double eta_eps = 0.0;
    double hom_peak_fi = 0.0;
    double noon_peak_fi = 0.0;
};

struct CrossoverResult {
    bool found = false;
    double eta_eps_star = 0.0;            // switch point (seconds)
    std::vector<CrossoverPoint> curves;   // peak-FI samples across the range
    RankResult ranking_low;
    RankResult ranking_high;
};

namespace detail {

template <class F>
double golden_max(F&& f, double a, double b, int iters = 50) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

// Grid peak sharpened by a golden-section pass around the argmax, so the
// crossover bisection does not inherit grid-placement jitter.
inline double refined_peak(Strategy s, const ChannelParams& ch, const SpectralParams& sp,
                           const NoiseParams& np, const TauGrid& grid) {
    const StrategyScore score = peak_over_grid(s, ch, sp, np, grid);
    if (score.peak_fi == 0.0) return 0.0;
    const ExperimentConfig cfg = strategy_config(s, ch, sp, np);
    const double dx = (grid.stop - grid.start) / (grid.points - 1);
    const double lo = std::max(grid.start, score.argmax_omega_p_tau - dx) / sp.omega_p;
    const double hi = std::min(grid.stop, score.argmax_omega_p_tau + dx) / sp.omega_p;
    const double refined =
        golden_max([&](double tau) { return fisher_information(cfg, tau).value; }, lo, hi);
    return std::max(refined, score.peak_fi);
}

// Best achievable peak FI per interferometer (max over both detections).
inline CrossoverPoint interferometer_peaks(double eta_eps, const ChannelParams& ch,
                                           const SpectralParams& sp, double eta_theta,
                                           const TauGrid& grid) {
    const NoiseParams np{eta_eps, eta_theta};
    CrossoverPoint p;
    p.eta_eps = eta_eps;
    p.hom_peak_fi = std::max(refined_peak(Strategy::hom_resolved, ch, sp, np, grid),
                             refined_peak(Strategy::hom_nonresolved, ch, sp, np, grid));
    p.noon_peak_fi = std::max(refined_peak(Strategy::noon_resolved, ch, sp, np, grid),
                              refined_peak(Strategy::noon_nonresolved, ch, sp, np, grid));
    return p;
}

}  // namespace detail

// Bisection on eta_eps for the point where the better interferometer flips.
// Requires the ranking to differ at the two ends of the range; reports
// found=false (rather than inventing a value) when it does not.
inline CrossoverResult crossover_noise(const ChannelParams& ch, const SpectralParams& sp,
                                       const TauGrid& grid, std::pair<double, double> eta_range,
                                       double rel_tol = 1e-3, double eta_theta = 0.0) {
    if (!(eta_range.second > eta_range.first) || eta_range.first < 0.0)
        throw std::invalid_argument("crossover_noise: need 0 <= eta_lo < eta_hi");
    CrossoverResult result;
    NoiseParams lo_noise{eta_range.first, eta_theta};
    NoiseParams hi_noise{eta_range.second, eta_theta};
    result.ranking_low = rank_strategies(ch, sp, lo_noise, grid);
    result.ranking_high = rank_strategies(ch, sp, hi_noise, grid);

    auto lo_pt = detail::interferometer_peaks(eta_range.first, ch, sp, eta_theta, grid);
    auto hi_pt = detail::interferometer_peaks(eta_range.second, ch, sp, eta_theta, grid);
    result.curves.push_back(lo_pt);

    const auto sign = [](const CrossoverPoint& p) { return p.noon_peak_fi >= p.hom_peak_fi; };
    if (sign(lo_pt) == sign(hi_pt)) {
        result.curves.push_back(hi_pt);
        result.found = false;
        return result;
    }

    double a = eta_range.first;
    double b = eta_range.second;
    const double tol = rel_tol * (eta_range.second - eta_range.first);
    bool sa = sign(lo_pt);
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const auto mp = detail::interferometer_peaks(mid, ch, sp, eta_theta, grid);
        result.curves.push_back(mp);
        if (sign(mp) == sa)
            a = mid;
        else
            b = mid;
    }
    result.curves.push_back(hi_pt);
    std::sort(result.curves.begin(), result.curves.end(),
              [](const CrossoverPoint& x, const CrossoverPoint& y) { return x.eta_eps < y.eta_eps; });
    result.found = true;
    result.eta_eps_star = 0.5 * (a + b);
    return result;
}

}  // namespace biphoton
