// Command-line surface for the biphoton sensing library: outcome
// probabilities, Fisher-information sweeps, Monte Carlo MLE campaigns,
// strategy recommendation and the numerical cross-validation suite.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biphoton/biphoton.hpp"
#include "biphoton/validation.hpp"

namespace {

using namespace biphoton;

// Parameter layering: explicit flags > config file > preset > defaults.
struct ParamOverlay {
    std::optional<double> gamma, visibility, sigma_minus, sigma_plus, omega_p, eta_eps_wp,
        eta_theta;
    std::optional<std::string> interferometer, detection;
};

struct SharedOptions {
    ParamOverlay values;  // bound storage, promoted to the overlay after parse
    double gamma = 0, visibility = 0, sigma_minus = 0, sigma_plus = 0, omega_p = 0,
           eta_eps_wp = 0, eta_theta = 0;
    std::string interferometer, detection, preset_name, config_path;
    CLI::Option *o_gamma = nullptr, *o_visibility = nullptr, *o_sigma_minus = nullptr,
                *o_sigma_plus = nullptr, *o_omega_p = nullptr, *o_eta_eps_wp = nullptr,
                *o_eta_theta = nullptr, *o_interferometer = nullptr, *o_detection = nullptr;

    void add_to(CLI::App* cmd) {
        o_gamma = cmd->add_option("--gamma", gamma, "photon-loss probability in [0,1)");
        o_visibility =
            cmd->add_option("--visibility", visibility, "interference visibility in [0,1]");
        o_sigma_minus = cmd->add_option("--sigma-minus", sigma_minus,
                                        "RMS frequency-difference bandwidth (rad/s)");
        o_sigma_plus =
            cmd->add_option("--sigma-plus", sigma_plus, "RMS frequency-sum bandwidth (rad/s)");
        o_omega_p = cmd->add_option("--omega-p", omega_p, "pump center frequency (rad/s)");
        o_eta_eps_wp =
            cmd->add_option("--eta-eps-wp", eta_eps_wp, "eta_eps * omega_p (dimensionless)");
        o_eta_theta = cmd->add_option("--eta-theta", eta_theta, "eta_theta (rad)");
        o_interferometer = cmd->add_option("--interferometer", interferometer, "hom or noon");
        o_detection = cmd->add_option("--detection", detection, "resolved or nonresolved");
        cmd->add_option("--preset", preset_name, "fig1a, fig1b, fig1c or fig2");
        cmd->add_option("--config", config_path, "flat key = value config file");
    }

    void promote() {
        if (o_gamma->count()) values.gamma = gamma;
        if (o_visibility->count()) values.visibility = visibility;
        if (o_sigma_minus->count()) values.sigma_minus = sigma_minus;
        if (o_sigma_plus->count()) values.sigma_plus = sigma_plus;
        if (o_omega_p->count()) values.omega_p = omega_p;
        if (o_eta_eps_wp->count()) values.eta_eps_wp = eta_eps_wp;
        if (o_eta_theta->count()) values.eta_theta = eta_theta;
        if (o_interferometer->count()) values.interferometer = interferometer;
        if (o_detection->count()) values.detection = detection;
    }
};

ParamOverlay overlay_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    const auto kv = parse_config_file(in);
    ParamOverlay o;
    const auto num = [&](const char* key, std::optional<double>& slot) {
        auto it = kv.find(key);
        if (it != kv.end()) slot = std::stod(it->second);
    };
    num("gamma", o.gamma);
    num("visibility", o.visibility);
    num("sigma_minus", o.sigma_minus);
    num("sigma_plus", o.sigma_plus);
    num("omega_p", o.omega_p);
    num("eta_eps_wp", o.eta_eps_wp);
    num("eta_theta", o.eta_theta);
    if (kv.count("interferometer")) o.interferometer = kv.at("interferometer");
    if (kv.count("detection")) o.detection = kv.at("detection");
    return o;
}

void apply_overlay(ExperimentConfig& cfg, const ParamOverlay& o) {
    double eta_eps_wp = cfg.noise.eta_eps * cfg.spectral.omega_p;
    if (o.gamma) cfg.channel.gamma = *o.gamma;
    if (o.visibility) cfg.channel.visibility = *o.visibility;
    if (o.sigma_minus) cfg.spectral.sigma_minus = *o.sigma_minus;
    if (o.sigma_plus) cfg.spectral.sigma_plus = *o.sigma_plus;
    if (o.omega_p) cfg.spectral.omega_p = *o.omega_p;
    if (o.eta_eps_wp) eta_eps_wp = *o.eta_eps_wp;
    cfg.noise.eta_eps = eta_eps_wp / cfg.spectral.omega_p;
    if (o.eta_theta) cfg.noise.eta_theta = *o.eta_theta;
    const auto parse_enum = [](const std::string& s, const char* what, auto a, auto b,
                               const char* na, const char* nb) {
        if (s == na) return a;
        if (s == nb) return b;
        throw std::invalid_argument(std::string(what) + " must be " + na + " or " + nb +
                                    ", got '" + s + "'");
    };
    if (o.interferometer)
        cfg.interferometer = parse_enum(*o.interferometer, "--interferometer", Interferometer::hom,
                                        Interferometer::noon, "hom", "noon");
    if (o.detection)
        cfg.detection = parse_enum(*o.detection, "--detection", Detection::resolved,
                                   Detection::non_resolved, "resolved", "nonresolved");
}

// Resolved scenario plus the preset's sweep noise levels (when any).
struct ResolvedScenario {
    ExperimentConfig config;
    std::vector<NoiseLevel> preset_levels;
};

ResolvedScenario resolve_scenario(SharedOptions& shared) {
    shared.promote();
    ResolvedScenario out;
    if (!shared.preset_name.empty()) {
        const Preset p = preset(shared.preset_name);
        out.config = p.config;
        out.preset_levels = p.noise_levels;
    }
    if (!shared.config_path.empty()) apply_overlay(out.config, overlay_from_file(shared.config_path));
    apply_overlay(out.config, shared.values);
    out.config = validate(out.config);
    return out;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output path: " + path);
    return file;
}

int run_probs(const ResolvedScenario& sc, double omega_p_tau, std::optional<double> freq) {
    const double tau = omega_p_tau / sc.config.spectral.omega_p;
    const OutcomeTriple t = outcome_probs(sc.config, tau);
    std::cout << "p2=" << format_double(t.p2) << " p1=" << format_double(t.p1)
              << " p0=" << format_double(t.p0) << "\n";
    if (freq) {
        const SpectralOutcomeTriple d = spectral_density(sc.config, tau, *freq);
        std::cout << "freq=" << format_double(d.freq) << " d2=" << format_double(d.d2)
                  << " d1=" << format_double(d.d1) << " d0=" << format_double(d.d0) << "\n";
    }
    return 0;
}

int run_sweep_cmd(const ResolvedScenario& sc, const TauGrid& axis,
                  const std::vector<double>& eta_levels, const std::vector<double>& theta_levels,
                  const std::string& out, const std::string& format) {
    SweepSpec spec;
    spec.config = sc.config;
    spec.tau_axis = axis;
    if (!eta_levels.empty()) {
        spec.noise_levels.clear();
        for (std::size_t i = 0; i < eta_levels.size(); ++i) {
            const double theta = theta_levels.empty()
                                     ? sc.config.noise.eta_theta
                                     : theta_levels[std::min(i, theta_levels.size() - 1)];
            spec.noise_levels.push_back({eta_levels[i], theta});
        }
    } else if (!sc.preset_levels.empty()) {
        spec.noise_levels = sc.preset_levels;
    } else {
        spec.noise_levels = {{sc.config.noise.eta_eps * sc.config.spectral.omega_p,
                              sc.config.noise.eta_theta}};
    }
    spec.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    const SweepTable table = run_sweep(spec);
    std::ofstream file;
    std::ostream& os = open_output(out, file);
    if (spec.format == OutputFormat::json)
        write_json(os, table);
    else
        write_csv(os, table);
    if (!table.all_converged) {
        std::cerr << "sweep: some resolved-FI quadratures did not reach tolerance\n";
        return 1;
    }
    return 0;
}

int run_simulate(const ResolvedScenario& sc, double omega_p_tau, int n_trials, long long n_pairs,
                 unsigned long long seed, const std::string& out) {
    const double tau = omega_p_tau / sc.config.spectral.omega_p;
    const EstimationReport rep = run_campaign(sc.config, tau, n_trials, n_pairs, seed);
    std::ofstream file;
    std::ostream& os = open_output(out, file);
    os << "{\n";
    os << "  \"interferometer\": \"" << to_string(sc.config.interferometer) << "\",\n";
    os << "  \"detection\": \"" << to_string(sc.config.detection) << "\",\n";
    os << "  \"tau_true\": " << format_double(rep.tau_true) << ",\n";
    os << "  \"omega_p_tau_true\": "
       << format_double(rep.tau_true * sc.config.spectral.omega_p) << ",\n";
    os << "  \"tau_hat_mean\": " << format_double(rep.tau_hat_mean) << ",\n";
    os << "  \"tau_hat_std\": " << format_double(rep.tau_hat_std) << ",\n";
    os << "  \"crb_std\": "
       << (rep.infinite_crb ? std::string("\"infinite\"") : format_double(rep.crb_std)) << ",\n";
    os << "  \"saturation_ratio\": " << format_double(rep.saturation_ratio) << ",\n";
    os << "  \"infinite_crb\": " << (rep.infinite_crb ? "true" : "false") << ",\n";
    os << "  \"n_trials\": " << rep.n_trials << ",\n";
    os << "  \"n_pairs_per_trial\": " << rep.n_pairs_per_trial << ",\n";
    os << "  \"n_boundary_hits\": " << rep.n_boundary_hits << ",\n";
    os << "  \"seed\": " << rep.seed << "\n";
    os << "}\n";
    return 0;
}

int run_recommend(const ResolvedScenario& sc, const TauGrid& grid, std::optional<double> cross_lo,
                  std::optional<double> cross_hi) {
    const auto& cfg = sc.config;
    const RankResult rank = rank_strategies(cfg.channel, cfg.spectral, cfg.noise, grid);
    if (rank.no_information)
        std::cout << "no information: every strategy has zero Fisher information\n";
    std::cout << "rank,strategy,peak_fi_over_omega_p2,argmax_omega_p_tau\n";
    for (std::size_t i = 0; i < rank.ranking.size(); ++i) {
        const auto& s = rank.ranking[i];
        std::cout << (i + 1) << ',' << to_string(s.strategy) << ','
                  << format_double(s.peak_fi_scaled) << ','
                  << format_double(s.argmax_omega_p_tau) << "\n";
    }
    if (cross_lo && cross_hi) {
        const double wp = cfg.spectral.omega_p;
        const auto cr = crossover_noise(cfg.channel, cfg.spectral, grid,
                                        {*cross_lo / wp, *cross_hi / wp}, 1e-3,
                                        cfg.noise.eta_theta);
        if (cr.found)
            std::cout << "crossover_eta_eps_wp=" << format_double(cr.eta_eps_star * wp) << "\n";
        else
            std::cout << "no crossover in range\n";
    }
    return 0;
}

int run_validate(int draws, unsigned long long seed) {
    ValidationOptions opt;
    opt.normalization_draws = draws;
    opt.oracle_draws = draws;
    opt.fisher_draws = draws;
    opt.seed = seed;
    bool all_pass = true;
    for (const auto& c : run_validation_suite(opt)) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " (worst deviation "
                  << format_double(c.worst) << ", allowed " << format_double(c.threshold)
                  << ")\n";
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-photon interferometric delay sensing under Gaussian phase noise"};
    app.require_subcommand(1);

    SharedOptions p_probs, p_sweep, p_sim, p_rec;

    double omega_p_tau = 0.0;
    double freq_value = 0.0;
    auto* probs = app.add_subcommand("probs", "outcome probabilities at a delay");
    p_probs.add_to(probs);
    probs->add_option("--tau", omega_p_tau, "delay in omega_p*tau units")->required();
    auto* freq_opt = probs->add_option(
        "--freq", freq_value, "also print resolved densities at this frequency (rad/s)");

    TauGrid axis;
    std::vector<double> eta_levels, theta_levels;
    std::string out_path, format = "csv";
    auto* sweep = app.add_subcommand("sweep", "FI vs delay table (CSV/JSON)");
    p_sweep.add_to(sweep);
    sweep->add_option("--tau-start", axis.start, "grid start, omega_p*tau units");
    sweep->add_option("--tau-stop", axis.stop, "grid stop, omega_p*tau units");
    sweep->add_option("--tau-points", axis.points, "grid point count");
    sweep->add_option("--eta-eps-levels", eta_levels,
                      "noise columns as eta_eps*omega_p values (overrides preset levels)");
    sweep->add_option("--eta-theta-levels", theta_levels,
                      "eta_theta per noise column (last value broadcasts)");
    sweep->add_option("--out", out_path, "output path (default stdout)");
    sweep->add_option("--format", format, "csv or json");

    double tau_true = 0.0;
    int n_trials = 200;
    long long n_pairs = 10000;
    unsigned long long seed = 20240801ull;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo MLE campaign (JSON report)");
    p_sim.add_to(simulate);
    simulate->add_option("--tau-true", tau_true, "true delay, omega_p*tau units")->required();
    simulate->add_option("--n-trials", n_trials, "number of repeated experiments");
    simulate->add_option("--n-pairs", n_pairs, "photon pairs per experiment");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--out", out_path, "output path (default stdout)");

    double cross_lo_v = 0.0, cross_hi_v = 0.0;
    auto* recommend = app.add_subcommand("recommend", "rank strategies by peak FI");
    p_rec.add_to(recommend);
    recommend->add_option("--tau-start", axis.start, "grid start, omega_p*tau units");
    recommend->add_option("--tau-stop", axis.stop, "grid stop, omega_p*tau units");
    recommend->add_option("--tau-points", axis.points, "grid point count");
    auto* clo =
        recommend->add_option("--crossover-eta-lo", cross_lo_v, "crossover scan start, eta*omega_p");
    auto* chi =
        recommend->add_option("--crossover-eta-hi", cross_hi_v, "crossover scan stop, eta*omega_p");

    int validate_draws = 200;
    unsigned long long validate_seed = 7;
    auto* validate_cmd =
        app.add_subcommand("validate", "run the oracle-equivalence validation suite");
    validate_cmd->add_option("--draws", validate_draws, "random draws per check");
    validate_cmd->add_option("--seed", validate_seed, "RNG seed for the draws");

    CLI11_PARSE(app, argc, argv);

    try {
        if (probs->parsed()) {
            std::optional<double> freq;
            if (freq_opt->count()) freq = freq_value;
            return run_probs(resolve_scenario(p_probs), omega_p_tau, freq);
        }
        if (sweep->parsed())
            return run_sweep_cmd(resolve_scenario(p_sweep), axis, eta_levels, theta_levels,
                                 out_path, format);
        if (simulate->parsed())
            return run_simulate(resolve_scenario(p_sim), tau_true, n_trials, n_pairs, seed,
                                out_path);
        if (recommend->parsed()) {
            std::optional<double> lo, hi;
            if (clo->count()) lo = cross_lo_v;
            if (chi->count()) hi = cross_hi_v;
            return run_recommend(resolve_scenario(p_rec), axis, lo, hi);
        }
        if (validate_cmd->parsed()) return run_validate(validate_draws, validate_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
