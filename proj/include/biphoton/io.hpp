#pragma once

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton/model.hpp"
#include "biphoton/strategy.hpp"
#include "biphoton/types.hpp"

namespace biphoton {

// All floating-point output carries 12 significant digits; byte-stable
// across runs (classic C locale, no shortest-round-trip ambiguity).
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

enum class OutputFormat { csv, json };

// One noise setting of a sweep, in the dimensionless figure convention.
struct NoiseLevel {
    double eta_eps_wp = 0.0;  // eta_eps * omega_p
    double eta_theta = 0.0;
};

struct SweepSpec {
    ExperimentConfig config;  // detection field is ignored: both modes are emitted
    TauGrid tau_axis;
    std::vector<NoiseLevel> noise_levels = {{0.0, 0.0}};
    std::string output_path;  // empty = stdout
    OutputFormat format = OutputFormat::csv;
};

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    bool all_converged = true;
};

namespace detail {
inline std::string noise_suffix(const NoiseLevel& nl) {
    std::string s = "_e" + format_double(nl.eta_eps_wp);
    if (nl.eta_theta != 0.0) s += "_t" + format_double(nl.eta_theta);
    return s;
}
}  // namespace detail

// Columns: omega_p_tau, then per noise level the scaled FI for non-resolved
// and resolved detection (the latter with its quadrature error bound), and a
// trailing qcrb column (also in omega_p^2 units).
inline SweepTable run_sweep(const SweepSpec& spec) {
    if (spec.tau_axis.points < 2 || !(spec.tau_axis.stop > spec.tau_axis.start))
        throw std::invalid_argument("sweep: tau axis needs points >= 2 and stop > start");
    const ExperimentConfig base = validate(spec.config);
    const double wp = base.spectral.omega_p;

    SweepTable table;
    table.columns.push_back("omega_p_tau");
    for (const auto& nl : spec.noise_levels) {
        const std::string suffix = detail::noise_suffix(nl);
        table.columns.push_back("fi_nonres" + suffix);
        table.columns.push_back("fi_res" + suffix);
        table.columns.push_back("fi_res" + suffix + "_err");
    }
    table.columns.push_back("qcrb");

    for (int i = 0; i < spec.tau_axis.points; ++i) {
        const double x = spec.tau_axis.start + (spec.tau_axis.stop - spec.tau_axis.start) *
                                                   static_cast<double>(i) /
                                                   (spec.tau_axis.points - 1);
        const double tau = x / wp;
        std::vector<double> row;
        row.push_back(x);
        for (const auto& nl : spec.noise_levels) {
            ExperimentConfig cfg = base;
            cfg.noise.eta_eps = nl.eta_eps_wp / wp;
            cfg.noise.eta_theta = nl.eta_theta;
            cfg.detection = Detection::non_resolved;
            row.push_back(fisher_information(cfg, tau).value_scaled);
            cfg.detection = Detection::resolved;
            const FisherResult res = fisher_information(cfg, tau);
            table.all_converged = table.all_converged && res.converged;
            row.push_back(res.value_scaled);
            row.push_back(res.err_estimate / (wp * wp));
        }
        row.push_back(qcrb_value(base) / (wp * wp));
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline void write_csv(std::ostream& os, const SweepTable& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ',';
        os << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const SweepTable& table) {
    os << "{\n  \"columns\": [";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) os << ", ";
        os << '"' << table.columns[i] << '"';
    }
    os << "],\n  \"rows\": [\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << "    [";
        for (std::size_t i = 0; i < table.rows[r].size(); ++i) {
            if (i) os << ", ";
            os << format_double(table.rows[r][i]);
        }
        os << (r + 1 < table.rows.size() ? "],\n" : "]\n");
    }
    os << "  ]\n}\n";
}

// Flat key = value configuration text; '#' starts a comment; blank lines are
// skipped. Keys mirror the CLI flag names with underscores.
inline std::map<std::string, std::string> parse_config_file(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    const auto trim = [](std::string s) {
        const char* ws = " \t\r";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

// Figure presets. fig1a/b/c fix (gamma, V) = (0,1), (0,0.9), (0.4,0.9) with
// omega_p = 100 sigma_minus and eta_eps*omega_p columns {0, 1, 3}; fig2 is
// the N00N analogue (omega_p = 100 sigma_plus) with an extra eta_theta = 1
// column. Internally omega_p = 1.
struct Preset {
    ExperimentConfig config;
    std::vector<NoiseLevel> noise_levels;
};

inline Preset preset(const std::string& name) {
    Preset p;
    p.config.spectral = SpectralParams{0.01, 0.01, 1.0};
    p.noise_levels = {{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}};
    if (name == "fig1a") {
        p.config.interferometer = Interferometer::hom;
        p.config.channel = {0.0, 1.0};
    } else if (name == "fig1b") {
        p.config.interferometer = Interferometer::hom;
        p.config.channel = {0.0, 0.9};
    } else if (name == "fig1c") {
        p.config.interferometer = Interferometer::hom;
        p.config.channel = {0.4, 0.9};
    } else if (name == "fig2") {
        p.config.interferometer = Interferometer::noon;
        p.config.channel = {0.0, 1.0};
        p.noise_levels.push_back({0.0, 1.0});
    } else {
        throw std::invalid_argument("unknown preset '" + name +
                                    "' (expected fig1a, fig1b, fig1c or fig2)");
    }
    return p;
}

}  // namespace biphoton
