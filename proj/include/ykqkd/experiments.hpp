// Copyright 2026 The ykqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/**
 * Experiment drivers behind the `ykqkd` command line tool: configuration
 * parsing, the four experiments, CSV serialization and SVG rendering.
 */

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ykqkd/detection.hpp"
#include "ykqkd/protocol.hpp"
#include "ykqkd/quantum_core.hpp"
#include "ykqkd/simulation.hpp"

namespace ykqkd {

enum class Experiment { Fig2a, Fig2b, BerSweep, EveDetect };

inline std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Fig2a:
            return "fig2a";
        case Experiment::Fig2b:
            return "fig2b";
        case Experiment::BerSweep:
            return "ber-sweep";
        case Experiment::EveDetect:
            return "eve-detect";
    }
    return "unknown";
}

class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline Experiment parse_experiment(std::string_view name) {
    for (auto e : {Experiment::Fig2a, Experiment::Fig2b, Experiment::BerSweep, Experiment::EveDetect}) {
        if (experiment_name(e) == name) {
            return e;
        }
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "' (expected fig2a, fig2b, ber-sweep or eve-detect)");
}

struct ExperimentConfig {
    Experiment experiment = Experiment::Fig2a;
    double alpha_max = 4.0;
    std::vector<unsigned> m_list;
    std::vector<double> distances_km{10, 50, 100, 150, 200};
    // Eve's amplitude factor. Unset: 1 for the fig2 experiments, kappa for ber-sweep.
    std::optional<double> eta;
    std::uint64_t symbols = 100000;
    std::uint64_t seed = 1;
    std::string out;  // empty: stdout
    bool emit_svg = false;
    double loss_db_per_km = 0.2;
    double dark_mean = 0.0;
    double threshold = 0.15;
    std::uint64_t key_seed = ProtocolConfig{}.key_seed;

    ProtocolConfig protocol(unsigned m) const {
        ProtocolConfig p;
        p.alpha_max = alpha_max;
        p.m = m;
        p.key_seed = key_seed;
        p.detection_threshold = threshold;
        return p;
    }
    ChannelConfig channel(double km) const {
        ChannelConfig c;
        c.fiber_length_km = km;
        c.loss_db_per_km = loss_db_per_km;
        c.dark_mean = dark_mean;
        return c;
    }
};

/// Per-experiment defaults for keys the user did not set.
inline ExperimentConfig default_config(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    switch (e) {
        case Experiment::Fig2a:
            c.alpha_max = 4.0;
            c.m_list = {1, 2, 4, 8, 16, 32};
            break;
        case Experiment::Fig2b:
            c.alpha_max = 4.0;
            c.m_list = {1, 2, 4, 8, 16, 32, 64};
            break;
        case Experiment::BerSweep:
        case Experiment::EveDetect:
            c.alpha_max = 700.0;
            c.m_list = {4};
            break;
    }
    return c;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline double parse_real(const std::string &key, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError("malformed number for key '" + key + "': '" + text + "'");
    }
    return v;
}

inline std::uint64_t parse_count(const std::string &key, const std::string &text) {
    errno = 0;
    char *end = nullptr;
    if (text.empty() || text.front() == '-') {
        throw ConfigError("malformed number for key '" + key + "': '" + text + "'");
    }
    const unsigned long long v = std::strtoull(text.c_str(), &end, 0);
    if (end != text.c_str() + text.size() || errno == ERANGE) {
        throw ConfigError("malformed number for key '" + key + "': '" + text + "'");
    }
    return v;
}

inline bool parse_bool(const std::string &key, const std::string &text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "0" || text == "false" || text == "no" || text == "off") {
        return false;
    }
    throw ConfigError("malformed boolean for key '" + key + "': '" + text + "'");
}

inline void require(bool ok, const std::string &message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

}  // namespace detail

/// Parses flat `key = value` text. Blank lines and `#` comments are ignored.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string t = detail::trim(line);
        if (t.empty()) {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        out[detail::trim(std::string_view(t).substr(0, eq))] = detail::trim(std::string_view(t).substr(eq + 1));
    }
    return out;
}

inline constexpr std::string_view kConfigKeys[] = {
    "experiment", "alpha_max", "m_list",    "distances", "eta",       "symbols",  "seed",
    "out",        "svg",       "loss_db_per_km", "dark_mean", "threshold", "key_seed",
};

/// Builds a configuration from file text with `overrides` (from command-line
/// flags) taking precedence. Keys absent from both take per-experiment defaults.
inline ExperimentConfig parse_config(std::string_view file_text, const std::map<std::string, std::string> &overrides = {}) {
    auto kv = parse_key_values(file_text);
    for (const auto &[k, v] : overrides) {
        kv[k] = v;
    }
    for (const auto &[k, v] : kv) {
        if (std::find(std::begin(kConfigKeys), std::end(kConfigKeys), k) == std::end(kConfigKeys)) {
            throw ConfigError("unknown key '" + k + "'");
        }
    }
    const auto exp = kv.find("experiment");
    if (exp == kv.end() || exp->second.empty()) {
        throw ConfigError("missing experiment name");
    }
    ExperimentConfig c = default_config(parse_experiment(exp->second));

    for (const auto &[k, v] : kv) {
        if (k == "alpha_max") {
            c.alpha_max = detail::parse_real(k, v);
            detail::require(c.alpha_max > 0.0, "alpha_max must be positive");
        } else if (k == "m_list") {
            c.m_list.clear();
            for (const auto &item : detail::split(v, ',')) {
                const auto m = detail::parse_count(k, item);
                detail::require(m >= 1 && m <= (1u << 20), "m_list entries must lie in 1..2^20");
                c.m_list.push_back(static_cast<unsigned>(m));
            }
        } else if (k == "distances") {
            c.distances_km.clear();
            for (const auto &item : detail::split(v, ',')) {
                const double d = detail::parse_real(k, item);
                detail::require(d >= 0.0, "distances must be non-negative");
                c.distances_km.push_back(d);
            }
        } else if (k == "eta") {
            c.eta = detail::parse_real(k, v);
            detail::require(*c.eta > 0.0, "eta must be positive");
        } else if (k == "symbols") {
            c.symbols = detail::parse_count(k, v);
            detail::require(c.symbols > 0, "symbols must be positive");
        } else if (k == "seed") {
            c.seed = detail::parse_count(k, v);
        } else if (k == "out") {
            c.out = v;
        } else if (k == "svg") {
            c.emit_svg = detail::parse_bool(k, v);
        } else if (k == "loss_db_per_km") {
            c.loss_db_per_km = detail::parse_real(k, v);
            detail::require(c.loss_db_per_km >= 0.0, "loss_db_per_km must be non-negative");
        } else if (k == "dark_mean") {
            c.dark_mean = detail::parse_real(k, v);
            detail::require(c.dark_mean >= 0.0, "dark_mean must be non-negative");
        } else if (k == "threshold") {
            c.threshold = detail::parse_real(k, v);
            detail::require(c.threshold > 0.0 && c.threshold < 1.0, "threshold must lie in (0, 1)");
        } else if (k == "key_seed") {
            c.key_seed = detail::parse_count(k, v);
            detail::require((c.key_seed & ((1ull << KeyStream::kDefaultLength) - 1)) != 0,
                            "key_seed must have a non-zero low 31 bits");
        }
    }
    detail::require(!c.m_list.empty(), "m_list must not be empty");
    detail::require(!c.distances_km.empty(), "distances must not be empty");
    std::sort(c.m_list.begin(), c.m_list.end());
    c.m_list.erase(std::unique(c.m_list.begin(), c.m_list.end()), c.m_list.end());
    if (c.experiment == Experiment::BerSweep || c.experiment == Experiment::EveDetect) {
        detail::require(is_power_of_two(c.m_list.front()), "simulated experiments need M to be a power of two");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Tabular output.

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> warnings;

    std::size_t column(std::string_view name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw std::out_of_range("Table: no column '" + std::string(name) + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    }
};

/// Shortest of %.15g that stays locale-independent for the CSV dialect.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string to_csv(const Table &t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        out += (i ? "," : "") + t.header[i];
    }
    out += '\n';
    for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline Table parse_csv(std::string_view text) {
    Table t;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("parse_csv: missing header");
    }
    t.header = detail::split(line, ',');
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<double> row;
        for (const auto &cell : detail::split(line, ',')) {
            row.push_back(detail::parse_real("csv", cell));
        }
        if (row.size() != t.header.size()) {
            throw std::runtime_error("parse_csv: ragged row");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Experiments.

struct AxesSpec {
    std::string title;
    std::string x_column;
    std::vector<std::string> y_columns;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

struct ExperimentOutput {
    Table table;
    AxesSpec axes;
    std::optional<bool> eve_detected;  // eve-detect only
};

/// Eve's state-identification error for 2M levels versus M: closest-pair
/// lower bound, square-root measurement upper bound and pure guessing.
inline ExperimentOutput cmd_fig2a(const ExperimentConfig &cfg) {
    ExperimentOutput o;
    o.table.header = {"M", "n_states", "neighbor_lower", "srm_upper", "pure_guess"};
    const double scale = cfg.eta.value_or(1.0);
    for (unsigned m : cfg.m_list) {
        const AmplitudeGrid grid(cfg.alpha_max, m);
        const auto states = grid.states(scale);
        const auto srm = srm_error(states);
        if (srm.rank_deficiency) {
            o.table.warnings.push_back("M=" + std::to_string(m) + ": Gram matrix numerically rank deficient (" +
                                       std::to_string(srm.rank_deficiency) + " eigenvalues cut)");
        }
        o.table.rows.push_back({static_cast<double>(m), static_cast<double>(grid.size()),
                                neighbor_lower_bound(grid, scale).error_probability, srm.error_probability,
                                pure_guess_error(grid.size()).error_probability});
    }
    o.axes = {"Eve state identification, 2M levels", "M", {"neighbor_lower", "srm_upper", "pure_guess"},
              "M (number of basis pairs)", "error probability", true, false};
    return o;
}

/// Eve's bit error when bits are attached to alternating levels.
inline ExperimentOutput cmd_fig2b(const ExperimentConfig &cfg) {
    ExperimentOutput o;
    o.table.header = {"M", "helstrom_mixed_error"};
    const double scale = cfg.eta.value_or(1.0);
    for (unsigned m : cfg.m_list) {
        const PairAssignment assignment(AmplitudeGrid(cfg.alpha_max, m));
        const auto ops = eve_density_operators(assignment, BitAssignmentScheme::AlternatingNoOverlap, scale);
        o.table.rows.push_back(
            {static_cast<double>(m), helstrom_mixed_binary(ops.rho1, ops.rho0, 0.5).error_probability});
    }
    o.axes = {"Eve bit error, alternating levels", "M", {"helstrom_mixed_error"}, "M (number of basis pairs)",
              "error probability", true, false};
    return o;
}

namespace detail {

template <typename Fn>
auto parallel_map(const std::vector<double> &xs, Fn fn) {
    using R = decltype(fn(0.0));
    std::vector<std::future<R>> futures;
    futures.reserve(xs.size());
    for (double x : xs) {
        futures.push_back(std::async(std::launch::async, fn, x));
    }
    std::vector<R> out;
    out.reserve(xs.size());
    for (auto &f : futures) {
        out.push_back(f.get());
    }
    return out;
}

inline std::vector<double> sorted_distances(const ExperimentConfig &cfg) {
    std::vector<double> d = cfg.distances_km;
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace detail

/// Bob's BER (analytic and Monte-Carlo, no eavesdropper) and a translucent
/// Eve's figures versus fiber length. Eve's amplitude factor equals kappa
/// unless `eta` is set.
inline ExperimentOutput cmd_ber_sweep(const ExperimentConfig &cfg) {
    ExperimentOutput o;
    o.table.header = {"distance_km", "kappa",          "bob_ber_analytic", "bob_ber_mc",
                      "eve_bit_error", "eve_state_lower", "eve_state_srm"};
    const unsigned m = cfg.m_list.front();
    const ProtocolConfig pcfg = cfg.protocol(m);
    const auto distances = detail::sorted_distances(cfg);

    struct Point {
        std::vector<double> row;
        std::vector<std::string> warnings;
    };
    const auto points = detail::parallel_map(distances, [&](double km) {
        const ChannelConfig ccfg = cfg.channel(km);
        const double kappa = amplitude_transmission(ccfg);
        const RunResult run = run_protocol(pcfg, ccfg, NoEve{}, cfg.symbols, cfg.seed);
        const EveBounds eve = eve_bounds(pcfg.assignment(), cfg.eta.value_or(kappa), pcfg.scheme);
        Point p;
        p.row = {km, kappa, *run.bob_ber_analytic, run.bob_ber, eve.bit_error, eve.state_id_lower, eve.state_id_srm};
        for (const auto &w : run.warnings) {
            p.warnings.push_back(format_number(km) + " km: " + w);
        }
        return p;
    });
    for (const auto &p : points) {
        o.table.rows.push_back(p.row);
        o.table.warnings.insert(o.table.warnings.end(), p.warnings.begin(), p.warnings.end());
    }
    o.axes = {"Bob and Eve error versus distance", "distance_km",
              {"bob_ber_analytic", "bob_ber_mc", "eve_state_lower", "eve_state_srm"}, "distance (km)",
              "error probability", false, false};
    return o;
}

/// Paired runs with and without an intercept-resend Eve on identical random
/// streams. Eve counts as detected when every opaque-arm BER exceeds the
/// threshold.
inline ExperimentOutput cmd_eve_detect(const ExperimentConfig &cfg) {
    ExperimentOutput o;
    o.table.header = {"distance_km", "kappa", "no_eve_ber", "opaque_eve_ber", "eve_state_id_error", "eve_bit_error",
                      "detected"};
    const ProtocolConfig pcfg = cfg.protocol(cfg.m_list.front());
    const auto distances = detail::sorted_distances(cfg);

    struct Point {
        RunResult clean;
        RunResult attacked;
    };
    const auto points = detail::parallel_map(distances, [&](double km) {
        const ChannelConfig ccfg = cfg.channel(km);
        return Point{run_protocol(pcfg, ccfg, NoEve{}, cfg.symbols, cfg.seed),
                     run_protocol(pcfg, ccfg, OpaqueEve{}, cfg.symbols, cfg.seed)};
    });

    bool all_detected = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto &p = points[i];
        all_detected = all_detected && p.attacked.eve_detected;
        o.table.rows.push_back({distances[i], p.clean.kappa, p.clean.bob_ber, p.attacked.bob_ber,
                                *p.attacked.eve_state_id_empirical, *p.attacked.eve_bit_error_empirical,
                                p.attacked.eve_detected ? 1.0 : 0.0});
        if (p.clean.eve_detected) {
            o.table.warnings.push_back(format_number(distances[i]) +
                                       " km: no-Eve BER exceeds the detection threshold (false alarm)");
        }
        for (const auto &w : p.clean.warnings) {
            o.table.warnings.push_back(format_number(distances[i]) + " km: " + w);
        }
    }
    o.eve_detected = all_detected;
    o.axes = {"Intercept-resend detection", "distance_km", {"no_eve_ber", "opaque_eve_ber"}, "distance (km)",
              "Bob bit error rate", false, false};
    return o;
}

inline ExperimentOutput run_experiment(const ExperimentConfig &cfg) {
    switch (cfg.experiment) {
        case Experiment::Fig2a:
            return cmd_fig2a(cfg);
        case Experiment::Fig2b:
            return cmd_fig2b(cfg);
        case Experiment::BerSweep:
            return cmd_ber_sweep(cfg);
        case Experiment::EveDetect:
            return cmd_eve_detect(cfg);
    }
    throw std::logic_error("run_experiment: unhandled experiment");
}

// ---------------------------------------------------------------------------
// SVG.

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

inline std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct AxisMap {
    double lo;
    double hi;
    bool log;
    double px_lo;
    double px_hi;

    double operator()(double v) const {
        const double a = log ? std::log10(v) : v;
        const double b0 = log ? std::log10(lo) : lo;
        const double b1 = log ? std::log10(hi) : hi;
        const double t = b1 > b0 ? (a - b0) / (b1 - b0) : 0.5;
        return px_lo + t * (px_hi - px_lo);
    }
};

}  // namespace detail

/// Standalone SVG line chart: one polyline per y column, a marker at every
/// point, linear or base-10 logarithmic axes. Non-positive values are
/// dropped from logarithmic axes.
inline std::string emit_svg(const Table &table, const AxesSpec &axes) {
    if (table.rows.empty()) {
        throw std::invalid_argument("emit_svg: no rows to plot");
    }
    constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 160, kTop = 40, kBottom = 60;
    static constexpr const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    const std::size_t xc = table.column(axes.x_column);
    std::vector<std::size_t> ycs;
    for (const auto &name : axes.y_columns) {
        ycs.push_back(table.column(name));
    }

    auto usable = [](double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); };
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto &row : table.rows) {
        if (!usable(row[xc], axes.log_x)) {
            continue;
        }
        x_lo = std::min(x_lo, row[xc]);
        x_hi = std::max(x_hi, row[xc]);
        for (auto yc : ycs) {
            if (usable(row[yc], axes.log_y)) {
                y_lo = std::min(y_lo, row[yc]);
                y_hi = std::max(y_hi, row[yc]);
            }
        }
    }
    if (!std::isfinite(x_lo) || !std::isfinite(y_lo)) {
        throw std::invalid_argument("emit_svg: no plottable points");
    }
    if (!axes.log_y) {
        y_lo = std::min(y_lo, 0.0);
    }
    if (y_hi == y_lo) {
        y_hi = axes.log_y ? y_lo * 10.0 : y_lo + 1.0;
    }
    const detail::AxisMap xmap{x_lo, x_hi, axes.log_x, kLeft, kWidth - kRight};
    const detail::AxisMap ymap{y_lo, y_hi, axes.log_y, kHeight - kBottom, kTop};

    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << detail::xml_escape(axes.title) << "</text>\n";

    // Frame and ticks.
    s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
      << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    auto ticks = [](double lo, double hi, bool log) {
        std::vector<double> t;
        if (log) {
            for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
                const double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) {
                    t.push_back(v);
                }
            }
            if (t.size() < 2) {
                t = {lo, hi};
            }
        } else {
            for (int i = 0; i <= 4; ++i) {
                t.push_back(lo + (hi - lo) * i / 4.0);
            }
        }
        return t;
    };
    for (double v : ticks(x_lo, x_hi, axes.log_x)) {
        const double px = xmap(v);
        s << "<line x1=\"" << detail::fixed(px) << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << detail::fixed(px)
          << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << detail::fixed(px) << "\" y=\"" << kHeight - kBottom + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_number(v) << "</text>\n";
    }
    for (double v : ticks(y_lo, y_hi, axes.log_y)) {
        char label[32];
        std::snprintf(label, sizeof label, "%.3g", v);
        const double py = ymap(v);
        s << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << detail::fixed(py) << "\" x2=\"" << kLeft << "\" y2=\""
          << detail::fixed(py) << "\" stroke=\"black\"/>\n";
        s << "<text x=\"" << kLeft - 8 << "\" y=\"" << detail::fixed(py + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label << "</text>\n";
    }
    s << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << detail::xml_escape(axes.x_label)
      << (axes.log_x ? " [log]" : "") << "</text>\n";
    s << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2 << "\" transform=\"rotate(-90 18 "
      << (kTop + kHeight - kBottom) / 2
      << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << detail::xml_escape(axes.y_label)
      << (axes.log_y ? " [log]" : "") << "</text>\n";

    for (std::size_t k = 0; k < ycs.size(); ++k) {
        const char *color = kColors[k % std::size(kColors)];
        std::string points;
        std::ostringstream markers;
        for (const auto &row : table.rows) {
            const double x = row[xc];
            const double y = row[ycs[k]];
            if (!usable(x, axes.log_x) || !usable(y, axes.log_y)) {
                continue;
            }
            const std::string px = detail::fixed(xmap(x));
            const std::string py = detail::fixed(ymap(y));
            points += (points.empty() ? "" : " ") + px + "," + py;
            markers << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
        s << markers.str();
        const double ly = kTop + 16 + 18 * static_cast<double>(k);
        s << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kWidth - kRight + 32
          << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::xml_escape(axes.y_columns[k]) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace ykqkd
