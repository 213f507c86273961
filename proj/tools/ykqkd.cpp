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

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ykqkd/experiments.hpp"

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{
        "Yuen-Kim IMDD key distribution simulator.\n"
        "Experiments: fig2a, fig2b, ber-sweep, eve-detect.\n"
        "Defaults: fig2a/fig2b use alpha_max=4 and M=1..32 (fig2a) or 1..64 (fig2b) in powers of two;\n"
        "ber-sweep/eve-detect use alpha_max=700, M=4, distances 10,50,100,150,200 km, 0.2 dB/km,\n"
        "100000 symbols, seed 1, detection threshold 0.15. Eve's amplitude factor defaults to 1 for\n"
        "the fig2 experiments and to the channel transmission kappa for ber-sweep."};
    app.set_help_flag("-h,--help", "Print this help message and exit");

    std::string experiment;
    std::string config_path;
    std::map<std::string, std::string> overrides;
    auto flag = [&](const std::string &name, const std::string &key, const std::string &help) {
        app.add_option_function<std::string>(name, [&overrides, key](const std::string &v) { overrides[key] = v; }, help);
    };
    app.add_option("experiment", experiment, "fig2a | fig2b | ber-sweep | eve-detect");
    app.add_option("--config", config_path, "key=value configuration file; flags override its values");
    flag("--alpha-max", "alpha_max", "largest amplitude in sqrt(photons)");
    flag("--m-list", "m_list", "comma separated numbers of basis pairs, e.g. 1,2,4,8");
    flag("--distances", "distances", "comma separated fiber lengths in km");
    flag("--eta", "eta", "Eve's amplitude factor");
    flag("--symbols", "symbols", "symbols per Monte-Carlo run");
    flag("--seed", "seed", "random seed");
    flag("--out", "out", "CSV output path (default stdout)");
    flag("--loss", "loss_db_per_km", "fiber loss in dB/km");
    flag("--dark", "dark_mean", "dark counts per slot");
    flag("--threshold", "threshold", "Bob BER above which Eve is declared present");
    flag("--key-seed", "key_seed", "shared short key (LFSR seed)");
    bool svg = false;
    app.add_flag("--svg", svg, "also write an SVG plot next to the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (!experiment.empty()) {
            overrides["experiment"] = experiment;
        }
        if (svg) {
            overrides["svg"] = "true";
        }
        const std::string file_text = config_path.empty() ? std::string() : read_file(config_path);
        const ykqkd::ExperimentConfig cfg = ykqkd::parse_config(file_text, overrides);
        const ykqkd::ExperimentOutput result = ykqkd::run_experiment(cfg);

        for (const auto &w : result.table.warnings) {
            std::cerr << "warning: " << w << '\n';
        }
        const std::string csv = ykqkd::to_csv(result.table);
        if (cfg.out.empty()) {
            std::cout << csv;
        } else {
            write_file(cfg.out, csv);
        }
        if (cfg.emit_svg) {
            const std::string svg_path =
                cfg.out.empty() ? std::string(ykqkd::experiment_name(cfg.experiment)) + ".svg" : cfg.out + ".svg";
            write_file(svg_path, ykqkd::emit_svg(result.table, result.axes));
        }
        if (result.eve_detected) {
            std::cerr << "eve detected: " << (*result.eve_detected ? "yes" : "no") << '\n';
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
