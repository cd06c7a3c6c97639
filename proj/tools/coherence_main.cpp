// Copyright 2026 The Coherence Verification Authors
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

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coherence/coherence.h"

namespace {

int exit_code(coh_status status) {
    switch (status) {
        case COH_OK:
            return 0;
        case COH_ERR_INVALID_ARGUMENT:
            return 2;
        case COH_ERR_NUMERICAL:
            return 3;
        default:
            return 1;
    }
}

struct Common {
    std::string out_dir = "out";
    std::string config;
    std::map<std::string, std::string> values;
};

void add_value(CLI::App *cmd, Common &common, const std::string &name, const std::string &help) {
    std::string flag = "--" + name;
    for (char &c : flag) {
        if (c == '_') c = '-';
    }
    cmd->add_option_function<std::string>(flag, [&common, name](const std::string &v) { common.values[name] = v; },
                                          help);
}

void add_config_options(CLI::App *cmd, Common &common) {
    cmd->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--config", common.config, "Configuration file (key = value lines)");
    add_value(cmd, common, "seed", "Master RNG seed");
    add_value(cmd, common, "pair_rate", "Coincidence rate per second");
    add_value(cmd, common, "duration_per_setting", "Seconds per trial and setting");
    add_value(cmd, common, "num_trials", "Trials per setting");
    add_value(cmd, common, "efficiency", "Detection efficiency");
    add_value(cmd, common, "visibility", "Werner visibility of prepared states");
    add_value(cmd, common, "bootstrap_replicates", "Bootstrap replicates");
    add_value(cmd, common, "counts_per_setting", "Expected pooled counts per setting (rescales duration)");
}

int run(const std::string &command, const Common &common) {
    coh_options *options = nullptr;
    coh_status status = coh_options_new(&options);
    if (status == COH_OK && !common.config.empty()) status = coh_options_set(options, "config", common.config.c_str());
    for (const auto &[key, value] : common.values) {
        if (status != COH_OK) break;
        status = coh_options_set(options, key.c_str(), value.c_str());
    }
    coh_run *result = nullptr;
    if (status == COH_OK) status = coh_run_command(command.c_str(), options, common.out_dir.c_str(), &result);
    coh_options_free(options);
    if (status != COH_OK) {
        std::cerr << "error: " << coh_last_error() << "\n";
        return exit_code(status);
    }
    std::cout << coh_run_summary(result) << "manifest: " << coh_run_manifest_path(result) << "\n";
    coh_run_free(result);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Verification toolkit for coherence-based contextuality tests"};
    app.set_version_flag("--version", coh_version());
    app.require_subcommand(1);

    std::map<std::string, Common> commons;
    std::map<std::string, CLI::App *> subs;

    auto make = [&](const std::string &name, const std::string &help) {
        CLI::App *cmd = app.add_subcommand(name, help);
        Common &common = commons[name];
        // --config overrides the environment default.
        if (const char *env = std::getenv("COHERENCE_CONFIG")) common.config = env;
        add_config_options(cmd, common);
        subs[name] = cmd;
        return std::make_pair(cmd, &common);
    };

    {
        auto [cmd, c] = make("paradox", "Two-qubit coherence paradox: Born values, LHV verdict, simulated counts");
        add_value(cmd, *c, "theta", "Angle of the mixed source, e.g. pi/4");
        add_value(cmd, *c, "axis", "Coherence axis X or Y");
        add_value(cmd, *c, "mode", "exact or simulated");
        add_value(cmd, *c, "tol", "Feasibility tolerance");
    }
    {
        auto [cmd, c] = make("game", "Winning probability of the coherence game");
        add_value(cmd, *c, "theta_grid", "Comma-separated angles");
        add_value(cmd, *c, "strategy", "x or z");
        add_value(cmd, *c, "mode", "exact or simulated");
    }
    {
        auto [cmd, c] = make("tomo", "Simulated two-qubit state tomography");
        add_value(cmd, *c, "states", "all, or comma-separated angles of the mixed source");
    }
    {
        auto [cmd, c] = make("dicke", "n-qubit paradox on the single-excitation Dicke state");
        add_value(cmd, *c, "n", "Number of qubits");
        add_value(cmd, *c, "tol", "Feasibility tolerance");
    }
    {
        auto [cmd, c] = make("visibility", "Polarization fringe visibility scan");
        add_value(cmd, *c, "fixed", "Polarizer angle of the fixed arm");
        add_value(cmd, *c, "mode", "exact or simulated");
        add_value(cmd, *c, "points", "Scan points over [0, pi]");
    }
    make("report", "Regenerate every table and figure dataset");

    std::string manifest;
    std::string replay_out = "out_replay";
    CLI::App *replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", manifest, "Path to manifest.json")->required();
    replay->add_option("--out", replay_out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (replay->parsed()) {
        coh_run *result = nullptr;
        const coh_status status = coh_replay_manifest(manifest.c_str(), replay_out.c_str(), &result);
        if (status != COH_OK) {
            std::cerr << "error: " << coh_last_error() << "\n";
            return exit_code(status);
        }
        std::cout << coh_run_summary(result) << "manifest: " << coh_run_manifest_path(result) << "\n";
        coh_run_free(result);
        return 0;
    }
    for (const auto &[name, cmd] : subs) {
        if (cmd->parsed()) return run(name, commons[name]);
    }
    return 2;
}
