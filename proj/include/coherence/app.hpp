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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coherence/expsim.hpp"
#include "coherence/game.hpp"
#include "coherence/lhv.hpp"

namespace coherence {

inline constexpr const char *kVersion = "0.1.0";

/// Flag name (without dashes, '-' replaced by '_') -> raw value.
using CommandOptions = std::map<std::string, std::string>;

struct RunRecord {
    std::string command;
    std::filesystem::path manifest;
    std::vector<std::filesystem::path> files;  // every emitted file except the manifest
    std::string summary;
};

const std::vector<std::string> &command_names();

/// Defaults, then the file named by option "config", then explicit config
/// keys (counts_per_setting last).
ExperimentConfig resolve_config(const CommandOptions &options);

/// Runs one command into out_dir (created if needed) and writes
/// manifest.json listing every emitted file.
RunRecord run_command(std::string_view command, const CommandOptions &options, const std::filesystem::path &out_dir);

/// Re-runs the command recorded in a manifest with its resolved options.
RunRecord replay_manifest(const std::filesystem::path &manifest, const std::filesystem::path &out_dir);

// Building blocks shared by the commands and the acceptance suite.

struct ParadoxRowResult {
    Constraint constraint;
    double born_value = 0.0;
    std::optional<EstimatedCorrelator> simulated;
};

struct ParadoxRun {
    ParadoxSpec spec;
    std::vector<ParadoxRowResult> rows;
    ParadoxVerdict exact_verdict;
    std::optional<ParadoxVerdict> simulated_verdict;
    std::optional<PValue> p_value;
    CountMap counts;
};

ParadoxRun evaluate_paradox(double theta, Axis axis, bool simulate, const ExperimentConfig &cfg, double tol);

struct GamePoint {
    double theta = 0.0;
    GameEvaluation exact;
    std::optional<GameEvaluation> simulated;
    double simulated_std_err = 0.0;
    /// <AA> on psi_00(theta): exact and simulated
    double correlator_exact = 0.0;
    std::optional<EstimatedCorrelator> correlator_simulated;
};

GamePoint evaluate_game_point(double theta, GameStrategy strategy, bool simulate, const ExperimentConfig &cfg);

}  // namespace coherence
