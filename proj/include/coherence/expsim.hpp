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

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coherence/lhv.hpp"
#include "coherence/measure.hpp"
#include "coherence/qstate.hpp"

namespace coherence {

/// Photon-pair source and counting parameters.
struct ExperimentConfig {
    double pair_rate = 0.34e6;           // coincidences per second
    double duration_per_setting = 100.0;  // seconds per trial
    int num_trials = 10;
    double visibility = 0.99;  // Werner parameter applied to every prepared state
    std::uint64_t seed = 0;
    double efficiency = 0.60;
    int bootstrap_replicates = 1000;

    void validate() const;
    /// Mean coincidences per setting pooled over trials.
    double expected_counts_per_setting() const {
        return pair_rate * efficiency * duration_per_setting * static_cast<double>(num_trials);
    }
    /// Rescales duration so that expected_counts_per_setting() == counts.
    void set_counts_per_setting(double counts);
};

/// Applies "key = value" lines ('#' starts a comment) on top of cfg.
/// Recognized keys: pair_rate, duration_per_setting, num_trials,
/// visibility, seed, efficiency, bootstrap_replicates, counts_per_setting.
void apply_config_text(ExperimentConfig &cfg, std::string_view text);
void apply_config_entry(ExperimentConfig &cfg, std::string_view key, std::string_view value);
ExperimentConfig load_config_file(const std::string &path);
std::string config_to_text(const ExperimentConfig &cfg);

/// Local measurement bases of the two parties.
struct Setting {
    Axis a = Axis::Z;
    Axis b = Axis::Z;
    std::string to_string() const { return {axis_char(a), axis_char(b)}; }
    friend auto operator<=>(const Setting &, const Setting &) = default;
};

Setting parse_setting(std::string_view text);

/// Deterministic stream identifier for a (source, setting) pair.
std::uint64_t stream_id(std::string_view source_label, const Setting &setting);

/// Independent generator for (seed, stream, index, purpose).
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index, std::uint64_t purpose);

/// Coincidence counts N^{a,b} for one setting, per trial. Cell index 2a+b.
struct CountTable {
    Setting setting;
    ExperimentConfig config;
    std::uint64_t stream = 0;
    std::vector<std::array<std::uint64_t, 4>> per_trial;

    std::array<std::uint64_t, 4> pooled() const;
    std::uint64_t total() const;
};

/// Independent Poisson draw per trial and outcome with mean
/// rate * efficiency * duration * P(a,b|setting), where P is evaluated on
/// the Werner-mixed state v rho + (1-v) I/4.
CountTable simulate_counts(const DensityOperator &state, const Setting &setting, const ExperimentConfig &cfg,
                           std::uint64_t stream = 0);

/// Builds a single-trial table from fixed counts.
CountTable count_table_from_counts(const Setting &setting, const std::array<std::uint64_t, 4> &counts,
                                   const ExperimentConfig &cfg = {}, std::uint64_t stream = 0);

struct EstimatedCorrelator {
    double value = 0.0;
    double std_err = 0.0;        // parametric Poisson bootstrap
    double delta_std_err = 0.0;  // sqrt((1 - E^2)/N)
    std::uint64_t n_total = 0;
};

/// (N00 - N01 - N10 + N11)/(N00 + N01 + N10 + N11) over pooled trials.
double correlator_point(const std::array<std::uint64_t, 4> &counts);

/// Point estimate plus bootstrap error from the table's config replicates.
EstimatedCorrelator correlator_from_counts(const CountTable &counts);
EstimatedCorrelator correlator_from_counts(const CountTable &counts, int replicates, std::uint64_t seed);

using CountMap = std::map<std::pair<std::string, std::string>, CountTable>;

struct PValue {
    double value = 1.0;   // clamped below at the smallest normal double
    double log10 = 0.0;   // unclamped log10 of the bound
    double scaled_gap = 0.0;  // min_w max_O sqrt(N_O) |residual_O|
    std::vector<double> weights;
};

/// Hoeffding bound on the mixed-source correlators under the best mixture of
/// component sources: max_w min_O exp(-N_O r_O(w)^2 / 2).
PValue paradox_p_value(const ParadoxSpec &spec, const CountMap &counts);

/// Closed-form Hoeffding bound exp(-N gap^2 / 2) for one observable.
double hoeffding_bound(double n, double gap);

inline constexpr double kClassicalVisibilityBound = 0.71;

struct ScanPoint {
    double angle = 0.0;        // polarizer angle of the scanned arm, radians
    double probability = 0.0;  // coincidence probability of transmitted photons
    double rate = 0.0;         // coincidences per second
    std::uint64_t counts = 0;  // pooled counts (simulated scans only)
};

struct VisibilityScan {
    double fixed_angle = 0.0;
    std::vector<ScanPoint> points;
    /// offset + c_cos cos(2 phi) + c_sin sin(2 phi)
    std::array<double, 3> fit{};
    double visibility = 0.0;
    bool exceeds_classical_bound = false;
};

/// Linear polarizer projector |phi><phi| with |phi> = cos phi |H> + sin phi |V>.
Eigen::Matrix2cd polarizer_projector(double angle);

/// Fits the fringe and returns (max - min)/(max + min) of the fitted curve.
/// Fewer than three distinct angles fall back to the raw extremes.
double fringe_visibility(std::span<const double> angles, std::span<const double> values,
                         std::array<double, 3> *fit = nullptr);

/// Scans arm B's polarizer while arm A stays at fixed_angle. Simulated scans
/// draw Poisson counts from the config; exact scans use probabilities.
VisibilityScan visibility_scan(const DensityOperator &state, double fixed_angle, std::span<const double> scan_grid,
                               const ExperimentConfig &cfg, bool simulate);

}  // namespace coherence
