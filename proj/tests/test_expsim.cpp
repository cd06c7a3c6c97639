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

#include "coherence/expsim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "coherence/error.hpp"

using namespace coherence;
using std::numbers::pi;

namespace {

ExperimentConfig small_config(double counts, std::uint64_t seed = 0, double visibility = 1.0) {
    ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.visibility = visibility;
    cfg.num_trials = 1;
    cfg.bootstrap_replicates = 400;
    cfg.set_counts_per_setting(counts);
    return cfg;
}

DensityOperator epr() { return density_from_state(epr_family(pi / 4, SourceLabel::k00)); }
DensityOperator b01() { return density_from_state(epr_family(0, SourceLabel::k01)); }
DensityOperator b10() { return density_from_state(epr_family(0, SourceLabel::k10)); }

CountMap paradox_counts(double theta, const ExperimentConfig &cfg) {
    const ParadoxSpec spec = coherence_paradox(theta, Axis::X);
    CountMap out;
    for (const Constraint &c : spec.constraints()) {
        const DensityOperator rho = c.source_label == "01"   ? b01()
                                    : c.source_label == "10" ? b10()
                                                             : density_from_state(epr_family(theta, SourceLabel::k00));
        const Setting s{c.observable.axes()[0], c.observable.axes()[1]};
        out.emplace(std::make_pair(c.source_label, c.observable.to_string()),
                    simulate_counts(rho, s, cfg, stream_id(c.source_label, s)));
    }
    return out;
}

}  // namespace

TEST(expsim, config_text) {
    ExperimentConfig cfg;
    apply_config_text(cfg, "# comment\npair_rate = 1000\nnum_trials=3  # trailing\nseed = 42\n");
    EXPECT_EQ(cfg.pair_rate, 1000.0);
    EXPECT_EQ(cfg.num_trials, 3);
    EXPECT_EQ(cfg.seed, 42u);
    ExperimentConfig round;
    apply_config_text(round, config_to_text(cfg));
    EXPECT_EQ(config_to_text(round), config_to_text(cfg));
    EXPECT_THROW(apply_config_text(cfg, "bogus = 1"), InvalidArgument);
    EXPECT_THROW(apply_config_text(cfg, "visibility = 2"), InvalidArgument);
    EXPECT_THROW(apply_config_text(cfg, "num_trials"), InvalidArgument);
    EXPECT_THROW(load_config_file("/nonexistent/cfg.txt"), IoError);
}

TEST(expsim, counts_per_setting) {
    ExperimentConfig cfg;
    EXPECT_NEAR(cfg.expected_counts_per_setting(), 0.34e6 * 0.6 * 100 * 10, 1e-3);
    cfg.set_counts_per_setting(1e5);
    EXPECT_NEAR(cfg.expected_counts_per_setting(), 1e5, 1e-6);
}

TEST(expsim, deterministic_outcome) {
    const ExperimentConfig cfg = small_config(1000);
    const CountTable t = simulate_counts(b01(), Setting{Axis::Z, Axis::Z}, cfg);
    const auto n = t.pooled();
    EXPECT_EQ(n[0], 0u);
    EXPECT_EQ(n[2], 0u);
    EXPECT_EQ(n[3], 0u);
    EXPECT_NEAR(static_cast<double>(n[1]), 1000.0, 5 * std::sqrt(1000.0));
}

TEST(expsim, correlator_converges_with_counts) {
    double previous = 1.0;
    for (double counts : {1e3, 1e5, 1e7}) {
        const EstimatedCorrelator e =
            correlator_from_counts(simulate_counts(b01(), Setting{Axis::Z, Axis::Z}, small_config(counts)));
        EXPECT_EQ(e.value, -1.0);
        const EstimatedCorrelator x =
            correlator_from_counts(simulate_counts(epr(), Setting{Axis::X, Axis::X}, small_config(counts, 1)));
        EXPECT_LE(std::abs(x.value - 1.0), previous);
        previous = std::abs(x.value - 1.0) + 1e-12;
    }
}

TEST(expsim, determinism) {
    const ExperimentConfig cfg = small_config(1e4, 99, 0.95);
    const Setting s{Axis::X, Axis::Y};
    const CountTable a = simulate_counts(epr(), s, cfg, 5);
    const CountTable b = simulate_counts(epr(), s, cfg, 5);
    EXPECT_EQ(a.per_trial, b.per_trial);
    const EstimatedCorrelator ea = correlator_from_counts(a), eb = correlator_from_counts(b);
    EXPECT_EQ(ea.value, eb.value);
    EXPECT_EQ(ea.std_err, eb.std_err);
    EXPECT_NE(simulate_counts(epr(), s, cfg, 6).per_trial, a.per_trial);
    const CountMap ca = paradox_counts(pi / 4, cfg), cb = paradox_counts(pi / 4, cfg);
    const ParadoxSpec spec = coherence_paradox(pi / 4, Axis::X);
    EXPECT_EQ(paradox_p_value(spec, ca).log10, paradox_p_value(spec, cb).log10);
}

TEST(expsim, point_estimates) {
    EXPECT_EQ(correlator_point({50, 0, 0, 50}), 1.0);
    EXPECT_EQ(correlator_point({25, 25, 25, 25}), 0.0);
    EXPECT_THROW(correlator_point({0, 0, 0, 0}), InvalidArgument);
    const EstimatedCorrelator perfect =
        correlator_from_counts(count_table_from_counts(Setting{}, {50, 0, 0, 50}), 1000, 0);
    EXPECT_EQ(perfect.delta_std_err, 0.0);
}

TEST(expsim, bootstrap_matches_delta_method) {
    const EstimatedCorrelator e = correlator_from_counts(count_table_from_counts(Setting{}, {1, 49, 49, 1}), 1000, 3);
    EXPECT_NEAR(e.value, -0.96, 1e-15);
    // Delta method: sqrt((1 - E^2) / N).
    const double oracle = std::sqrt((1 - 0.96 * 0.96) / 100.0);
    EXPECT_NEAR(e.delta_std_err, oracle, 1e-15);
    EXPECT_NEAR(e.delta_std_err, 0.028, 1e-4);
    EXPECT_NEAR(e.std_err, oracle, 0.2 * oracle);
}

TEST(expsim, std_err_scales_with_counts) {
    const Setting s{Axis::X, Axis::X};
    const double e1 = correlator_from_counts(simulate_counts(epr(), s, small_config(1e4, 2, 0.9))).std_err;
    const double e2 = correlator_from_counts(simulate_counts(epr(), s, small_config(1e5, 2, 0.9))).std_err;
    EXPECT_NEAR(e1 / e2, std::sqrt(10.0), 0.25 * std::sqrt(10.0));
}

TEST(expsim, estimator_consistency_property) {
    const DensityOperator rho = density_from_state(epr_family(pi / 6, SourceLabel::k00));
    const Setting s{Axis::X, Axis::X};
    const double v = 0.97;
    const double truth = v * expectation(rho, ObservableChain::parse("XX"));
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        ExperimentConfig cfg = small_config(1e4, seed, v);
        cfg.bootstrap_replicates = 200;
        const EstimatedCorrelator e = correlator_from_counts(simulate_counts(rho, s, cfg));
        inside += std::abs(e.value - truth) <= 3 * e.std_err ? 1 : 0;
    }
    EXPECT_GE(inside, 99);
}

TEST(expsim, p_value_examples) {
    const ParadoxSpec spec = coherence_paradox(pi / 4, Axis::X);
    const PValue p = paradox_p_value(spec, paradox_counts(pi / 4, small_config(1e7, 4)));
    EXPECT_LT(p.value, 1e-15);
    EXPECT_LT(p.log10, -15.0);

    // Table-1-like counts: oracle is exp(-N gap^2 / 2).
    CountMap table1;
    auto put = [&table1](const char *label, const char *chain, double e, double n) {
        const auto plus = static_cast<std::uint64_t>(std::llround(n * (1 + e) / 4));
        const auto minus = static_cast<std::uint64_t>(std::llround(n * (1 - e) / 4));
        table1.emplace(std::make_pair(label, chain),
                       count_table_from_counts(parse_setting(chain), {plus, minus, minus, plus}));
    };
    put("01", "ZZ", -0.9967, 1e5);
    put("10", "ZZ", -0.9912, 1e5);
    put("01", "XX", 0.0625, 1e5);
    put("10", "XX", 0.0317, 1e5);
    put("00", "XX", 0.9949, 1e5);
    const PValue t = paradox_p_value(spec, table1);
    EXPECT_LT(t.value, 1e-10);
    EXPECT_NEAR(t.scaled_gap, std::sqrt(1e5) * 0.9324, 1e-3 * std::sqrt(1e5));
    EXPECT_NEAR(t.log10, -1e5 * 0.9324 * 0.9324 / 2 / std::log(10.0), 0.01 * 1e5);
    EXPECT_NEAR(hoeffding_bound(100, 0.5), std::exp(-12.5), 1e-18);

    // Mixed row at the best mixture: no evidence.
    CountMap none;
    none.emplace(std::make_pair("01", "ZZ"), count_table_from_counts(parse_setting("ZZ"), {0, 50, 50, 0}));
    none.emplace(std::make_pair("10", "ZZ"), count_table_from_counts(parse_setting("ZZ"), {0, 50, 50, 0}));
    none.emplace(std::make_pair("01", "XX"), count_table_from_counts(parse_setting("XX"), {40, 10, 10, 40}));
    none.emplace(std::make_pair("10", "XX"), count_table_from_counts(parse_setting("XX"), {10, 40, 40, 10}));
    none.emplace(std::make_pair("00", "XX"), count_table_from_counts(parse_setting("XX"), {25, 25, 25, 25}));
    EXPECT_EQ(paradox_p_value(spec, none).value, 1.0);
}

TEST(expsim, p_value_monotone_in_counts) {
    const ParadoxSpec spec = coherence_paradox(pi / 4, Axis::X);
    double previous = 1.0;
    for (double n : {10.0, 100.0, 1000.0, 1e4}) {
        CountMap m;
        for (const char *label : {"01", "10"}) {
            m.emplace(std::make_pair(label, "ZZ"), count_table_from_counts(parse_setting("ZZ"), {0, 0, 0, 0}));
        }
        const auto q = static_cast<std::uint64_t>(n / 4);
        m[{"01", "ZZ"}] = count_table_from_counts(parse_setting("ZZ"), {0, 2 * q, 2 * q, 0});
        m[{"10", "ZZ"}] = count_table_from_counts(parse_setting("ZZ"), {0, 2 * q, 2 * q, 0});
        m.emplace(std::make_pair("01", "XX"), count_table_from_counts(parse_setting("XX"), {q, q, q, q}));
        m.emplace(std::make_pair("10", "XX"), count_table_from_counts(parse_setting("XX"), {q, q, q, q}));
        m.emplace(std::make_pair("00", "XX"), count_table_from_counts(parse_setting("XX"), {3 * q, q / 2, q / 2, 0}));
        const double log10p = paradox_p_value(spec, m).log10;
        EXPECT_LE(log10p, previous);
        previous = log10p;
    }
}

TEST(expsim, p_value_missing_counts) {
    const ParadoxSpec spec = coherence_paradox(pi / 4, Axis::X);
    CountMap m = paradox_counts(pi / 4, small_config(100));
    m.erase({"10", "XX"});
    EXPECT_THROW(paradox_p_value(spec, m), InvalidArgument);
}

TEST(expsim, visibility_exact) {
    ExperimentConfig cfg;
    cfg.visibility = 1.0;
    std::vector<double> grid;
    for (int k = 0; k < 37; ++k) grid.push_back(pi * k / 36);
    const VisibilityScan s = visibility_scan(epr(), 0.0, grid, cfg, false);
    EXPECT_NEAR(s.visibility, 1.0, 1e-10);
    EXPECT_TRUE(s.exceeds_classical_bound);
    for (const ScanPoint &p : s.points) EXPECT_NEAR(p.probability, std::sin(p.angle) * std::sin(p.angle) / 2, 1e-12);
    for (double v : {0.9, 0.5, 0.71, 0.72}) {
        cfg.visibility = v;
        const VisibilityScan w = visibility_scan(epr(), 3 * pi / 4, grid, cfg, false);
        EXPECT_NEAR(w.visibility, v, 1e-10);
        EXPECT_EQ(w.exceeds_classical_bound, w.visibility > 0.71);
    }
}

TEST(expsim, visibility_simulated) {
    std::vector<double> grid;
    for (int k = 0; k < 73; ++k) grid.push_back(pi * k / 72);
    for (double v : {0.99, 0.9966}) {
        ExperimentConfig cfg = small_config(1e5, 8, v);
        const VisibilityScan s = visibility_scan(epr(), 0.0, grid, cfg, true);
        EXPECT_NEAR(s.visibility, v, 0.005);
    }
    EXPECT_NEAR(fringe_visibility(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 3.0}), 0.5, 1e-15);
}
