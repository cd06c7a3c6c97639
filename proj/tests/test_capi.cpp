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

#include "coherence/coherence.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

using std::numbers::pi;

TEST(capi, version_and_status) {
    EXPECT_STREQ(coh_version(), "0.1.0");
    EXPECT_STREQ(coh_status_name(COH_OK), "ok");
    EXPECT_STREQ(coh_status_name(COH_ERR_NUMERICAL), "numerical error");
}

TEST(capi, state_and_expectation) {
    coh_state *ghz = nullptr;
    ASSERT_EQ(coh_state_ghz(3, &ghz), COH_OK);
    EXPECT_EQ(coh_state_num_qubits(ghz), 3);
    double v = 0.0;
    ASSERT_EQ(coh_expectation(ghz, "XYY", &v), COH_OK);
    EXPECT_NEAR(v, -1.0, 1e-12);
    EXPECT_EQ(coh_expectation(ghz, "XY", &v), COH_ERR_INVALID_ARGUMENT);
    EXPECT_NE(std::string(coh_last_error()), "");
    coh_state_free(ghz);

    coh_state *epr = nullptr, *noisy = nullptr;
    ASSERT_EQ(coh_state_epr(pi / 4, "00", &epr), COH_OK);
    ASSERT_EQ(coh_state_werner(epr, 0.98, &noisy), COH_OK);
    double f = 0.0;
    ASSERT_EQ(coh_fidelity(noisy, epr, &f), COH_OK);
    EXPECT_NEAR(f, std::sqrt(0.98 + 0.02 / 4), 1e-10);
    ASSERT_EQ(coh_expectation(noisy, "XX", &v), COH_OK);
    EXPECT_NEAR(v, 0.98, 1e-12);
    double re = 0.0, im = 0.0;
    ASSERT_EQ(coh_state_matrix_entry(epr, 1, 2, &re, &im), COH_OK);
    EXPECT_NEAR(re, 0.5, 1e-15);
    EXPECT_EQ(coh_state_matrix_entry(epr, 4, 0, &re, &im), COH_ERR_INVALID_ARGUMENT);
    coh_state_free(noisy);
    coh_state_free(epr);

    coh_state *bad = nullptr;
    EXPECT_EQ(coh_state_epr(0.0, "00", &bad), COH_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(coh_state_epr(0.3, "22", &bad), COH_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(coh_state_epr(0.3, nullptr, &bad), COH_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(bad, nullptr);
}

TEST(capi, paradox) {
    coh_paradox *p = nullptr;
    ASSERT_EQ(coh_paradox_coherence(pi / 8, 'X', &p), COH_OK);
    ASSERT_EQ(coh_paradox_num_constraints(p), 5u);
    const char *source = nullptr, *obs = nullptr;
    double value = 0.0;
    ASSERT_EQ(coh_paradox_constraint(p, 4, &source, &obs, &value), COH_OK);
    EXPECT_STREQ(source, "00");
    EXPECT_STREQ(obs, "XX");
    EXPECT_NEAR(value, std::sin(pi / 4), 1e-12);
    coh_verdict verdict{};
    ASSERT_EQ(coh_paradox_check(p, 1e-10, &verdict), COH_OK);
    EXPECT_EQ(verdict.lhv_feasible, 0);
    EXPECT_NEAR(verdict.violation_gap, std::sin(pi / 4), 1e-10);

    char *json = nullptr;
    ASSERT_EQ(coh_paradox_to_json(p, &json), COH_OK);
    coh_paradox *q = nullptr;
    ASSERT_EQ(coh_paradox_from_json(json, &q), COH_OK);
    EXPECT_EQ(coh_paradox_num_constraints(q), 5u);
    coh_string_free(json);
    coh_paradox_free(q);
    coh_paradox_free(p);

    EXPECT_EQ(coh_paradox_from_json("{not json", &q), COH_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(coh_paradox_coherence(pi / 8, 'Z', &q), COH_ERR_INVALID_ARGUMENT);

    ASSERT_EQ(coh_paradox_dicke(3, 2, &p), COH_OK);
    ASSERT_EQ(coh_paradox_constraint(p, coh_paradox_num_constraints(p) - 1, nullptr, &obs, &value), COH_OK);
    EXPECT_STREQ(obs, "XXZ");
    EXPECT_NEAR(value, 2.0 / 3.0, 1e-12);
    coh_paradox_free(p);
}

TEST(capi, ghz_and_game) {
    coh_state *ghz = nullptr;
    ASSERT_EQ(coh_state_ghz(3, &ghz), COH_OK);
    coh_ghz_result g{};
    ASSERT_EQ(coh_ghz_check(ghz, &g), COH_OK);
    EXPECT_NEAR(g.stabilizers[3], 1.0, 1e-12);
    EXPECT_EQ(g.satisfying_assignments, 0);
    EXPECT_EQ(g.lhv_feasible, 0);
    coh_state_free(ghz);

    coh_game_result r{};
    ASSERT_EQ(coh_game_evaluate(pi / 12, "x", &r), COH_OK);
    EXPECT_NEAR(r.p_win, 0.5625, 1e-12);
    ASSERT_EQ(coh_game_evaluate(0.3, "z", &r), COH_OK);
    EXPECT_NEAR(r.p_win, 0.625, 1e-12);
    ASSERT_EQ(coh_game_evaluate_observables(pi / 4, 'X', 1, 'X', -1, &r), COH_OK);
    EXPECT_NEAR(r.p_win, 0.375, 1e-12);
    EXPECT_EQ(coh_game_evaluate_observables(pi / 4, 'X', 2, 'X', 1, &r), COH_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(coh_game_evaluate(0.3, "w", &r), COH_ERR_INVALID_ARGUMENT);
}

TEST(capi, simulation) {
    coh_config *cfg = nullptr;
    ASSERT_EQ(coh_config_new(&cfg), COH_OK);
    ASSERT_EQ(coh_config_set(cfg, "counts_per_setting", "100000"), COH_OK);
    ASSERT_EQ(coh_config_set(cfg, "seed", "3"), COH_OK);
    EXPECT_EQ(coh_config_set(cfg, "visibility", "7"), COH_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(coh_config_set(cfg, "nope", "1"), COH_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(coh_config_load_file(cfg, "/nonexistent.cfg"), COH_ERR_IO);

    coh_state *epr = nullptr;
    ASSERT_EQ(coh_state_epr(pi / 4, "00", &epr), COH_OK);
    coh_correlator a{}, b{};
    ASSERT_EQ(coh_simulate_correlator(epr, "XX", cfg, 1, &a), COH_OK);
    ASSERT_EQ(coh_simulate_correlator(epr, "XX", cfg, 1, &b), COH_OK);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_err, b.std_err);
    EXPECT_NEAR(a.value, 0.99, 0.02);

    double vis = 0.0;
    ASSERT_EQ(coh_visibility(epr, 0.0, 73, cfg, 0, &vis), COH_OK);
    EXPECT_NEAR(vis, 0.99, 1e-10);
    EXPECT_EQ(coh_visibility(epr, 0.0, 2, cfg, 0, &vis), COH_ERR_INVALID_ARGUMENT);
    coh_state_free(epr);
    coh_config_free(cfg);

    const uint64_t counts[4] = {1, 49, 49, 1};
    coh_correlator c{};
    ASSERT_EQ(coh_correlator_from_counts(counts, 1000, 0, &c), COH_OK);
    EXPECT_NEAR(c.value, -0.96, 1e-15);
    EXPECT_EQ(c.n_total, 100u);

    double angle = 0.0;
    ASSERT_EQ(coh_parse_angle("3pi/4", &angle), COH_OK);
    EXPECT_EQ(angle, 3 * pi / 4);
    EXPECT_EQ(coh_parse_angle("x", &angle), COH_ERR_INVALID_ARGUMENT);
}

TEST(capi, run_command_and_replay) {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "coherence_test_capi";
    std::filesystem::remove_all(dir);
    coh_options *opts = nullptr;
    ASSERT_EQ(coh_options_new(&opts), COH_OK);
    ASSERT_EQ(coh_options_set(opts, "theta_grid", "pi/12,pi/4"), COH_OK);
    coh_run *run = nullptr;
    ASSERT_EQ(coh_run_command("game", opts, (dir / "a").c_str(), &run), COH_OK);
    EXPECT_GE(coh_run_num_files(run), 1u);
    EXPECT_NE(std::string(coh_run_summary(run)).find("0.5625"), std::string::npos);
    EXPECT_EQ(coh_run_file(run, 1000), nullptr);
    const std::string manifest = coh_run_manifest_path(run);
    coh_run_free(run);

    coh_run *again = nullptr;
    ASSERT_EQ(coh_replay_manifest(manifest.c_str(), (dir / "b").c_str(), &again), COH_OK);
    coh_run_free(again);

    ASSERT_EQ(coh_options_set(opts, "strategy", "w"), COH_OK);
    EXPECT_EQ(coh_run_command("game", opts, (dir / "c").c_str(), &run), COH_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(coh_run_command("fly", nullptr, (dir / "d").c_str(), &run), COH_ERR_INVALID_ARGUMENT);
    coh_options_free(opts);
}
