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

#ifndef COHERENCE_COHERENCE_H
#define COHERENCE_COHERENCE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define COH_API __declspec(dllexport)
#else
#define COH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coh_status {
    COH_OK = 0,
    COH_ERR_INVALID_ARGUMENT = 1,
    COH_ERR_NUMERICAL = 2,
    COH_ERR_IO = 3,
    COH_ERR_INTERNAL = 4
} coh_status;

/* Library version string, e.g. "0.1.0". */
COH_API const char *coh_version(void);
/* Message of the last failed call on this thread; "" if none. */
COH_API const char *coh_last_error(void);
COH_API const char *coh_status_name(coh_status status);
/* Releases strings returned through char** out-parameters. */
COH_API void coh_string_free(char *text);

/* ---- states ---------------------------------------------------------- */

typedef struct coh_state coh_state;

/* label is "01", "10" or "00"; theta in (0, pi/2) for "00". */
COH_API coh_status coh_state_epr(double theta, const char *label, coh_state **out);
COH_API coh_status coh_state_ghz(int num_qubits, coh_state **out);
COH_API coh_status coh_state_dicke(int num_qubits, coh_state **out);
COH_API coh_status coh_state_basis(int num_qubits, uint64_t index, coh_state **out);
/* New state v * rho + (1 - v) * I / 2^n; the input is left untouched. */
COH_API coh_status coh_state_werner(const coh_state *state, double visibility, coh_state **out);
COH_API void coh_state_free(coh_state *state);
COH_API int coh_state_num_qubits(const coh_state *state);
/* Density-matrix entry (row, col). */
COH_API coh_status coh_state_matrix_entry(const coh_state *state, size_t row, size_t col, double *re, double *im);

/* chain is a Pauli string such as "XYY" with qubit 0 leftmost. */
COH_API coh_status coh_expectation(const coh_state *state, const char *chain, double *out);
COH_API coh_status coh_fidelity(const coh_state *rho, const coh_state *sigma, double *out);

/* ---- paradox specifications ------------------------------------------ */

typedef struct coh_paradox coh_paradox;

typedef struct coh_verdict {
    int lhv_feasible;
    double violation_gap;
} coh_verdict;

/* axis is 'X' or 'Y'. */
COH_API coh_status coh_paradox_coherence(double theta, char axis, coh_paradox **out);
COH_API coh_status coh_paradox_dicke(int num_qubits, int z_position, coh_paradox **out);
COH_API coh_status coh_paradox_from_json(const char *json, coh_paradox **out);
COH_API coh_status coh_paradox_to_json(const coh_paradox *paradox, char **out);
COH_API void coh_paradox_free(coh_paradox *paradox);
COH_API size_t coh_paradox_num_constraints(const coh_paradox *paradox);
/* Borrowed pointers stay valid until the paradox is freed. */
COH_API coh_status coh_paradox_constraint(const coh_paradox *paradox, size_t index, const char **source,
                                          const char **observable, double *expected_value);
/* Checks the specification's own expected values. */
COH_API coh_status coh_paradox_check(const coh_paradox *paradox, double tol, coh_verdict *out);

typedef struct coh_ghz_result {
    double stabilizers[4]; /* XYY, YXY, YYX, XXX */
    int satisfying_assignments;
    int lhv_feasible;
    double violation_gap;
} coh_ghz_result;

COH_API coh_status coh_ghz_check(const coh_state *state, coh_ghz_result *out);

/* ---- game ------------------------------------------------------------ */

typedef struct coh_game_result {
    double i_terms[2][2];
    double p_win;
} coh_game_result;

/* strategy is "x" or "z". */
COH_API coh_status coh_game_evaluate(double theta, const char *strategy, coh_game_result *out);
/* Arbitrary signed local observables: axes in "XYZ", signs +1 or -1. */
COH_API coh_status coh_game_evaluate_observables(double theta, char axis_a, int sign_a, char axis_b, int sign_b,
                                                 coh_game_result *out);

/* ---- simulation ------------------------------------------------------ */

typedef struct coh_config coh_config;

COH_API coh_status coh_config_new(coh_config **out);
COH_API void coh_config_free(coh_config *config);
/* Keys as in the configuration file format. */
COH_API coh_status coh_config_set(coh_config *config, const char *key, const char *value);
COH_API coh_status coh_config_load_file(coh_config *config, const char *path);

typedef struct coh_correlator {
    double value;
    double std_err;
    double delta_std_err;
    uint64_t n_total;
} coh_correlator;

/* setting is two axis letters, e.g. "ZZ"; stream selects the RNG stream. */
COH_API coh_status coh_simulate_correlator(const coh_state *state, const char *setting, const coh_config *config,
                                           uint64_t stream, coh_correlator *out);
/* counts indexed 2a+b. */
COH_API coh_status coh_correlator_from_counts(const uint64_t counts[4], int replicates, uint64_t seed,
                                              coh_correlator *out);

/* Fitted fringe visibility of a two-qubit state scanned over num_points
   angles in [0, pi]; simulate = 0 uses exact probabilities. */
COH_API coh_status coh_visibility(const coh_state *state, double fixed_angle, int num_points,
                                  const coh_config *config, int simulate, double *out);

COH_API coh_status coh_parse_angle(const char *text, double *out);

/* ---- commands -------------------------------------------------------- */

typedef struct coh_options coh_options;
typedef struct coh_run coh_run;

COH_API coh_status coh_options_new(coh_options **out);
COH_API void coh_options_free(coh_options *options);
COH_API coh_status coh_options_set(coh_options *options, const char *key, const char *value);

/* command is one of paradox, game, tomo, dicke, visibility, report. */
COH_API coh_status coh_run_command(const char *command, const coh_options *options, const char *out_dir,
                                   coh_run **out);
COH_API coh_status coh_replay_manifest(const char *manifest_path, const char *out_dir, coh_run **out);
COH_API const char *coh_run_summary(const coh_run *run);
COH_API size_t coh_run_num_files(const coh_run *run);
COH_API const char *coh_run_file(const coh_run *run, size_t index);
COH_API const char *coh_run_manifest_path(const coh_run *run);
COH_API void coh_run_free(coh_run *run);

#ifdef __cplusplus
}
#endif

#endif
