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

#include <cstring>
#include <memory>
#include <new>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "coherence/app.hpp"
#include "coherence/error.hpp"
#include "coherence/io.hpp"

using namespace coherence;

struct coh_state {
    DensityOperator rho;
    std::optional<StateVector> pure;
};

struct coh_paradox {
    ParadoxSpec spec;
    std::vector<std::string> sources;
    std::vector<std::string> observables;
};

struct coh_config {
    ExperimentConfig cfg;
};

struct coh_options {
    CommandOptions values;
};

struct coh_run {
    RunRecord record;
    std::vector<std::string> files;
    std::string manifest;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
coh_status guarded(F &&body) {
    try {
        body();
        g_last_error.clear();
        return COH_OK;
    } catch (const InvalidArgument &e) {
        g_last_error = e.what();
        return COH_ERR_INVALID_ARGUMENT;
    } catch (const NumericalError &e) {
        g_last_error = e.what();
        return COH_ERR_NUMERICAL;
    } catch (const IoError &e) {
        g_last_error = e.what();
        return COH_ERR_IO;
    } catch (const std::bad_alloc &) {
        g_last_error = "out of memory";
        return COH_ERR_INTERNAL;
    } catch (const std::exception &e) {
        g_last_error = e.what();
        return COH_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return COH_ERR_INTERNAL;
    }
}

void need(const void *ptr, const char *name) {
    if (ptr == nullptr) throw InvalidArgument(std::string(name) + " must not be null");
}

coh_state *wrap(const StateVector &psi) { return new coh_state{density_from_state(psi), psi}; }

char *copy_string(const std::string &text) {
    char *out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

coh_paradox *wrap(ParadoxSpec spec) {
    auto *p = new coh_paradox{std::move(spec), {}, {}};
    for (const Constraint &c : p->spec.constraints()) {
        p->sources.push_back(c.source_label);
        p->observables.push_back(c.observable.to_string());
    }
    return p;
}

void fill(const GameEvaluation &eval, coh_game_result *out) {
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) out->i_terms[a][b] = eval.i_terms[a][b];
    }
    out->p_win = eval.p_win;
}

void fill(const EstimatedCorrelator &e, coh_correlator *out) {
    out->value = e.value;
    out->std_err = e.std_err;
    out->delta_std_err = e.delta_std_err;
    out->n_total = e.n_total;
}

coh_run *wrap(RunRecord record) {
    auto *run = new coh_run{std::move(record), {}, {}};
    for (const auto &p : run->record.files) run->files.push_back(p.string());
    run->manifest = run->record.manifest.string();
    return run;
}

}  // namespace

extern "C" {

const char *coh_version(void) { return kVersion; }

const char *coh_last_error(void) { return g_last_error.c_str(); }

const char *coh_status_name(coh_status status) {
    switch (status) {
        case COH_OK:
            return "ok";
        case COH_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case COH_ERR_NUMERICAL:
            return "numerical error";
        case COH_ERR_IO:
            return "io error";
        case COH_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

void coh_string_free(char *text) { delete[] text; }

coh_status coh_state_epr(double theta, const char *label, coh_state **out) {
    return guarded([&] {
        need(label, "label");
        need(out, "out");
        *out = wrap(epr_family(theta, parse_source_label(label)));
    });
}

coh_status coh_state_ghz(int num_qubits, coh_state **out) {
    return guarded([&] {
        need(out, "out");
        *out = wrap(ghz_state(num_qubits));
    });
}

coh_status coh_state_dicke(int num_qubits, coh_state **out) {
    return guarded([&] {
        need(out, "out");
        *out = wrap(dicke_one_excitation(num_qubits));
    });
}

coh_status coh_state_basis(int num_qubits, uint64_t index, coh_state **out) {
    return guarded([&] {
        need(out, "out");
        *out = wrap(basis_state(num_qubits, index));
    });
}

coh_status coh_state_werner(const coh_state *state, double visibility, coh_state **out) {
    return guarded([&] {
        need(state, "state");
        need(out, "out");
        *out = new coh_state{werner_mix(state->rho, visibility), std::nullopt};
    });
}

void coh_state_free(coh_state *state) { delete state; }

int coh_state_num_qubits(const coh_state *state) { return state == nullptr ? 0 : state->rho.num_qubits(); }

coh_status coh_state_matrix_entry(const coh_state *state, size_t row, size_t col, double *re, double *im) {
    return guarded([&] {
        need(state, "state");
        need(re, "re");
        need(im, "im");
        require(row < state->rho.dimension() && col < state->rho.dimension(), "matrix index out of range");
        const Complex z = state->rho.matrix()(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        *re = z.real();
        *im = z.imag();
    });
}

coh_status coh_expectation(const coh_state *state, const char *chain, double *out) {
    return guarded([&] {
        need(state, "state");
        need(chain, "chain");
        need(out, "out");
        const ObservableChain obs = ObservableChain::parse(chain);
        *out = state->pure ? expectation(*state->pure, obs) : expectation(state->rho, obs);
    });
}

coh_status coh_fidelity(const coh_state *rho, const coh_state *sigma, double *out) {
    return guarded([&] {
        need(rho, "rho");
        need(sigma, "sigma");
        need(out, "out");
        *out = fidelity(rho->rho, sigma->rho);
    });
}

coh_status coh_paradox_coherence(double theta, char axis, coh_paradox **out) {
    return guarded([&] {
        need(out, "out");
        const Axis a = parse_axis(axis);
        require(a == Axis::X || a == Axis::Y, "axis must be X or Y");
        *out = wrap(coherence_paradox(theta, a));
    });
}

coh_status coh_paradox_dicke(int num_qubits, int z_position, coh_paradox **out) {
    return guarded([&] {
        need(out, "out");
        *out = wrap(dicke_paradox(num_qubits, z_position));
    });
}

coh_status coh_paradox_from_json(const char *json, coh_paradox **out) {
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(json);
        } catch (const nlohmann::json::exception &e) {
            throw InvalidArgument(std::string("malformed paradox JSON: ") + e.what());
        }
        *out = wrap(paradox_spec_from_json(doc));
    });
}

coh_status coh_paradox_to_json(const coh_paradox *paradox, char **out) {
    return guarded([&] {
        need(paradox, "paradox");
        need(out, "out");
        *out = copy_string(to_json(paradox->spec).dump(2));
    });
}

void coh_paradox_free(coh_paradox *paradox) { delete paradox; }

size_t coh_paradox_num_constraints(const coh_paradox *paradox) {
    return paradox == nullptr ? 0 : paradox->spec.constraints().size();
}

coh_status coh_paradox_constraint(const coh_paradox *paradox, size_t index, const char **source,
                                  const char **observable, double *expected_value) {
    return guarded([&] {
        need(paradox, "paradox");
        require(index < paradox->spec.constraints().size(), "constraint index out of range");
        if (source != nullptr) *source = paradox->sources[index].c_str();
        if (observable != nullptr) *observable = paradox->observables[index].c_str();
        if (expected_value != nullptr) *expected_value = paradox->spec.constraints()[index].expected_value;
    });
}

coh_status coh_paradox_check(const coh_paradox *paradox, double tol, coh_verdict *out) {
    return guarded([&] {
        need(paradox, "paradox");
        need(out, "out");
        const ParadoxVerdict v = lhv_mixture_test(paradox->spec, observations_from_spec(paradox->spec), tol);
        out->lhv_feasible = v.lhv_feasible ? 1 : 0;
        out->violation_gap = v.violation_gap;
    });
}

coh_status coh_ghz_check(const coh_state *state, coh_ghz_result *out) {
    return guarded([&] {
        need(state, "state");
        need(out, "out");
        require(state->pure.has_value(), "GHZ check needs a pure state");
        const GhzCheck check = ghz_stabilizer_check(*state->pure);
        for (int k = 0; k < 4; ++k) out->stabilizers[k] = check.stabilizers[k];
        out->satisfying_assignments = check.satisfying_assignments;
        out->lhv_feasible = check.verdict.lhv_feasible ? 1 : 0;
        out->violation_gap = check.verdict.violation_gap;
    });
}

coh_status coh_game_evaluate(double theta, const char *strategy, coh_game_result *out) {
    return guarded([&] {
        need(strategy, "strategy");
        need(out, "out");
        fill(evaluate_strategy(theta, parse_game_strategy(strategy)), out);
    });
}

coh_status coh_game_evaluate_observables(double theta, char axis_a, int sign_a, char axis_b, int sign_b,
                                         coh_game_result *out) {
    return guarded([&] {
        need(out, "out");
        require((sign_a == 1 || sign_a == -1) && (sign_b == 1 || sign_b == -1), "signs must be +1 or -1");
        const LocalObservable a{parse_axis(axis_a), sign_a};
        const LocalObservable b{parse_axis(axis_b), sign_b};
        require(a.axis != Axis::I && b.axis != Axis::I, "game observables must be Pauli X, Y or Z");
        fill(winning_probability(quantum_strategy(theta, a, b)), out);
    });
}

coh_status coh_config_new(coh_config **out) {
    return guarded([&] {
        need(out, "out");
        *out = new coh_config{};
    });
}

void coh_config_free(coh_config *config) { delete config; }

coh_status coh_config_set(coh_config *config, const char *key, const char *value) {
    return guarded([&] {
        need(config, "config");
        need(key, "key");
        need(value, "value");
        ExperimentConfig next = config->cfg;
        apply_config_entry(next, key, value);
        next.validate();
        config->cfg = next;
    });
}

coh_status coh_config_load_file(coh_config *config, const char *path) {
    return guarded([&] {
        need(config, "config");
        need(path, "path");
        config->cfg = load_config_file(path);
    });
}

coh_status coh_simulate_correlator(const coh_state *state, const char *setting, const coh_config *config,
                                   uint64_t stream, coh_correlator *out) {
    return guarded([&] {
        need(state, "state");
        need(setting, "setting");
        need(out, "out");
        const ExperimentConfig cfg = config == nullptr ? ExperimentConfig{} : config->cfg;
        fill(correlator_from_counts(simulate_counts(state->rho, parse_setting(setting), cfg, stream)), out);
    });
}

coh_status coh_correlator_from_counts(const uint64_t counts[4], int replicates, uint64_t seed, coh_correlator *out) {
    return guarded([&] {
        need(counts, "counts");
        need(out, "out");
        const std::array<std::uint64_t, 4> c{counts[0], counts[1], counts[2], counts[3]};
        fill(correlator_from_counts(count_table_from_counts(Setting{}, c), replicates, seed), out);
    });
}

coh_status coh_visibility(const coh_state *state, double fixed_angle, int num_points, const coh_config *config,
                          int simulate, double *out) {
    return guarded([&] {
        need(state, "state");
        need(out, "out");
        require(num_points >= 3, "visibility scan needs at least three points");
        std::vector<double> grid;
        for (int k = 0; k < num_points; ++k) grid.push_back(std::numbers::pi * k / (num_points - 1));
        const ExperimentConfig cfg = config == nullptr ? ExperimentConfig{} : config->cfg;
        *out = visibility_scan(state->rho, fixed_angle, grid, cfg, simulate != 0).visibility;
    });
}

coh_status coh_parse_angle(const char *text, double *out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = parse_angle(text);
    });
}

coh_status coh_options_new(coh_options **out) {
    return guarded([&] {
        need(out, "out");
        *out = new coh_options{};
    });
}

void coh_options_free(coh_options *options) { delete options; }

coh_status coh_options_set(coh_options *options, const char *key, const char *value) {
    return guarded([&] {
        need(options, "options");
        need(key, "key");
        need(value, "value");
        options->values[key] = value;
    });
}

coh_status coh_run_command(const char *command, const coh_options *options, const char *out_dir, coh_run **out) {
    return guarded([&] {
        need(command, "command");
        need(out_dir, "out_dir");
        need(out, "out");
        const CommandOptions opts = options == nullptr ? CommandOptions{} : options->values;
        *out = wrap(run_command(command, opts, out_dir));
    });
}

coh_status coh_replay_manifest(const char *manifest_path, const char *out_dir, coh_run **out) {
    return guarded([&] {
        need(manifest_path, "manifest_path");
        need(out_dir, "out_dir");
        need(out, "out");
        *out = wrap(replay_manifest(manifest_path, out_dir));
    });
}

const char *coh_run_summary(const coh_run *run) { return run == nullptr ? "" : run->record.summary.c_str(); }

size_t coh_run_num_files(const coh_run *run) { return run == nullptr ? 0 : run->files.size(); }

const char *coh_run_file(const coh_run *run, size_t index) {
    if (run == nullptr || index >= run->files.size()) return nullptr;
    return run->files[index].c_str();
}

const char *coh_run_manifest_path(const coh_run *run) { return run == nullptr ? "" : run->manifest.c_str(); }

void coh_run_free(coh_run *run) { delete run; }

}  // extern "C"
