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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coherence/expsim.hpp"
#include "coherence/qstate.hpp"

namespace coherence {

/// The full {X,Y,Z} x {X,Y,Z} grid of two-party measurement settings.
std::vector<Setting> tomography_settings();

using SettingCounts = std::map<Setting, CountTable>;

/// Empirical <sigma_i (x) sigma_j> for i, j in {I, X, Y, Z} (index order).
/// Single-party terms average over the partner's three bases.
using PauliTable = std::array<std::array<double, 4>, 4>;

PauliTable empirical_pauli_table(const SettingCounts &counts);

/// rho = 1/4 sum_{i,j} T_ij sigma_i (x) sigma_j. Hermitian with unit trace,
/// not necessarily positive.
CMatrix linear_inversion(const PauliTable &table);

/// Euclidean projection onto {p : p_i >= 0, sum p_i = 1}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd &values);

/// Nearest density operator in Frobenius norm within the same eigenbasis.
/// negative_mass receives the total negative eigenvalue magnitude.
DensityOperator project_to_density(const CMatrix &hermitian, double *negative_mass = nullptr);

struct TomographyResult {
    DensityOperator rho_hat;
    CMatrix rho_linear;
    std::optional<double> fidelity_to_target;
    std::vector<Setting> settings_used;
    double clip_magnitude = 0.0;
};

/// Linear inversion followed by projection onto the density operators.
TomographyResult reconstruct(const SettingCounts &counts, const DensityOperator *target = nullptr);

/// Standard deviation of the reconstructed fidelity under parametric Poisson
/// resampling of every count cell.
double tomography_fidelity_std_err(const SettingCounts &counts, const DensityOperator &target, int replicates,
                                   std::uint64_t seed);

/// A prepared source with its noise level.
struct PreparedState {
    std::string name;
    double theta = 0.0;  // 0 for |01>, pi/2 for |10>
    StateVector psi;
    double visibility = 1.0;
};

/// The six prepared states |01>, psi_00(pi/12, pi/8, pi/6, pi/4) and |10>.
/// Without an explicit visibility, each uses the Werner parameter matching
/// its reported fidelity (0.9973, 0.9946, 0.9686, 0.9771, 0.9937, 0.9939).
std::vector<PreparedState> reference_states(std::optional<double> visibility = std::nullopt);

/// Reported tomography fidelities of the six prepared states.
const std::array<double, 6> &reported_state_fidelities();

struct TomographyRecord {
    PreparedState state;
    TomographyResult result;
    double fidelity_std_err = 0.0;
    double closed_form_fidelity = 0.0;
};

/// Simulates all nine settings for every state and reconstructs it.
std::vector<TomographyRecord> tomography_report(const std::vector<PreparedState> &states,
                                                const ExperimentConfig &cfg);

}  // namespace coherence
