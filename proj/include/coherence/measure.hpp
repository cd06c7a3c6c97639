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
#include <string_view>
#include <vector>

#include "coherence/qstate.hpp"

namespace coherence {

enum class Axis { I, X, Y, Z };

Axis parse_axis(char c);
char axis_char(Axis axis);

/// 2x2 matrix of the Pauli operator (identity for Axis::I).
Eigen::Matrix2cd pauli_matrix(Axis axis);

/// A dichotomic single-qubit observable +-sigma_axis.
struct LocalObservable {
    Axis axis = Axis::Z;
    int sign = +1;

    Eigen::Matrix2cd matrix() const;
    /// Projector M_{outcome}; outcome 0 is eigenvalue +1, outcome 1 is -1.
    Eigen::Matrix2cd projector(int outcome) const;

    friend bool operator==(const LocalObservable &, const LocalObservable &) = default;
};

/// Tensor product of single-qubit Paulis, qubit 0 leftmost.
class ObservableChain {
   public:
    explicit ObservableChain(std::vector<Axis> axes);
    /// Parses strings such as "XYY" or "ZIZ".
    static ObservableChain parse(std::string_view text);

    int num_qubits() const { return static_cast<int>(axes_.size()); }
    const std::vector<Axis> &axes() const { return axes_; }
    std::string to_string() const;
    /// Dense 2^n x 2^n matrix (Kronecker product).
    CMatrix matrix() const;

    friend bool operator==(const ObservableChain &, const ObservableChain &) = default;
    friend auto operator<=>(const ObservableChain &a, const ObservableChain &b) { return a.to_string() <=> b.to_string(); }

   private:
    std::vector<Axis> axes_;
};

/// tr(O rho). Throws if the imaginary residue exceeds 1e-10.
double expectation(const DensityOperator &rho, const ObservableChain &obs);
/// <psi|O|psi> evaluated directly on amplitudes.
double expectation(const StateVector &psi, const ObservableChain &obs);

/// Outcome probabilities P(a,b) for one input pair, index 2a+b.
using OutcomeRow = std::array<double, 4>;

inline constexpr OutcomeRow kUniformRow{0.25, 0.25, 0.25, 0.25};

/// Born rule on a two-qubit state: P(a,b) = tr((M_a (x) M_b) rho).
OutcomeRow born_row(const DensityOperator &rho, const LocalObservable &obs_a, const LocalObservable &obs_b);

/// Table P(a,b|x,y) over binary outcomes and binary inputs.
class JointDistribution {
   public:
    JointDistribution() = default;
    /// rows indexed by 2x+y. Validates normalization (1e-10) and
    /// non-negativity (-1e-12).
    explicit JointDistribution(std::array<OutcomeRow, 4> rows);

    double operator()(int a, int b, int x, int y) const { return rows_[2 * x + y][2 * a + b]; }
    const OutcomeRow &row(int x, int y) const { return rows_[2 * x + y]; }
    const std::array<OutcomeRow, 4> &rows() const { return rows_; }

   private:
    std::array<OutcomeRow, 4> rows_{kUniformRow, kUniformRow, kUniformRow, kUniformRow};
};

struct InputPair {
    int x = 0;
    int y = 0;
    friend auto operator<=>(const InputPair &, const InputPair &) = default;
};

using SourceMap = std::map<InputPair, DensityOperator>;

/// P(a,b|x,y) for observables chosen by input. Input pairs without a state
/// take fallback_row; without a fallback a missing pair is an error.
JointDistribution outcome_distribution(const SourceMap &states, const std::array<LocalObservable, 2> &obs_a,
                                       const std::array<LocalObservable, 2> &obs_b,
                                       const std::optional<OutcomeRow> &fallback_row = std::nullopt);

/// sum_{a,b} (-1)^{a xor b} P(a,b|x,y).
double correlator(const JointDistribution &dist, int x, int y);
double correlator(const OutcomeRow &row);

}  // namespace coherence
