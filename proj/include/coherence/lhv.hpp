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
#include <string>
#include <utility>
#include <vector>

#include "coherence/measure.hpp"
#include "coherence/qstate.hpp"

namespace coherence {

/// One expectation-value requirement <O>_{source} = value.
struct Constraint {
    std::string source_label;
    ObservableChain observable;
    double expected_value = 0.0;
};

/// The hidden-variable claim under test: the mixed source is a convex
/// combination of the component sources.
struct MixtureClaim {
    std::string mixed_label;
    std::vector<std::string> component_labels;
    std::string note;
};

class ParadoxSpec {
   public:
    /// Validates value ranges and that every claim label has a constraint.
    ParadoxSpec(std::vector<Constraint> constraints, MixtureClaim claim);

    const std::vector<Constraint> &constraints() const { return constraints_; }
    const MixtureClaim &mixture_claim() const { return claim_; }
    /// Observables constrained on the mixed source, in constraint order.
    std::vector<ObservableChain> mixed_observables() const;

   private:
    std::vector<Constraint> constraints_;
    MixtureClaim claim_;
};

struct ParadoxVerdict {
    std::vector<double> per_constraint_values;
    bool lhv_feasible = true;
    /// 0 iff feasible; otherwise the best achievable worst-case residual.
    double violation_gap = 0.0;
    std::vector<double> witness_weights;
};

/// (source label, observable string) -> value.
using Observations = std::map<std::pair<std::string, std::string>, double>;

Observations observations_from_spec(const ParadoxSpec &spec);

/// Born-rule values of every constraint, with states resolved by label.
/// Labels are basis bit strings ("01", "001") except the mixed label, which
/// maps to mixed_state.
Observations born_observations(const ParadoxSpec &spec, const StateVector &mixed_state);

/// Five constraints: <ZZ> = -1 on 01 and 10, <AA> = 0 on 01 and 10, and
/// <AA> = sin(2 theta) on 00, for A the chosen axis.
ParadoxSpec coherence_paradox(double theta, Axis axis);

/// Z-chain = -1 and X..Z..X = 0 on every weight-one basis state, plus the
/// same X..Z..X chain on |D_n^(1)> with its Born-rule value. The mixed label
/// is the all-zero string.
ParadoxSpec dicke_paradox(int num_qubits, int z_position);

/// Tests whether some weights p_i >= 0, sum p_i = 1 reproduce every mixed
/// observation from the component observations within tol.
ParadoxVerdict lhv_mixture_test(const ParadoxSpec &spec, const Observations &observed, double tol);

struct GhzCheck {
    /// <XYY>, <YXY>, <YYX>, <XXX>
    std::array<double, 4> stabilizers{};
    /// deterministic assignments (v_X^i, v_Y^i) in {+-1}^6 reproducing the
    /// rounded stabilizer signs; only counted when every value is +-1.
    int satisfying_assignments = 0;
    bool all_unit_magnitude = false;
    ParadoxVerdict verdict;
};

/// The four three-qubit stabilizer products of the GHZ argument.
const std::array<ObservableChain, 4> &ghz_stabilizer_chains();

/// Number of sign vectors v in {+-1}^6 whose products match targets.
int count_sign_assignments(const std::array<int, 4> &targets);

/// Evaluates the stabilizers on a three-qubit state and decides whether a
/// mixture of deterministic local assignments reproduces them.
GhzCheck ghz_stabilizer_check(const StateVector &state, double tol = 1e-10);

}  // namespace coherence
