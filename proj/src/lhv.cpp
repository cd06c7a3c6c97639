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

#include "coherence/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "coherence/error.hpp"
#include "coherence/mixture.hpp"

namespace coherence {

namespace {

bool has_constraint(const std::vector<Constraint> &constraints, const std::string &label) {
    return std::any_of(constraints.begin(), constraints.end(),
                       [&](const Constraint &c) { return c.source_label == label; });
}

/// "001" -> basis state |001>.
StateVector basis_from_label(const std::string &label) {
    require(!label.empty() && static_cast<int>(label.size()) <= kMaxQubits, "source label '" + label + "' is not a bit string");
    std::uint64_t index = 0;
    for (char c : label) {
        require(c == '0' || c == '1', "source label '" + label + "' is not a bit string");
        index = (index << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return basis_state(static_cast<int>(label.size()), index);
}

std::string weight_one_label(int n, int excited) {
    std::string s(static_cast<std::size_t>(n), '0');
    s[static_cast<std::size_t>(excited)] = '1';
    return s;
}

double lookup(const Observations &observed, const std::string &label, const ObservableChain &obs) {
    const auto it = observed.find({label, obs.to_string()});
    if (it == observed.end()) {
        throw InvalidArgument("missing observation for <" + obs.to_string() + "> on source " + label);
    }
    return it->second;
}

}  // namespace

ParadoxSpec::ParadoxSpec(std::vector<Constraint> constraints, MixtureClaim claim)
    : constraints_(std::move(constraints)), claim_(std::move(claim)) {
    require(!constraints_.empty(), "paradox needs at least one constraint");
    for (const Constraint &c : constraints_) {
        require(c.expected_value >= -1.0 - kEqualityTolerance && c.expected_value <= 1.0 + kEqualityTolerance,
                "expected value of <" + c.observable.to_string() + "> on " + c.source_label + " lies outside [-1, 1]");
    }
    require(has_constraint(constraints_, claim_.mixed_label),
            "mixed label '" + claim_.mixed_label + "' has no constraint");
    require(!claim_.component_labels.empty(), "mixture claim needs at least one component");
    std::set<std::string> seen;
    for (const std::string &label : claim_.component_labels) {
        require(seen.insert(label).second, "duplicate component label '" + label + "'");
        require(label != claim_.mixed_label, "a component cannot equal the mixed label");
        require(has_constraint(constraints_, label), "component label '" + label + "' has no constraint");
    }
}

std::vector<ObservableChain> ParadoxSpec::mixed_observables() const {
    std::vector<ObservableChain> out;
    for (const Constraint &c : constraints_) {
        if (c.source_label == claim_.mixed_label &&
            std::find(out.begin(), out.end(), c.observable) == out.end()) {
            out.push_back(c.observable);
        }
    }
    return out;
}

Observations observations_from_spec(const ParadoxSpec &spec) {
    Observations out;
    for (const Constraint &c : spec.constraints()) {
        out[{c.source_label, c.observable.to_string()}] = c.expected_value;
    }
    return out;
}

Observations born_observations(const ParadoxSpec &spec, const StateVector &mixed_state) {
    Observations out;
    for (const Constraint &c : spec.constraints()) {
        const double value = c.source_label == spec.mixture_claim().mixed_label
                                 ? expectation(mixed_state, c.observable)
                                 : expectation(basis_from_label(c.source_label), c.observable);
        out[{c.source_label, c.observable.to_string()}] = value;
    }
    return out;
}

ParadoxSpec coherence_paradox(double theta, Axis axis) {
    require(theta > 0.0 && theta < std::numbers::pi / 2, "theta must lie in (0, pi/2)");
    require(axis == Axis::X || axis == Axis::Y, "coherence paradox axis must be X or Y");
    const ObservableChain zz = ObservableChain::parse("ZZ");
    const ObservableChain aa({axis, axis});
    std::vector<Constraint> constraints{
        {"01", zz, -1.0}, {"10", zz, -1.0}, {"01", aa, 0.0}, {"10", aa, 0.0}, {"00", aa, std::sin(2.0 * theta)},
    };
    MixtureClaim claim{"00", {"01", "10"}, "source 00 as a convex mixture of sources 01 and 10"};
    return ParadoxSpec(std::move(constraints), std::move(claim));
}

ParadoxSpec dicke_paradox(int num_qubits, int z_position) {
    require(num_qubits >= 2 && num_qubits <= kMaxQubits, "Dicke paradox needs 2 to 10 parties");
    require(z_position >= 0 && z_position < num_qubits, "Z position must lie in [0, n)");
    const ObservableChain all_z(std::vector<Axis>(static_cast<std::size_t>(num_qubits), Axis::Z));
    std::vector<Axis> axes(static_cast<std::size_t>(num_qubits), Axis::X);
    axes[static_cast<std::size_t>(z_position)] = Axis::Z;
    const ObservableChain mixed_chain(axes);

    std::vector<Constraint> constraints;
    std::vector<std::string> components;
    for (int k = 0; k < num_qubits; ++k) {
        const std::string label = weight_one_label(num_qubits, k);
        constraints.push_back({label, all_z, expectation(basis_from_label(label), all_z)});
        components.push_back(label);
    }
    for (const std::string &label : components) {
        constraints.push_back({label, mixed_chain, expectation(basis_from_label(label), mixed_chain)});
    }
    const std::string mixed_label(static_cast<std::size_t>(num_qubits), '0');
    constraints.push_back({mixed_label, mixed_chain, expectation(dicke_one_excitation(num_qubits), mixed_chain)});
    MixtureClaim claim{mixed_label, components, "Dicke source as a convex mixture of its weight-one components"};
    return ParadoxSpec(std::move(constraints), std::move(claim));
}

ParadoxVerdict lhv_mixture_test(const ParadoxSpec &spec, const Observations &observed, double tol) {
    require(tol >= 0.0, "tolerance must be non-negative");
    ParadoxVerdict verdict;
    for (const Constraint &c : spec.constraints()) {
        verdict.per_constraint_values.push_back(lookup(observed, c.source_label, c.observable));
    }
    const MixtureClaim &claim = spec.mixture_claim();
    const std::vector<ObservableChain> observables = spec.mixed_observables();
    std::vector<double> target;
    for (const ObservableChain &o : observables) target.push_back(lookup(observed, claim.mixed_label, o));
    std::vector<std::vector<double>> components;
    for (const std::string &label : claim.component_labels) {
        std::vector<double> row;
        for (const ObservableChain &o : observables) row.push_back(lookup(observed, label, o));
        components.push_back(std::move(row));
    }
    const MixtureFit fit = fit_mixture(components, target);
    verdict.witness_weights = fit.weights;
    verdict.lhv_feasible = fit.residual <= tol;
    verdict.violation_gap = verdict.lhv_feasible ? 0.0 : fit.residual;
    return verdict;
}

const std::array<ObservableChain, 4> &ghz_stabilizer_chains() {
    static const std::array<ObservableChain, 4> chains{
        ObservableChain::parse("XYY"),
        ObservableChain::parse("YXY"),
        ObservableChain::parse("YYX"),
        ObservableChain::parse("XXX"),
    };
    return chains;
}

namespace {

/// Products predicted by v = (vX1, vY1, vX2, vY2, vX3, vY3), bit set = -1.
std::array<int, 4> assignment_products(unsigned bits) {
    auto v = [bits](int party, bool y) { return (bits >> (2 * party + (y ? 1 : 0))) & 1U ? -1 : 1; };
    return {
        v(0, false) * v(1, true) * v(2, true),
        v(0, true) * v(1, false) * v(2, true),
        v(0, true) * v(1, true) * v(2, false),
        v(0, false) * v(1, false) * v(2, false),
    };
}

}  // namespace

int count_sign_assignments(const std::array<int, 4> &targets) {
    int count = 0;
    for (unsigned bits = 0; bits < 64; ++bits) {
        if (assignment_products(bits) == targets) ++count;
    }
    return count;
}

GhzCheck ghz_stabilizer_check(const StateVector &state, double tol) {
    require(state.num_qubits() == 3, "GHZ stabilizer check needs a three-qubit state");
    require(tol >= 0.0, "tolerance must be non-negative");
    GhzCheck check;
    const auto &chains = ghz_stabilizer_chains();
    for (std::size_t k = 0; k < 4; ++k) check.stabilizers[k] = expectation(state, chains[k]);

    check.all_unit_magnitude = std::all_of(check.stabilizers.begin(), check.stabilizers.end(),
                                           [tol](double e) { return std::abs(std::abs(e) - 1.0) <= tol; });
    if (check.all_unit_magnitude) {
        std::array<int, 4> signs{};
        for (std::size_t k = 0; k < 4; ++k) signs[k] = check.stabilizers[k] > 0.0 ? 1 : -1;
        check.satisfying_assignments = count_sign_assignments(signs);
    }

    // Local hidden-variable models are mixtures of deterministic assignments,
    // so the reachable stabilizer vectors form the hull of these vertices.
    std::set<std::array<int, 4>> vertices;
    for (unsigned bits = 0; bits < 64; ++bits) vertices.insert(assignment_products(bits));
    std::vector<std::vector<double>> components;
    for (const auto &v : vertices) components.emplace_back(v.begin(), v.end());
    const MixtureFit fit = fit_mixture(components, check.stabilizers);

    check.verdict.per_constraint_values.assign(check.stabilizers.begin(), check.stabilizers.end());
    check.verdict.witness_weights = fit.weights;
    check.verdict.lhv_feasible = fit.residual <= tol;
    check.verdict.violation_gap = check.verdict.lhv_feasible ? 0.0 : fit.residual;
    return check;
}

}  // namespace coherence
