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

#include "coherence/game.hpp"

#include <cmath>

#include "coherence/error.hpp"

namespace coherence {

double coherence_term(const JointDistribution &dist, int a, int b) {
    require(a >= 0 && a < 2 && b >= 0 && b < 2, "outcomes must be 0 or 1");
    double total = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            total += ((x ^ y) ? -1.0 : 1.0) * dist(a, b, x, y);
        }
    }
    return total;
}

GameEvaluation winning_probability(const JointDistribution &dist) {
    GameEvaluation eval;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) eval.i_terms[a][b] = coherence_term(dist, a, b);
    }
    double total = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int a = 0; a < 2; ++a) {
                const int b = a ^ x ^ y;
                total += dist(a, b, x, y);
            }
        }
    }
    eval.p_win = total / 4.0;
    const double identity = 0.5 + (eval.i_terms[0][0] + eval.i_terms[1][1]) / 4.0;
    if (std::abs(identity - eval.p_win) > kEqualityTolerance) {
        throw NumericalError("winning probability disagrees with 1/2 + (I_00 + I_11)/4");
    }
    return eval;
}

JointDistribution quantum_strategy(double theta, const LocalObservable &m_a, const LocalObservable &m_b) {
    require(m_a.axis != Axis::I && m_b.axis != Axis::I, "strategy observables must be Pauli X, Y or Z");
    SourceMap sources;
    sources.emplace(InputPair{0, 1}, density_from_state(epr_family(theta, SourceLabel::k01)));
    sources.emplace(InputPair{1, 0}, density_from_state(epr_family(theta, SourceLabel::k10)));
    sources.emplace(InputPair{0, 0}, density_from_state(epr_family(theta, SourceLabel::k00)));
    return outcome_distribution(sources, {m_a, m_a}, {m_b, m_b}, kUniformRow);
}

GameStrategy parse_game_strategy(std::string_view text) {
    if (text == "x" || text == "X") return GameStrategy::kPauliX;
    if (text == "z" || text == "Z") return GameStrategy::kPauliZ;
    throw InvalidArgument("unknown game strategy '" + std::string(text) + "' (expected x or z)");
}

LocalObservable strategy_observable(GameStrategy strategy) {
    return LocalObservable{strategy == GameStrategy::kPauliX ? Axis::X : Axis::Z, +1};
}

GameEvaluation evaluate_strategy(double theta, GameStrategy strategy) {
    const LocalObservable m = strategy_observable(strategy);
    GameEvaluation eval = winning_probability(quantum_strategy(theta, m, m));
    eval.strategy_note = std::string("M_A = M_B = sigma_") + axis_char(m.axis) + "; sources |01>, |10>, cos|01>+sin|10>";
    return eval;
}

double winning_probability_from_correlators(double e00, double e01, double e10) {
    return 0.5 + (e00 - e01 - e10) / 8.0;
}

bool classical_identity_check(const JointDistribution &dist) {
    double i00 = coherence_term(dist, 0, 0);
    double i11 = coherence_term(dist, 1, 1);
    double direct = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int a = 0; a < 2; ++a) direct += dist(a, a ^ x ^ y, x, y);
        }
    }
    return std::abs(direct / 4.0 - 0.5 - (i00 + i11) / 4.0) <= kEqualityTolerance;
}

}  // namespace coherence
