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
#include <string>

#include "coherence/measure.hpp"

namespace coherence {

/// Winning condition a xor b = x xor y over uniformly random inputs.
struct GameEvaluation {
    /// i_terms[a][b] = sum_{x,y} (-1)^{x xor y} P(a,b|x,y)
    std::array<std::array<double, 2>, 2> i_terms{};
    double p_win = 0.0;
    std::string strategy_note;
};

double coherence_term(const JointDistribution &dist, int a, int b);

/// P_win = 1/4 [P(a=b|00) + P(a!=b|01) + P(a!=b|10) + P(a=b|11)].
GameEvaluation winning_probability(const JointDistribution &dist);

/// Sources |01>, |10> and cos(theta)|01> + sin(theta)|10> for inputs 01, 10
/// and 00; both players output uniform random bits on input 11.
JointDistribution quantum_strategy(double theta, const LocalObservable &m_a, const LocalObservable &m_b);

/// Named strategies: both parties measure sigma_X, or both measure sigma_Z.
enum class GameStrategy { kPauliX, kPauliZ };

GameStrategy parse_game_strategy(std::string_view text);
LocalObservable strategy_observable(GameStrategy strategy);
GameEvaluation evaluate_strategy(double theta, GameStrategy strategy);

/// P_win from the three source correlators: 1/2 + (E00 - E01 - E10)/8.
double winning_probability_from_correlators(double e00, double e01, double e10);

/// |p_win - 1/2 - (I_00 + I_11)/4| <= 1e-10.
bool classical_identity_check(const JointDistribution &dist);

}  // namespace coherence
