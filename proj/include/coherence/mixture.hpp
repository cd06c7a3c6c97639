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

#include <span>
#include <vector>

namespace coherence {

/// Dense linear program: minimize c.x subject to
///   A_le x <= b_le,  A_eq x = b_eq,  x >= 0.
/// Right-hand sides may have any sign.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<std::vector<double>> le_rows;
    std::vector<double> le_rhs;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
    LpStatus status = LpStatus::kInfeasible;
    std::vector<double> x;
    double value = 0.0;
};

/// Two-phase tableau simplex with Bland's rule.
LpSolution solve_lp(const LinearProgram &lp);

/// Best convex mixture of component rows approximating a target row.
struct MixtureFit {
    std::vector<double> weights;
    /// min over the simplex of max_O scale_O * |sum_i w_i c_iO - target_O|
    double residual = 0.0;
};

/// components[i][O] is component i's value for observable O. scale may be
/// empty (all ones). One component is trivial, two components use the exact
/// breakpoint search, three or more solve the min-max LP.
MixtureFit fit_mixture(const std::vector<std::vector<double>> &components, std::span<const double> target,
                       std::span<const double> scale = {});

}  // namespace coherence
