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

#include "coherence/mixture.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "coherence/error.hpp"

using namespace coherence;

namespace {

double worst_residual(const std::vector<std::vector<double>> &c, const std::vector<double> &t,
                      const std::vector<double> &w) {
    double worst = 0.0;
    for (std::size_t o = 0; o < t.size(); ++o) {
        double mix = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) mix += w[i] * c[i][o];
        worst = std::max(worst, std::abs(mix - t[o]));
    }
    return worst;
}

// Dense grid over p in [0, 1].
double grid_two(const std::vector<std::vector<double>> &c, const std::vector<double> &t, double step) {
    double best = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(std::lround(1.0 / step));
    for (int k = 0; k <= n; ++k) {
        const double p = static_cast<double>(k) / n;
        best = std::min(best, worst_residual(c, t, {p, 1.0 - p}));
    }
    return best;
}

// Dense grid over the 2-simplex.
double grid_three(const std::vector<std::vector<double>> &c, const std::vector<double> &t, int n) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; i + j <= n; ++j) {
            const double a = static_cast<double>(i) / n, b = static_cast<double>(j) / n;
            best = std::min(best, worst_residual(c, t, {a, b, 1.0 - a - b}));
        }
    }
    return best;
}

}  // namespace

TEST(mixture, lp_basic) {
    // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
    LinearProgram lp{{-1, -1}, {{1, 2}, {3, 1}}, {4, 6}, {}, {}};
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.x[0], 1.6, 1e-12);
    EXPECT_NEAR(s.x[1], 1.2, 1e-12);
    EXPECT_NEAR(s.value, -2.8, 1e-12);
}

TEST(mixture, lp_equality_and_negative_rhs) {
    // min x - y s.t. x + y = 1, -x <= -0.25.
    LinearProgram lp{{1, -1}, {{-1, 0}}, {-0.25}, {{1, 1}}, {1}};
    const LpSolution s = solve_lp(lp);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.x[0], 0.25, 1e-12);
    EXPECT_NEAR(s.value, -0.5, 1e-12);
}

TEST(mixture, lp_infeasible_and_unbounded) {
    EXPECT_EQ(solve_lp({{1}, {{1}}, {-1}, {}, {}}).status, LpStatus::kInfeasible);
    EXPECT_EQ(solve_lp({{-1}, {}, {}, {}, {}}).status, LpStatus::kUnbounded);
}

TEST(mixture, single_component) {
    const MixtureFit f = fit_mixture({{0.5, -0.5}}, std::vector<double>{0.25, 0.0});
    EXPECT_EQ(f.weights, std::vector<double>{1.0});
    EXPECT_NEAR(f.residual, 0.5, 1e-15);
}

TEST(mixture, two_components_match_grid) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const int m = 1 + k % 4;
        std::vector<std::vector<double>> c(2, std::vector<double>(m));
        std::vector<double> t(m);
        for (auto &row : c) {
            for (double &x : row) x = u(rng);
        }
        for (double &x : t) x = u(rng);
        const MixtureFit f = fit_mixture(c, t);
        const double oracle = grid_two(c, t, 1e-4);
        EXPECT_LE(f.residual, oracle + 1e-12);
        EXPECT_NEAR(f.residual, oracle, 2e-4);
        EXPECT_NEAR(worst_residual(c, t, f.weights), f.residual, 1e-12);
    }
}

TEST(mixture, three_components_match_grid) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        std::vector<std::vector<double>> c(3, std::vector<double>(3));
        std::vector<double> t(3);
        for (auto &row : c) {
            for (double &x : row) x = u(rng);
        }
        for (double &x : t) x = u(rng);
        const MixtureFit f = fit_mixture(c, t);
        const double oracle = grid_three(c, t, 400);
        EXPECT_LE(f.residual, oracle + 1e-12);
        EXPECT_NEAR(f.residual, oracle, 1e-2);
        double sum = 0.0;
        for (double w : f.weights) {
            EXPECT_GE(w, -1e-12);
            sum += w;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
        EXPECT_NEAR(worst_residual(c, t, f.weights), f.residual, 1e-10);
    }
}

TEST(mixture, scaled_residual) {
    const MixtureFit f = fit_mixture({{1.0}, {0.0}}, std::vector<double>{2.0}, std::vector<double>{10.0});
    EXPECT_NEAR(f.residual, 10.0, 1e-12);
    EXPECT_NEAR(f.weights[0], 1.0, 1e-12);
}

TEST(mixture, validation) {
    EXPECT_THROW(fit_mixture({}, std::vector<double>{1.0}), InvalidArgument);
    EXPECT_THROW(fit_mixture({{1.0, 2.0}}, std::vector<double>{1.0}), InvalidArgument);
}
