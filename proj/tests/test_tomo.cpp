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

#include "coherence/tomo.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "coherence/error.hpp"

using namespace coherence;
using std::numbers::pi;

namespace {

// Counts proportional to exact Born probabilities.
SettingCounts exact_counts(const DensityOperator &rho, double scale) {
    SettingCounts out;
    for (const Setting &s : tomography_settings()) {
        const OutcomeRow p = born_row(rho, {s.a, 1}, {s.b, 1});
        std::array<std::uint64_t, 4> n{};
        for (std::size_t c = 0; c < 4; ++c) n[c] = static_cast<std::uint64_t>(std::llround(p[c] * scale));
        out.emplace(s, count_table_from_counts(s, n));
    }
    return out;
}

SettingCounts simulated_counts(const DensityOperator &rho, const ExperimentConfig &cfg) {
    SettingCounts out;
    for (const Setting &s : tomography_settings()) out.emplace(s, simulate_counts(rho, s, cfg, stream_id("t", s)));
    return out;
}

ExperimentConfig config(double counts, double v, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.visibility = v;
    cfg.seed = seed;
    cfg.num_trials = 1;
    cfg.bootstrap_replicates = 200;
    cfg.set_counts_per_setting(counts);
    return cfg;
}

// Brute-force search over the probability simplex on a fine grid.
double brute_force_distance(const Eigen::VectorXd &v, int n) {
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; a + b <= n; ++b) {
            for (int c = 0; a + b + c <= n; ++c) {
                Eigen::Vector4d p(a, b, c, n - a - b - c);
                p /= n;
                best = std::min(best, (p - v).norm());
            }
        }
    }
    return best;
}

}  // namespace

TEST(tomo, settings) {
    const std::vector<Setting> s = tomography_settings();
    EXPECT_EQ(s.size(), 9u);
    EXPECT_NE(std::find(s.begin(), s.end(), Setting{Axis::Z, Axis::Z}), s.end());
    EXPECT_NE(std::find(s.begin(), s.end(), Setting{Axis::X, Axis::Y}), s.end());
    EXPECT_EQ(std::set<Setting>(s.begin(), s.end()).size(), 9u);
}

TEST(tomo, exact_counts_recover_epr) {
    const DensityOperator target = density_from_state(epr_family(pi / 4, SourceLabel::k00));
    const TomographyResult r = reconstruct(exact_counts(target, 1e12), &target);
    EXPECT_LT((r.rho_hat.matrix() - target.matrix()).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(*r.fidelity_to_target, 1.0, 1e-6);
    EXPECT_NEAR(r.rho_hat.matrix()(1, 2).real(), 0.5, 1e-6);
    EXPECT_EQ(r.settings_used.size(), 9u);
}

TEST(tomo, linear_inversion_reproduces_correlators) {
    const DensityOperator rho = werner_mix(epr_family(pi / 7, SourceLabel::k00), 0.8);
    const SettingCounts counts = simulated_counts(rho, config(2000, 1.0, 5));
    const PauliTable table = empirical_pauli_table(counts);
    const CMatrix lin = linear_inversion(table);
    const Axis axes[4] = {Axis::I, Axis::X, Axis::Y, Axis::Z};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const CMatrix op = ObservableChain({axes[i], axes[j]}).matrix();
            EXPECT_NEAR((op * lin).trace().real(), table[i][j], 1e-10);
        }
    }
    EXPECT_EQ(table[0][0], 1.0);
}

TEST(tomo, simplex_projection_is_optimal) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.3, 0.8);
    for (int k = 0; k < 20; ++k) {
        Eigen::VectorXd v(4);
        for (int i = 0; i < 4; ++i) v(i) = u(rng);
        const Eigen::VectorXd p = project_to_simplex(v);
        EXPECT_NEAR(p.sum(), 1.0, 1e-12);
        EXPECT_GE(p.minCoeff(), 0.0);
        EXPECT_LE((p - v).norm(), brute_force_distance(v, 60) + 1e-12);
    }
}

TEST(tomo, density_projection) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
        CMatrix a(4, 4);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng));
        }
        CMatrix h = (a + a.adjoint()) / 2.0;
        h += CMatrix::Identity(4, 4) * ((1.0 - h.trace().real()) / 4.0);
        double mass = 0.0;
        const DensityOperator rho = project_to_density(h, &mass);
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
        double negative = 0.0;
        for (int i = 0; i < 4; ++i) negative += std::max(0.0, -solver.eigenvalues()(i));
        EXPECT_NEAR(mass, negative, 1e-12);
        const double best = brute_force_distance(solver.eigenvalues(), 60);
        EXPECT_LE((rho.matrix() - h).norm(), best + 1e-10);
    }
}

TEST(tomo, werner_fidelity_within_bootstrap_error) {
    const DensityOperator target = density_from_state(epr_family(pi / 4, SourceLabel::k00));
    const ExperimentConfig cfg = config(1e5, 0.98, 12);
    const SettingCounts counts = simulated_counts(target, cfg);
    const TomographyResult r = reconstruct(counts, &target);
    const double err = tomography_fidelity_std_err(counts, target, 200, 12);
    const double oracle = std::sqrt(0.98 + 0.02 / 4);
    EXPECT_NEAR(*r.fidelity_to_target, oracle, std::max(3 * err, 0.002));
    EXPECT_GT(err, 0.0);
    EXPECT_LT(err, 0.002);
    EXPECT_LE(r.rho_hat.matrix().imag().cwiseAbs().maxCoeff(), 0.01);
}

TEST(tomo, fidelity_improves_with_visibility_and_counts) {
    const DensityOperator target = density_from_state(epr_family(pi / 6, SourceLabel::k00));
    double previous = 0.0;
    const std::pair<double, double> grid[] = {{1e3, 0.8}, {1e4, 0.9}, {1e5, 0.97}, {1e7, 0.999}};
    for (const auto &[counts, v] : grid) {
        const TomographyResult r = reconstruct(simulated_counts(target, config(counts, v, 1)), &target);
        EXPECT_GT(*r.fidelity_to_target, previous);
        previous = *r.fidelity_to_target;
    }
    EXPECT_GT(previous, 0.999);
}

TEST(tomo, reference_states) {
    const std::vector<PreparedState> states = reference_states();
    ASSERT_EQ(states.size(), 6u);
    for (std::size_t i = 0; i < states.size(); ++i) {
        EXPECT_NEAR(werner_fidelity(states[i].visibility, 2), reported_state_fidelities()[i], 1e-12);
    }
    ExperimentConfig cfg;
    cfg.set_counts_per_setting(1e6);
    cfg.bootstrap_replicates = 50;
    for (const TomographyRecord &rec : tomography_report(reference_states(1.0), cfg)) {
        EXPECT_GT(*rec.result.fidelity_to_target, 0.999) << rec.state.name;
    }
}

TEST(tomo, missing_setting_is_an_error) {
    const DensityOperator target = density_from_state(epr_family(pi / 4, SourceLabel::k00));
    SettingCounts counts = exact_counts(target, 100);
    counts.erase(Setting{Axis::Y, Axis::Z});
    EXPECT_THROW(reconstruct(counts), InvalidArgument);
}
