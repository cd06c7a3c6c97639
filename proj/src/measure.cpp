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

#include "coherence/measure.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <unsupported/Eigen/KroneckerProduct>

#include "coherence/error.hpp"

namespace coherence {

namespace {

constexpr Complex kI{0.0, 1.0};

/// O|j> = phase(j) |j ^ flip_mask>. Qubit q sits at bit (n-1-q).
struct ChainAction {
    std::uint64_t flip_mask = 0;
    std::uint64_t z_mask = 0;  // qubits contributing (-1)^bit
    int y_count = 0;           // each Y contributes a factor i

    Complex phase(std::uint64_t j) const {
        const int parity = std::popcount(j & z_mask) & 1;
        Complex c = parity ? Complex(-1.0, 0.0) : Complex(1.0, 0.0);
        switch (y_count & 3) {
            case 1:
                c *= kI;
                break;
            case 2:
                c *= -1.0;
                break;
            case 3:
                c *= -kI;
                break;
            default:
                break;
        }
        return c;
    }
};

ChainAction chain_action(const ObservableChain &obs) {
    ChainAction act;
    const int n = obs.num_qubits();
    for (int q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        switch (obs.axes()[static_cast<std::size_t>(q)]) {
            case Axis::I:
                break;
            case Axis::X:
                act.flip_mask |= bit;
                break;
            case Axis::Y:
                // Y|0> = i|1>, Y|1> = -i|0>
                act.flip_mask |= bit;
                act.z_mask |= bit;
                ++act.y_count;
                break;
            case Axis::Z:
                act.z_mask |= bit;
                break;
        }
    }
    return act;
}

double checked_real(Complex value) {
    if (std::abs(value.imag()) > kEqualityTolerance) {
        throw NumericalError("expectation value has imaginary residue " + std::to_string(value.imag()));
    }
    return value.real();
}

}  // namespace

Axis parse_axis(char c) {
    switch (c) {
        case 'I':
        case 'i':
            return Axis::I;
        case 'X':
        case 'x':
            return Axis::X;
        case 'Y':
        case 'y':
            return Axis::Y;
        case 'Z':
        case 'z':
            return Axis::Z;
        default:
            throw InvalidArgument(std::string("unknown Pauli axis '") + c + "'");
    }
}

char axis_char(Axis axis) {
    switch (axis) {
        case Axis::I:
            return 'I';
        case Axis::X:
            return 'X';
        case Axis::Y:
            return 'Y';
        case Axis::Z:
            return 'Z';
    }
    return '?';
}

Eigen::Matrix2cd pauli_matrix(Axis axis) {
    Eigen::Matrix2cd m;
    switch (axis) {
        case Axis::I:
            m << 1, 0, 0, 1;
            break;
        case Axis::X:
            m << 0, 1, 1, 0;
            break;
        case Axis::Y:
            m << 0, -kI, kI, 0;
            break;
        case Axis::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

Eigen::Matrix2cd LocalObservable::matrix() const {
    require(sign == 1 || sign == -1, "observable sign must be +1 or -1");
    return static_cast<double>(sign) * pauli_matrix(axis);
}

Eigen::Matrix2cd LocalObservable::projector(int outcome) const {
    require(outcome == 0 || outcome == 1, "outcome must be 0 or 1");
    const double s = outcome == 0 ? 0.5 : -0.5;
    return 0.5 * Eigen::Matrix2cd::Identity() + s * matrix();
}

ObservableChain::ObservableChain(std::vector<Axis> axes) : axes_(std::move(axes)) {
    require(!axes_.empty(), "observable chain must act on at least one qubit");
    require(static_cast<int>(axes_.size()) <= kMaxQubits, "observable chain exceeds the qubit limit");
}

ObservableChain ObservableChain::parse(std::string_view text) {
    std::vector<Axis> axes;
    axes.reserve(text.size());
    for (char c : text) {
        axes.push_back(parse_axis(c));
    }
    return ObservableChain(std::move(axes));
}

std::string ObservableChain::to_string() const {
    std::string s;
    for (Axis a : axes_) {
        s.push_back(axis_char(a));
    }
    return s;
}

CMatrix ObservableChain::matrix() const {
    CMatrix m = pauli_matrix(axes_.front());
    for (std::size_t q = 1; q < axes_.size(); ++q) {
        CMatrix next = Eigen::kroneckerProduct(m, pauli_matrix(axes_[q])).eval();
        m = std::move(next);
    }
    return m;
}

double expectation(const DensityOperator &rho, const ObservableChain &obs) {
    require(rho.num_qubits() == obs.num_qubits(), "observable acts on " + std::to_string(obs.num_qubits()) +
                                                      " qubits but state has " + std::to_string(rho.num_qubits()));
    const ChainAction act = chain_action(obs);
    const CMatrix &m = rho.matrix();
    // tr(O rho) = sum_j phase(j) rho[j, j ^ f]
    Complex total{0.0, 0.0};
    for (std::uint64_t j = 0; j < rho.dimension(); ++j) {
        total += act.phase(j) * m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ act.flip_mask));
    }
    return checked_real(total);
}

double expectation(const StateVector &psi, const ObservableChain &obs) {
    require(psi.num_qubits() == obs.num_qubits(), "observable acts on " + std::to_string(obs.num_qubits()) +
                                                      " qubits but state has " + std::to_string(psi.num_qubits()));
    const ChainAction act = chain_action(obs);
    Complex total{0.0, 0.0};
    for (std::uint64_t j = 0; j < psi.dimension(); ++j) {
        total += std::conj(psi.amplitude(j ^ act.flip_mask)) * act.phase(j) * psi.amplitude(j);
    }
    return checked_real(total);
}

OutcomeRow born_row(const DensityOperator &rho, const LocalObservable &obs_a, const LocalObservable &obs_b) {
    require(rho.num_qubits() == 2, "Born-rule outcome rows need a two-qubit state");
    OutcomeRow row{};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const CMatrix proj = Eigen::kroneckerProduct(obs_a.projector(a), obs_b.projector(b)).eval();
            row[static_cast<std::size_t>(2 * a + b)] = checked_real((proj * rho.matrix()).trace());
        }
    }
    return row;
}

JointDistribution::JointDistribution(std::array<OutcomeRow, 4> rows) : rows_(rows) {
    for (std::size_t xy = 0; xy < 4; ++xy) {
        double sum = 0.0;
        for (double p : rows_[xy]) {
            require(p >= -1e-12, "joint distribution has a negative entry");
            sum += p;
        }
        require(std::abs(sum - 1.0) <= kEqualityTolerance,
                "joint distribution row (" + std::to_string(xy / 2) + "," + std::to_string(xy % 2) +
                    ") sums to " + std::to_string(sum));
    }
}

JointDistribution outcome_distribution(const SourceMap &states, const std::array<LocalObservable, 2> &obs_a,
                                       const std::array<LocalObservable, 2> &obs_b,
                                       const std::optional<OutcomeRow> &fallback_row) {
    std::array<OutcomeRow, 4> rows{};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const auto it = states.find(InputPair{x, y});
            if (it != states.end()) {
                rows[static_cast<std::size_t>(2 * x + y)] = born_row(it->second, obs_a[x], obs_b[y]);
            } else if (fallback_row) {
                rows[static_cast<std::size_t>(2 * x + y)] = *fallback_row;
            } else {
                throw InvalidArgument("no state for input pair (" + std::to_string(x) + "," + std::to_string(y) + ")");
            }
        }
    }
    return JointDistribution(rows);
}

double correlator(const OutcomeRow &row) { return row[0] - row[1] - row[2] + row[3]; }

double correlator(const JointDistribution &dist, int x, int y) {
    require(x >= 0 && x < 2 && y >= 0 && y < 2, "inputs must be 0 or 1");
    return correlator(dist.row(x, y));
}

}  // namespace coherence
