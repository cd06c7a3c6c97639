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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace coherence {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Dense representation limit; 2^10 amplitudes.
inline constexpr int kMaxQubits = 10;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kEqualityTolerance = 1e-10;
inline constexpr double kPsdSlack = 1e-10;

/// Which of the three prepared sources a two-qubit state belongs to.
///
/// Qubit 0 is the leftmost tensor factor (party A, path-I) and basis
/// indices are big-endian bit strings, so |01> is index 1.
enum class SourceLabel { k01, k10, k00 };

SourceLabel parse_source_label(std::string_view text);
std::string to_string(SourceLabel label);

/// Normalized pure state on num_qubits qubits.
class StateVector {
   public:
    /// Validates length 2^n and unit norm (within 1e-12).
    StateVector(int num_qubits, CVector amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
    const CVector &amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

   private:
    int num_qubits_;
    CVector amplitudes_;
};

/// Hermitian, trace-one, positive semidefinite operator.
class DensityOperator {
   public:
    /// Validates hermiticity (1e-12 entrywise), unit trace (1e-12) and a
    /// minimum eigenvalue of at least -1e-10.
    DensityOperator(int num_qubits, CMatrix matrix);

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
    const CMatrix &matrix() const { return matrix_; }

   private:
    int num_qubits_;
    CMatrix matrix_;
};

StateVector basis_state(int num_qubits, std::uint64_t index);

/// |01> for k01, |10> for k10 and cos(theta)|01> + sin(theta)|10> for k00.
/// theta must lie in (0, pi/2) for k00 and is ignored otherwise.
StateVector epr_family(double theta, SourceLabel label);

/// (|0...0> + |1...1>)/sqrt(2).
StateVector ghz_state(int num_qubits);

/// Uniform superposition of the n weight-one basis states.
StateVector dicke_one_excitation(int num_qubits);

DensityOperator density_from_state(const StateVector &psi);

/// v|psi><psi| + (1-v) I / 2^n.
DensityOperator werner_mix(const StateVector &psi, double visibility);
/// v rho + (1-v) I / 2^n.
DensityOperator werner_mix(const DensityOperator &rho, double visibility);

/// Principal square root of a Hermitian PSD matrix. Negative eigenvalues are
/// clipped to zero; their total magnitude is written to clipped_mass when
/// non-null. Throws NumericalError if S*S misses the clipped matrix by more
/// than 1e-10.
CMatrix psd_sqrt(const CMatrix &hermitian, double *clipped_mass = nullptr);

/// Uhlmann fidelity tr sqrt(sqrt(rho) rho0 sqrt(rho)), clamped to [0, 1].
double fidelity(const DensityOperator &rho, const DensityOperator &rho0);

/// Fidelity of a Werner mixture against its own pure component.
inline double werner_fidelity(double visibility, int num_qubits) {
    const double dim = static_cast<double>(std::uint64_t{1} << num_qubits);
    return std::sqrt(visibility + (1.0 - visibility) / dim);
}

/// Inverse of werner_fidelity for two qubits: v = (4F^2 - 1)/3.
double visibility_for_fidelity(double fidelity);

}  // namespace coherence
