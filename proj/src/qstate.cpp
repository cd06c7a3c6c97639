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

#include "coherence/qstate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <numbers>

#include "coherence/error.hpp"

namespace coherence {

namespace {

void check_qubit_count(int num_qubits) {
    require(num_qubits >= 1 && num_qubits <= kMaxQubits,
            "qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " + std::to_string(num_qubits));
}

Eigen::Index dimension_for(int num_qubits) { return Eigen::Index{1} << num_qubits; }

}  // namespace

SourceLabel parse_source_label(std::string_view text) {
    if (text == "01") return SourceLabel::k01;
    if (text == "10") return SourceLabel::k10;
    if (text == "00") return SourceLabel::k00;
    throw InvalidArgument("unknown source label '" + std::string(text) + "' (expected 01, 10 or 00)");
}

std::string to_string(SourceLabel label) {
    switch (label) {
        case SourceLabel::k01:
            return "01";
        case SourceLabel::k10:
            return "10";
        case SourceLabel::k00:
            return "00";
    }
    return "??";
}

StateVector::StateVector(int num_qubits, CVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    check_qubit_count(num_qubits);
    require(amplitudes_.size() == dimension_for(num_qubits),
            "amplitude vector length " + std::to_string(amplitudes_.size()) + " does not match 2^" +
                std::to_string(num_qubits));
    const double norm = amplitudes_.norm();
    require(std::abs(norm - 1.0) <= kNormTolerance, "state vector is not normalized (norm " + std::to_string(norm) + ")");
}

DensityOperator::DensityOperator(int num_qubits, CMatrix matrix) : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
    check_qubit_count(num_qubits);
    const Eigen::Index dim = dimension_for(num_qubits);
    require(matrix_.rows() == dim && matrix_.cols() == dim, "density matrix shape does not match 2^n x 2^n");
    const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    require(asym <= kNormTolerance, "density matrix is not Hermitian (deviation " + std::to_string(asym) + ")");
    const Complex trace = matrix_.trace();
    require(std::abs(trace - Complex(1.0, 0.0)) <= kNormTolerance,
            "density matrix trace is " + std::to_string(trace.real()) + ", expected 1");
    // The hermitian part is used for the spectrum; the residue is below 1e-12.
    const CMatrix herm = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue computation failed while validating density matrix");
    }
    const double min_eig = solver.eigenvalues().minCoeff();
    require(min_eig >= -kPsdSlack, "density matrix is not positive semidefinite (min eigenvalue " +
                                       std::to_string(min_eig) + ")");
}

StateVector basis_state(int num_qubits, std::uint64_t index) {
    check_qubit_count(num_qubits);
    const Eigen::Index dim = dimension_for(num_qubits);
    require(index < static_cast<std::uint64_t>(dim), "basis index out of range");
    CVector amps = CVector::Zero(dim);
    amps(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(num_qubits, std::move(amps));
}

StateVector epr_family(double theta, SourceLabel label) {
    switch (label) {
        case SourceLabel::k01:
            return basis_state(2, 0b01);
        case SourceLabel::k10:
            return basis_state(2, 0b10);
        case SourceLabel::k00: {
            require(theta > 0.0 && theta < std::numbers::pi / 2,
                    "theta must lie in (0, pi/2) for the superposed source, got " + std::to_string(theta));
            CVector amps = CVector::Zero(4);
            amps(0b01) = std::cos(theta);
            amps(0b10) = std::sin(theta);
            return StateVector(2, std::move(amps));
        }
    }
    throw InvalidArgument("unknown source label");
}

StateVector ghz_state(int num_qubits) {
    require(num_qubits >= 2, "GHZ state needs at least 2 qubits");
    check_qubit_count(num_qubits);
    const Eigen::Index dim = dimension_for(num_qubits);
    CVector amps = CVector::Zero(dim);
    amps(0) = std::numbers::sqrt2 / 2;
    amps(dim - 1) = std::numbers::sqrt2 / 2;
    return StateVector(num_qubits, std::move(amps));
}

StateVector dicke_one_excitation(int num_qubits) {
    require(num_qubits >= 2, "Dicke state needs at least 2 qubits");
    check_qubit_count(num_qubits);
    CVector amps = CVector::Zero(dimension_for(num_qubits));
    const double a = 1.0 / std::sqrt(static_cast<double>(num_qubits));
    for (int q = 0; q < num_qubits; ++q) {
        amps(Eigen::Index{1} << q) = a;
    }
    return StateVector(num_qubits, std::move(amps));
}

DensityOperator density_from_state(const StateVector &psi) {
    const CVector &v = psi.amplitudes();
    return DensityOperator(psi.num_qubits(), v * v.adjoint());
}

DensityOperator werner_mix(const StateVector &psi, double visibility) {
    return werner_mix(density_from_state(psi), visibility);
}

DensityOperator werner_mix(const DensityOperator &rho, double visibility) {
    require(visibility >= 0.0 && visibility <= 1.0, "Werner visibility must lie in [0, 1]");
    if (visibility == 1.0) {
        return rho;
    }
    const auto dim = static_cast<Eigen::Index>(rho.dimension());
    CMatrix mixed = visibility * rho.matrix();
    mixed.diagonal().array() += (1.0 - visibility) / static_cast<double>(dim);
    return DensityOperator(rho.num_qubits(), std::move(mixed));
}

namespace {

// Eigenvalues this small are rounding noise of the decomposition.
double rounding_floor(const Eigen::VectorXd &eig) {
    const double scale = std::max(1.0, eig.cwiseAbs().maxCoeff());
    return 64.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(eig.size());
}

}  // namespace

CMatrix psd_sqrt(const CMatrix &hermitian, double *clipped_mass) {
    const CMatrix herm = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed in matrix square root");
    }
    Eigen::VectorXd eig = solver.eigenvalues();
    const double floor = rounding_floor(eig);
    double clipped = 0.0;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        if (eig(i) < 0.0) {
            clipped -= eig(i);
            eig(i) = 0.0;
        } else if (eig(i) < floor) {
            eig(i) = 0.0;
        }
    }
    if (clipped_mass != nullptr) {
        *clipped_mass = clipped;
    }
    const CMatrix &vecs = solver.eigenvectors();
    const CMatrix root = vecs * eig.cwiseSqrt().asDiagonal() * vecs.adjoint();
    const CMatrix target = vecs * eig.asDiagonal() * vecs.adjoint();
    const double residual = (root * root - target).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
    if (residual > kEqualityTolerance * scale) {
        throw NumericalError("matrix square root residual " + std::to_string(residual) + " exceeds 1e-10");
    }
    return root;
}

double fidelity(const DensityOperator &rho, const DensityOperator &rho0) {
    require(rho.dimension() == rho0.dimension(), "fidelity needs operators of equal dimension");
    const CMatrix root = psd_sqrt(rho.matrix());
    const CMatrix inner = root * rho0.matrix() * root;
    const CMatrix herm = 0.5 * (inner + inner.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed in fidelity");
    }
    const double floor = rounding_floor(solver.eigenvalues());
    double f = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        if (solver.eigenvalues()(i) > floor) f += std::sqrt(solver.eigenvalues()(i));
    }
    return std::clamp(f, 0.0, 1.0);
}

double visibility_for_fidelity(double fidelity) {
    require(fidelity >= 0.5 && fidelity <= 1.0, "two-qubit Werner fidelity must lie in [1/2, 1]");
    return (4.0 * fidelity * fidelity - 1.0) / 3.0;
}

}  // namespace coherence
