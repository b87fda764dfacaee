// Copyright 2026 The DIEW Toolkit Authors
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

#include "diew/state.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "diew/kernels.h"

namespace diew {
namespace {

void check_qubits(int n) {
    if (n < kMinQubits || n > kMaxQubits) {
        throw std::invalid_argument("qubit count out of range [1, 10]: " + std::to_string(n));
    }
}

std::size_t dim_of(int n) { return std::size_t{1} << n; }

void check_pattern(int n, std::string_view pattern) {
    if (pattern.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("pattern length " + std::to_string(pattern.size()) + " does not match n=" +
                                    std::to_string(n));
    }
}

}  // namespace

std::size_t pattern_index(std::string_view pattern) {
    std::size_t index = 0;
    for (char c : pattern) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("pattern must be a bitstring: " + std::string(pattern));
        }
        index = (index << 1) | static_cast<std::size_t>(c == '1');
    }
    return index;
}

PureState::PureState(int n, Vector amplitudes) : n_(n), amps_(std::move(amplitudes)) {
    check_qubits(n);
    if (static_cast<std::size_t>(amps_.size()) != dim_of(n)) {
        throw std::invalid_argument("amplitude vector length must be 2^n");
    }
    if (std::abs(amps_.squaredNorm() - 1.0) > 1e-12) {
        throw std::invalid_argument("pure state is not normalized");
    }
}

DensityMatrix::DensityMatrix(int n, Matrix entries) : n_(n), rho_(std::move(entries)) {
    check_qubits(n);
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    if (rho_.rows() != d || rho_.cols() != d) {
        throw std::invalid_argument("density matrix must be 2^n x 2^n");
    }
    if (!rho_.allFinite()) {
        throw std::invalid_argument("density matrix has non-finite entries");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    const cplx tr = rho_.trace();
    if (std::abs(tr.real() - 1.0) > kStateTolerance || std::abs(tr.imag()) > kStateTolerance) {
        throw std::invalid_argument("density matrix trace is not 1");
    }
    // rho + tol*1 admits a Cholesky factor iff its smallest eigenvalue is above -tol.
    Matrix shifted = 0.5 * (rho_ + rho_.adjoint());
    shifted.diagonal().array() += kStateTolerance;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("density matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    check_qubits(n);
    const auto d = static_cast<Eigen::Index>(dim_of(n));
    return DensityMatrix(n, Matrix::Identity(d, d) / static_cast<double>(d));
}

std::vector<DensityMatrix::Entry> DensityMatrix::nonzero_entries(double cutoff) const {
    std::vector<Entry> out;
    for (Eigen::Index c = 0; c < rho_.cols(); ++c) {
        for (Eigen::Index r = 0; r < rho_.rows(); ++r) {
            const cplx v = rho_(r, c);
            if (std::abs(v) > cutoff) {
                out.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), v.real(), v.imag()});
            }
        }
    }
    return out;
}

void NoiseSpec::validate() const {
    if (!(white_noise_fraction >= 0.0 && white_noise_fraction <= 1.0)) {
        throw std::invalid_argument("white noise fraction must lie in [0, 1]");
    }
    if (!(ghz_dephasing_factor >= 0.0 && ghz_dephasing_factor <= 1.0)) {
        throw std::invalid_argument("GHZ dephasing factor must lie in [0, 1]");
    }
}

PureState ghz_state(int n, std::string_view pattern, double phase) {
    check_qubits(n);
    check_pattern(n, pattern);
    const std::size_t idx = pattern_index(pattern);
    const std::size_t complement = (dim_of(n) - 1) ^ idx;
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(dim_of(n)));
    const double h = 1.0 / std::sqrt(2.0);
    amps[static_cast<Eigen::Index>(idx)] += h;
    amps[static_cast<Eigen::Index>(complement)] += h * std::polar(1.0, phase);
    return PureState(n, std::move(amps));
}

DensityMatrix to_density(const PureState &psi) {
    return DensityMatrix(psi.qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix white_noise_mix(const DensityMatrix &rho, double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("white noise fraction must lie in [0, 1]");
    }
    Matrix out = (1.0 - q) * rho.entries();
    out.diagonal().array() += q / static_cast<double>(rho.dim());
    return DensityMatrix(rho.qubits(), std::move(out));
}

DensityMatrix ghz_dephasing(const DensityMatrix &rho, double lambda, std::string_view pattern) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("GHZ dephasing factor must lie in [0, 1]");
    }
    check_pattern(rho.qubits(), pattern);
    const auto a = static_cast<Eigen::Index>(pattern_index(pattern));
    const auto b = static_cast<Eigen::Index>((rho.dim() - 1) ^ static_cast<std::size_t>(a));
    Matrix out = rho.entries();
    out(a, b) *= (1.0 - lambda);
    out(b, a) *= (1.0 - lambda);
    return DensityMatrix(rho.qubits(), std::move(out));
}

DensityMatrix noisy_ghz(std::string_view pattern, double phase, const NoiseSpec &noise) {
    noise.validate();
    const int n = static_cast<int>(pattern.size());
    DensityMatrix rho = to_density(ghz_state(n, pattern, phase));
    if (noise.ghz_dephasing_factor > 0) {
        rho = ghz_dephasing(rho, noise.ghz_dephasing_factor, pattern);
    }
    if (noise.white_noise_fraction > 0) {
        rho = white_noise_mix(rho, noise.white_noise_fraction);
    }
    return rho;
}

double expectation(const DensityMatrix &rho, const Matrix &op) {
    if (static_cast<std::size_t>(op.rows()) != rho.dim() || static_cast<std::size_t>(op.cols()) != rho.dim()) {
        throw std::invalid_argument("operator dimension does not match the state");
    }
    if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("operator is not Hermitian");
    }
    // Tr[O rho] = sum_ij O_ij rho_ji = sum_ij conj(O^dag_ji) rho_ji: one flat dot product.
    const Matrix op_adj = op.adjoint();
    const std::size_t len = rho.dim() * rho.dim();
    return kernels::dot({op_adj.data(), len}, {rho.entries().data(), len}).real();
}

double fidelity(const DensityMatrix &rho, const PureState &psi) {
    if (psi.dim() != rho.dim()) {
        throw std::invalid_argument("state dimension does not match");
    }
    const Vector r = rho.entries() * psi.amplitudes();
    const double f = kernels::dot({psi.amplitudes().data(), psi.dim()}, {r.data(), psi.dim()}).real();
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace diew
