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

#ifndef DIEW_STATE_H
#define DIEW_STATE_H

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace diew {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMinQubits = 1;
inline constexpr int kMaxQubits = 10;

/// Absolute slack for Hermiticity, trace and positivity checks.
inline constexpr double kStateTolerance = 1e-10;

/// Party j (0-based) owns bit (n-1-j) of a basis index, so the bitstring
/// "0011" names basis index 3 and reads left to right as parties 1..n.
constexpr std::size_t qubit_stride(int n, int party) { return std::size_t{1} << (n - 1 - party); }

std::size_t pattern_index(std::string_view pattern);

class PureState {
   public:
    /// Throws std::invalid_argument unless |amps|^2 = 1 within 1e-12.
    PureState(int n, Vector amplitudes);

    int qubits() const { return n_; }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector &amplitudes() const { return amps_; }

   private:
    int n_;
    Vector amps_;
};

/// A 2^n x 2^n Hermitian, unit-trace, positive semidefinite matrix.
/// Construction validates all three properties.
class DensityMatrix {
   public:
    DensityMatrix(int n, Matrix entries);

    static DensityMatrix maximally_mixed(int n);

    int qubits() const { return n_; }
    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const Matrix &entries() const { return rho_; }

    struct Entry {
        std::size_t row, col;
        double re, im;
    };
    /// Debug dump: every entry with magnitude above `cutoff`.
    std::vector<Entry> nonzero_entries(double cutoff = 1e-14) const;

   private:
    int n_;
    Matrix rho_;
};

struct NoiseSpec {
    double white_noise_fraction = 0.0;
    double ghz_dephasing_factor = 0.0;

    void validate() const;
};

/// (|pattern> + e^{i phase} |~pattern>) / sqrt(2).
PureState ghz_state(int n, std::string_view pattern, double phase);

DensityMatrix to_density(const PureState &psi);

/// (1-q) rho + q 1/2^n.
DensityMatrix white_noise_mix(const DensityMatrix &rho, double q);

/// Damps the two coherences <pattern|rho|~pattern> and its conjugate by
/// (1 - lambda); everything else is left untouched.
DensityMatrix ghz_dephasing(const DensityMatrix &rho, double lambda, std::string_view pattern);

/// GHZ state of `pattern` pushed through dephasing then white noise.
DensityMatrix noisy_ghz(std::string_view pattern, double phase, const NoiseSpec &noise);

/// Tr[O rho] for a Hermitian O (checked to 1e-10).
double expectation(const DensityMatrix &rho, const Matrix &op);

/// <psi|rho|psi>
double fidelity(const DensityMatrix &rho, const PureState &psi);

}  // namespace diew

#endif
