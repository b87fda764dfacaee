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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace diew {
namespace {

Matrix pauli_z_string(int n) {
    // Z on every qubit: diagonal (-1)^popcount(x)
    const auto d = static_cast<Eigen::Index>(1) << n;
    Matrix z = Matrix::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        z(x, x) = (__builtin_popcountll(static_cast<unsigned long long>(x)) % 2) ? -1.0 : 1.0;
    }
    return z;
}

TEST(State, PatternIndexIsMsbFirst) {
    EXPECT_EQ(pattern_index("0011"), 3u);
    EXPECT_EQ(pattern_index("1000"), 8u);
    EXPECT_EQ(qubit_stride(4, 0), 8u);
    EXPECT_EQ(qubit_stride(4, 3), 1u);
    EXPECT_THROW(pattern_index("0a1"), std::invalid_argument);
}

TEST(State, GhzAmplitudes) {
    const PureState g = ghz_state(4, "0011", std::numbers::pi / 3);
    const auto &a = g.amplitudes();
    EXPECT_NEAR(std::abs(a(3) - cplx(1 / std::sqrt(2.0))), 0, 1e-15);
    EXPECT_NEAR(std::abs(a(12) - std::polar(1 / std::sqrt(2.0), std::numbers::pi / 3)), 0, 1e-15);
    double rest = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (i != 3 && i != 12) {
            rest += std::norm(a(i));
        }
    }
    EXPECT_EQ(rest, 0.0);
}

TEST(State, PureStateRejectsUnnormalized) {
    Vector v = Vector::Zero(4);
    v(0) = 1.0;
    v(1) = 1e-5;
    EXPECT_THROW(PureState(2, v), std::invalid_argument);
    EXPECT_THROW(PureState(3, Vector::Zero(4)), std::invalid_argument);
}

TEST(State, DensityValidation) {
    Matrix m = Matrix::Identity(2, 2) * 0.5;
    EXPECT_NO_THROW(DensityMatrix(1, m));
    Matrix not_hermitian = m;
    not_hermitian(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix(1, not_hermitian), std::invalid_argument);
    Matrix bad_trace = m * 1.1;
    EXPECT_THROW(DensityMatrix(1, bad_trace), std::invalid_argument);
    Matrix negative = Matrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(1, negative), std::invalid_argument);
}

TEST(State, WhiteNoiseFidelity) {
    const PureState g = ghz_state(3, "000", 0);
    for (double q : {0.0, 0.16, 0.5, 1.0}) {
        const DensityMatrix rho = white_noise_mix(to_density(g), q);
        EXPECT_NEAR(fidelity(rho, g), (1 - q) + q / 8, 1e-14);
        EXPECT_NEAR(rho.entries().trace().real(), 1.0, 1e-14);
    }
    EXPECT_THROW(white_noise_mix(to_density(g), 1.2), std::invalid_argument);
}

TEST(State, DephasingOnlyTouchesCoherences) {
    const PureState g = ghz_state(3, "010", 0.4);
    const DensityMatrix rho = ghz_dephasing(to_density(g), 0.3, "010");
    EXPECT_NEAR(fidelity(rho, g), 1 - 0.3 / 2, 1e-14);
    const Matrix diff = rho.entries() - to_density(g).entries();
    EXPECT_EQ(diff(2, 2), cplx(0));
    EXPECT_NEAR(std::abs(diff(2, 5) + 0.3 * to_density(g).entries()(2, 5)), 0, 1e-15);
    EXPECT_EQ(rho.nonzero_entries().size(), 4u);
}

TEST(State, NoisyGhzComposesChannels) {
    const NoiseSpec noise{0.2, 0.5};
    const DensityMatrix rho = noisy_ghz("0000", 0, noise);
    const PureState g = ghz_state(4, "0000", 0);
    // dephasing keeps populations, halves coherence; then white noise
    EXPECT_NEAR(fidelity(rho, g), 0.8 * (1 - 0.25) + 0.2 / 16, 1e-14);
    EXPECT_THROW(noisy_ghz("0000", 0, {-0.1, 0}), std::invalid_argument);
}

TEST(State, ExpectationOfParity) {
    // GHZ populations sit on |000> and |111>, parity +1 and -1.
    const DensityMatrix rho = to_density(ghz_state(3, "000", 0));
    EXPECT_NEAR(expectation(rho, pauli_z_string(3)), 0.0, 1e-15);
    const DensityMatrix rho4 = to_density(ghz_state(4, "0000", 0));
    EXPECT_NEAR(expectation(rho4, pauli_z_string(4)), 1.0, 1e-15);
    Matrix not_hermitian = Matrix::Zero(8, 8);
    not_hermitian(0, 1) = 1.0;
    EXPECT_THROW(expectation(rho, not_hermitian), std::invalid_argument);
}

TEST(State, MaximallyMixed) {
    const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
    EXPECT_NEAR(fidelity(rho, ghz_state(2, "01", 0)), 0.25, 1e-15);
}

}  // namespace
}  // namespace diew
