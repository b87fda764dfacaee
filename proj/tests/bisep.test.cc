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

#include "diew/bisep.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "diew/witness.h"

namespace diew {
namespace {

constexpr double kPi = std::numbers::pi;

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix bloch(double psi, double theta) {
    Matrix o(2, 2);
    o << std::cos(theta), std::sin(theta) * std::polar(1.0, -psi), std::sin(theta) * std::polar(1.0, psi),
        -std::cos(theta);
    return o;
}

Matrix dense_oracle(const SettingsTable &s, const CrosstalkMatrix &c) {
    const auto d = static_cast<Eigen::Index>(1) << s.n;
    Matrix w = Matrix::Zero(d, d);
    for (const auto &t : witness_terms(s.n, s.m)) {
        const auto psi = effective_z_angles(t.s, s, c);
        Matrix op = Matrix::Identity(1, 1);
        for (double a : psi) {
            op = kron(op, bloch(a, s.theta));
        }
        w += t.sign * op;
    }
    return w;
}

Vector random_unit(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = cplx(g(rng), g(rng));
    }
    return v / v.norm();
}

ProductState random_product(const Bipartition &cut, std::mt19937_64 &rng) {
    ProductState p;
    p.cut = cut;
    p.a = random_unit(std::size_t{1} << cut.block_a.size(), rng);
    p.b = random_unit(std::size_t{1} << cut.block_b.size(), rng);
    return p;
}

SettingsTable random_settings(int n, int m, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    SettingsTable s = symmetric_settings(n, m);
    for (auto &row : s.phi) {
        for (double &a : row) {
            a = angle(rng);
        }
    }
    s.theta = angle(rng);
    return s;
}

TEST(Bisep, BipartitionsCoverEveryCutOnce) {
    for (int n = 2; n <= 6; ++n) {
        const auto cuts = enumerate_bipartitions(n);
        EXPECT_EQ(cuts.size(), (std::size_t{1} << (n - 1)) - 1);
        std::set<std::uint32_t> seen;
        const std::uint32_t full = (1U << n) - 1;
        for (const auto &c : cuts) {
            EXPECT_FALSE(c.block_a.empty());
            EXPECT_FALSE(c.block_b.empty());
            EXPECT_EQ(c.block_a.size() + c.block_b.size(), static_cast<std::size_t>(n));
            EXPECT_FALSE(seen.count(c.mask()) || seen.count(full ^ c.mask()));
            seen.insert(c.mask());
        }
    }
    EXPECT_EQ(enumerate_bipartitions(3)[1].label(), "1,2|3");
    EXPECT_EQ(enumerate_bipartitions(3)[2].label(), "1,3|2");
}

TEST(Bisep, OperatorMatchesKroneckerOracle) {
    std::mt19937_64 rng(11);
    SettingsTable s = random_settings(4, 3, rng);
    CrosstalkMatrix c = CrosstalkMatrix::identity(4);
    c.epsilon = 0.05;
    c.C(0, 1) = 0.03;
    c.C(3, 2) = -0.05;
    c.C(1, 3) = 0.02;
    const WitnessOperator w(s, c);
    EXPECT_LT((w.matrix() - dense_oracle(s, c)).norm(), 1e-11);
    const Vector psi = random_unit(16, rng);
    const double direct = (psi.adjoint() * dense_oracle(s, c) * psi)(0).real();
    EXPECT_NEAR(w.expectation(psi), direct, 1e-11);
    EXPECT_NEAR(witness_expectation(psi, s, c, witness_terms(4, 3)), direct, 1e-11);
    EXPECT_NEAR(diew_value(simulate_table(PureState(4, psi), s, c)), direct, 1e-11);
}

TEST(Bisep, TopEigenvalueIsQuantumMaximum) {
    EXPECT_NEAR(WitnessOperator(symmetric_settings(3, 2), CrosstalkMatrix::identity(3)).largest_eigenvalue(),
                max_quantum(3, 2), 1e-10);
    EXPECT_NEAR(WitnessOperator(df_settings(4, 3), CrosstalkMatrix::identity(4)).largest_eigenvalue(),
                max_quantum(4, 3), 1e-9);
}

TEST(Bisep, ProductStateLayout) {
    std::mt19937_64 rng(5);
    const Bipartition cut{{0, 2}, {1}};
    const ProductState p = random_product(cut, rng);
    const Vector full = p.full();
    // |a>_{parties 1,3} |b>_{party 2}: party order is 1,2,3 with party 1 the MSB.
    for (int x = 0; x < 8; ++x) {
        const int p1 = (x >> 2) & 1, p2 = (x >> 1) & 1, p3 = x & 1;
        EXPECT_NEAR(std::abs(full(x) - p.a(2 * p1 + p3) * p.b(p2)), 0, 1e-15);
    }
}

TEST(Bisep, RandomBiseparableStatesNeverExceedBound) {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (auto [n, m] : {std::pair{3, 2}, {3, 3}, {4, 2}, {4, 3}}) {
        const auto cuts = enumerate_bipartitions(n);
        for (int trial = 0; trial < 250; ++trial) {
            const SettingsTable s = trial % 2 ? random_settings(n, m, rng) : symmetric_settings(n, m);
            const ProductState p = random_product(cuts[rng() % cuts.size()], rng);
            const double I = witness_expectation(p.full(), s, CrosstalkMatrix::identity(n), witness_terms(n, m));
            EXPECT_LE(I, bisep_bound(n, m) + 1e-8);
            ++checked;
        }
    }
    EXPECT_EQ(checked, 1000);
}

TEST(Bisep, SeesawMatchesBlochGridOnSingleQubitCut) {
    // Block A is one qubit: the optimum is max over its Bloch sphere of the
    // top eigenvalue of the contracted operator on block B.
    const SettingsTable s = symmetric_settings(3, 2);
    const WitnessOperator w(s, CrosstalkMatrix::identity(3));
    const Bipartition cut{{0}, {1, 2}};
    double grid_best = -1e300;
    const int steps = 120;
    for (int i = 0; i <= steps; ++i) {
        const double t = kPi * i / steps;
        for (int j = 0; j < 2 * steps; ++j) {
            const double f = kPi * j / steps;
            Vector a(2);
            a << std::cos(t / 2), std::polar(std::sin(t / 2), f);
            Matrix wb = Matrix::Zero(4, 4);
            for (int x = 0; x < 2; ++x) {
                for (int y = 0; y < 2; ++y) {
                    wb += std::conj(a(x)) * a(y) * w.matrix().block(4 * x, 4 * y, 4, 4);
                }
            }
            Eigen::SelfAdjointEigenSolver<Matrix> es(wb);
            grid_best = std::max(grid_best, es.eigenvalues()(3));
        }
    }
    OptimizerConfig cfg;
    cfg.restarts = 10;
    const SeesawResult r = seesaw_max_product(w, cut, cfg);
    EXPECT_TRUE(r.converged);
    EXPECT_GE(r.value, grid_best - 1e-9);
    EXPECT_LE(r.value, grid_best + 1e-3);
    EXPECT_NEAR(w.expectation(r.state.full()), r.value, 1e-10);
}

TEST(Bisep, SeesawHistoryIsMonotone) {
    const WitnessOperator w(df_settings(4, 3), CrosstalkMatrix::identity(4));
    std::mt19937_64 rng(8);
    const Bipartition cut{{0, 2}, {1, 3}};
    const SeesawResult r = seesaw_from(w, cut, random_unit(4, rng), 200, 1e-12);
    for (std::size_t i = 1; i < r.history.size(); ++i) {
        EXPECT_GE(r.history[i], r.history[i - 1] - 1e-12);
    }
    EXPECT_LE(r.value, bisep_bound(4, 3) + 1e-9);
    EXPECT_THROW(seesaw_from(w, cut, random_unit(8, rng), 10, 1e-12), std::invalid_argument);
}

TEST(Bisep, FixedSettingsOptimumWithoutCrosstalk) {
    // With the nominal settings and no angle freedom the best product state
    // reaches half the quantum maximum here, below B.
    OptimizerConfig cfg;
    const BiseparableOptimum o = maximize_biseparable(symmetric_settings(3, 2), 0.0, cfg);
    EXPECT_NEAR(o.value, 2 * std::sqrt(2.0), 1e-8);
    EXPECT_NEAR(o.certified_value, o.value, 1e-10);
}

TEST(Bisep, AngleSearchRecoversBound) {
    OptimizerConfig cfg;
    cfg.angle_search = true;
    for (auto [n, m] : {std::pair{3, 2}, {3, 3}}) {
        const BiseparableOptimum o = maximize_biseparable(symmetric_settings(n, m), 0.0, cfg);
        EXPECT_NEAR(o.value, bisep_bound(n, m), 1e-6);
        EXPECT_LE(o.value, bisep_bound(n, m) + 1e-8);
    }
}

TEST(Bisep, CrosstalkBoundProperties) {
    OptimizerConfig cfg;
    const SettingsTable s = symmetric_settings(3, 2);
    const BoundResult r = optimize_crosstalk_bound(3, 2, s, 0.016, cfg);
    EXPECT_TRUE(r.converged());
    EXPECT_GE(r.delta_CT, 0.0);
    EXPECT_NEAR(r.B_CT, r.B + r.delta_CT, 1e-12);
    EXPECT_NEAR(r.delta_CT, r.I_bisep_eps - r.I_bisep_zero, 1e-12);
    EXPECT_NEAR(r.eps_argmax.certified_value, r.I_bisep_eps, 1e-10);
    const auto &c = r.eps_argmax.crosstalk;
    for (int j = 0; j < 3; ++j) {
        EXPECT_EQ(c.C(j, j), 1.0);
        for (int k = 0; k < 3; ++k) {
            EXPECT_LE(std::abs(c.C(j, k)) * (j != k), 0.016 + 1e-15);
            if (std::abs(j - k) > 1) {
                EXPECT_EQ(c.C(j, k), 0.0);  // nearest-neighbour support
            }
        }
    }
    EXPECT_EQ(r.eps_argmax.settings.phi, s.phi);
    const BoundResult zero = optimize_crosstalk_bound(3, 2, s, 0.0, cfg);
    EXPECT_EQ(zero.B_CT, zero.B);
    EXPECT_EQ(zero.delta_CT, 0.0);
}

TEST(Bisep, AllPairsSupportDominatesNearestNeighbour) {
    OptimizerConfig nn, all;
    all.support = CrosstalkSupport::all_pairs;
    const SettingsTable s = symmetric_settings(3, 2);
    const double a = optimize_crosstalk_bound(3, 2, s, 0.016, nn).B_CT;
    const double b = optimize_crosstalk_bound(3, 2, s, 0.016, all).B_CT;
    EXPECT_GE(b, a - 1e-9);
}

TEST(Bisep, ScanIsMonotone) {
    OptimizerConfig cfg;
    const auto scan = crosstalk_bound_scan(3, 3, symmetric_settings(3, 3), {0.0, 0.005, 0.01, 0.016, 0.03}, cfg);
    ASSERT_EQ(scan.size(), 5u);
    EXPECT_EQ(scan[0].delta_CT, 0.0);
    for (std::size_t i = 1; i < scan.size(); ++i) {
        EXPECT_GE(scan[i].delta_CT, scan[i - 1].delta_CT);
    }
    EXPECT_THROW(crosstalk_bound_scan(3, 3, symmetric_settings(3, 3), {0.02, 0.01}, cfg), std::invalid_argument);
}

TEST(Bisep, DeterministicAcrossThreadCounts) {
    OptimizerConfig one, two;
    one.threads = 1;
    two.threads = 2;
    const SettingsTable s = symmetric_settings(3, 2);
    const BoundResult a = optimize_crosstalk_bound(3, 2, s, 0.016, one);
    const BoundResult b = optimize_crosstalk_bound(3, 2, s, 0.016, two);
    EXPECT_EQ(a.B_CT, b.B_CT);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    OptimizerConfig other = one;
    other.rng_seed = 99;
    EXPECT_NEAR(optimize_crosstalk_bound(3, 2, s, 0.016, other).B_CT, a.B_CT, 1e-6);
}

TEST(Bisep, ConfigJson) {
    OptimizerConfig cfg;
    cfg.restarts = 7;
    cfg.support = CrosstalkSupport::all_pairs;
    cfg.angle_search = true;
    const OptimizerConfig back = optimizer_config_from_json(to_json(cfg));
    EXPECT_EQ(back.restarts, 7);
    EXPECT_EQ(back.support, CrosstalkSupport::all_pairs);
    EXPECT_TRUE(back.angle_search);
    EXPECT_THROW(optimizer_config_from_json({{"restarts", 0}}), std::invalid_argument);
    EXPECT_THROW(optimizer_config_from_json({{"support", "ring"}}), std::invalid_argument);
}

}  // namespace
}  // namespace diew
