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

#include "diew/witness.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "diew/state.h"

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

// Oracle: every one of the m^n setting vectors, weight from the integer
// parts of S/m, correlator as Tr[rho (x)_j O_j].
double brute_force_witness(const Matrix &rho, const SettingsTable &s) {
    const int n = s.n, m = s.m;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    double total = 0;
    while (true) {
        int sum = 0;
        for (int v : idx) {
            sum += v;
        }
        int weight = 0;
        if (sum % m == 0) {
            weight = ((sum / m) % 2) ? -1 : 1;
        } else if (sum % m == 1) {
            weight = (((sum - 1) / m) % 2) ? -1 : 1;
        }
        if (weight != 0) {
            Matrix op = Matrix::Identity(1, 1);
            for (int j = 0; j < n; ++j) {
                op = kron(op, bloch(s.phi[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])], s.theta));
            }
            total += weight * (op * rho).trace().real();
        }
        int j = n - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == m) {
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) {
            break;
        }
    }
    return total;
}

DensityMatrix random_density(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const auto d = static_cast<Eigen::Index>(1) << n;
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(n, rho);
}

SettingsTable saturating_settings(int n, int m) { return n == 3 ? symmetric_settings(n, m) : df_settings(n, m); }

std::string saturating_pattern(int n) {
    return n == 3 ? "000" : std::string(static_cast<std::size_t>(n / 2), '0') + std::string(static_cast<std::size_t>(n / 2), '1');
}

TEST(Witness, Signs) {
    EXPECT_EQ(witness_sign({{0, 0, 0}}, 2), 1);
    EXPECT_EQ(witness_sign({{1, 0, 0}}, 2), 1);
    EXPECT_EQ(witness_sign({{1, 1, 0}}, 2), -1);
    EXPECT_EQ(witness_sign({{1, 1, 1}}, 2), -1);
    EXPECT_EQ(witness_sign({{2, 0, 0}}, 3), 0);
    EXPECT_EQ(witness_sign({{2, 1, 0}}, 3), -1);
    EXPECT_EQ(witness_sign({{2, 2, 0}}, 3), -1);
    EXPECT_EQ(witness_sign({{2, 2, 2}}, 3), 1);
}

TEST(Witness, TermSetShape) {
    for (int n = 2; n <= 6; ++n) {
        for (int m = 2; m <= 4; ++m) {
            const auto terms = witness_terms(n, m);
            ASSERT_EQ(terms.size(), 2 * static_cast<std::size_t>(std::pow(m, n - 1)));
            EXPECT_EQ(witness_term_count(n, m), terms.size());
            std::set<SettingVector> seen;
            for (const auto &t : terms) {
                EXPECT_TRUE(t.s.total() % m == 0 || t.s.total() % m == 1);
                EXPECT_EQ(t.sign, witness_sign(t.s, m));
                seen.insert(t.s);
            }
            EXPECT_EQ(seen.size(), terms.size());
            EXPECT_TRUE(std::is_sorted(terms.begin(), terms.end(),
                                        [](const auto &a, const auto &b) { return a.s < b.s; }));
        }
    }
}

TEST(Witness, ClosedForms) {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    EXPECT_NEAR(bisep_bound(2, 2), 2.0, 1e-14);
    EXPECT_NEAR(bisep_bound(3, 3), 6 * r3, 1e-12);
    EXPECT_NEAR(max_quantum(6, 3), 243 * r3, 1e-10);
    EXPECT_NEAR(max_quantum(4, 2), 8 * r2, 1e-12);
    EXPECT_THROW(bisep_bound(1, 2), std::invalid_argument);
    EXPECT_THROW(max_quantum(3, 1), std::invalid_argument);
}

TEST(Witness, MatchesBruteForceOracle) {
    for (auto [n, m] : {std::pair{2, 2}, {3, 2}, {3, 3}, {4, 3}}) {
        SettingsTable s = symmetric_settings(n, m);
        s.theta = 1.2;
        const DensityMatrix rho = random_density(n, 10 * n + m);
        const double got = diew_value(simulate_table(rho, s, CrosstalkMatrix::identity(n)));
        EXPECT_NEAR(got, brute_force_witness(rho.entries(), s), 1e-11) << n << "," << m;
    }
}

TEST(Witness, GhzSaturatesQuantumMaximum) {
    for (auto [n, m] : {std::pair{3, 2}, {3, 3}, {4, 2}, {4, 3}, {6, 2}, {6, 3}}) {
        const SettingsTable s = saturating_settings(n, m);
        const double phase = optimal_ghz_phase(saturating_pattern(n), s);
        const PureState g = ghz_state(n, saturating_pattern(n), phase);
        const double I = diew_value(simulate_table(g, s, CrosstalkMatrix::identity(n)));
        EXPECT_NEAR(I, max_quantum(n, m), 1e-9) << n << "," << m;
    }
}

TEST(Witness, CalibratedPhase) {
    // Symmetric settings are built for the phase-0 GHZ state.
    EXPECT_NEAR(optimal_ghz_phase("000", symmetric_settings(3, 2)), 0.0, 1e-12);
    EXPECT_NEAR(optimal_ghz_phase("000", symmetric_settings(3, 3)), 0.0, 1e-12);
    // Oracle: scan the phase directly.
    const SettingsTable s = df_settings(4, 2);
    double best = -1e300, best_phase = 0;
    for (int i = 0; i < 3600; ++i) {
        const double chi = -kPi + 2 * kPi * i / 3600;
        const double I = diew_value(simulate_table(ghz_state(4, "0011", chi), s, CrosstalkMatrix::identity(4)));
        if (I > best) {
            best = I;
            best_phase = chi;
        }
    }
    const double chi = optimal_ghz_phase("0011", s);
    EXPECT_NEAR(std::remainder(chi - best_phase, 2 * kPi), 0.0, 2 * kPi / 3600);
    EXPECT_THROW(optimal_ghz_phase("00", s), std::invalid_argument);
}

TEST(Witness, WhiteNoiseScalesLinearly) {
    const SettingsTable s = symmetric_settings(3, 2);
    const CrosstalkMatrix id = CrosstalkMatrix::identity(3);
    const DensityMatrix ghz = to_density(ghz_state(3, "000", 0));
    EXPECT_NEAR(diew_value(simulate_table(white_noise_mix(ghz, 1.0), s, id)), 0.0, 1e-12);
    for (double q : {0.1, 0.16, 0.5}) {
        EXPECT_NEAR(diew_value(simulate_table(white_noise_mix(ghz, q), s, id)), (1 - q) * max_quantum(3, 2), 1e-12);
    }
}

TEST(Witness, LinearInState) {
    const SettingsTable s = symmetric_settings(3, 3);
    const CrosstalkMatrix id = CrosstalkMatrix::identity(3);
    const DensityMatrix a = random_density(3, 1), b = random_density(3, 2);
    const DensityMatrix mix(3, 0.3 * a.entries() + 0.7 * b.entries());
    const double ia = diew_value(simulate_table(a, s, id));
    const double ib = diew_value(simulate_table(b, s, id));
    EXPECT_NEAR(diew_value(simulate_table(mix, s, id)), 0.3 * ia + 0.7 * ib, 1e-12);
}

TEST(Witness, TableRejectsForeignSettingsAndGaps) {
    CorrelationTable t(3, 3);
    OutcomeDistribution d{{{2, 0, 0}}, std::vector<double>(8, 0.125)};
    EXPECT_THROW(t.set(d), std::invalid_argument);
    d.s = {{1, 0, 0}};
    t.set(d);
    EXPECT_FALSE(t.complete());
    EXPECT_THROW(diew_value(t), IncompleteTableError);
    EXPECT_THROW(t.at({{0, 0, 0}}), IncompleteTableError);
    OutcomeDistribution bad{{{0, 0, 0}}, std::vector<double>(8, 0.2)};
    EXPECT_THROW(t.set(bad), std::invalid_argument);
}

TEST(Witness, CorrelatorParity) {
    OutcomeDistribution d{{{0, 0}}, {0.4, 0.1, 0.2, 0.3}};
    EXPECT_NEAR(correlator(d), 0.4 - 0.1 - 0.2 + 0.3, 1e-15);
}

TEST(Witness, CsvRoundTrip) {
    const SettingsTable s = symmetric_settings(3, 3);
    const CorrelationTable t = simulate_table(random_density(3, 4), s, CrosstalkMatrix::identity(3));
    std::stringstream io;
    t.write_csv(io);
    EXPECT_EQ(io.str().substr(0, io.str().find('\n')), "s1,s2,s3,r,probability");
    const CorrelationTable back = CorrelationTable::read_csv(io, 3);
    ASSERT_TRUE(back.complete());
    EXPECT_NEAR(diew_value(back), diew_value(t), 1e-12);
}

TEST(Witness, ReportDerivedColumns) {
    const WitnessReport r = report(4.78, 0.06, 4.070, 3, 2);
    EXPECT_NEAR(r.visibility, 4.78 / (4 * std::sqrt(2.0)), 1e-14);
    EXPECT_NEAR(r.q, (4.78 - 4.070) / 4.78, 1e-14);
    EXPECT_NEAR(r.sigma_violation, (4.78 - 4.070) / 0.06, 1e-12);
    const WitnessReport c = report(10.42, 0.06, 8.43, 4, 2, 0.08);
    EXPECT_NEAR(c.sigma_violation, (10.42 - 8.43) / 0.1, 1e-12);
    EXPECT_THROW(report(1.0, 0.0, 1.0, 3, 2), std::invalid_argument);
    const auto j = to_json(r);
    for (const char *key : {"B", "B^CT", "I^exp", "I^exp-B^CT (sigma)", "I^max", "V", "q (%)"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    const WitnessReport back = witness_report_from_json(j);
    EXPECT_NEAR(back.q, r.q, 1e-15);
    EXPECT_EQ(back.sigma_violation, r.sigma_violation);
}

}  // namespace
}  // namespace diew
