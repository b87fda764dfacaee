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

#include "diew/measurement.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace diew {
namespace {

using kernels::Mat2;
constexpr double kPi = std::numbers::pi;

void check_dims(const SettingVector &s, const SettingsTable &settings, const CrosstalkMatrix &crosstalk) {
    if (static_cast<int>(s.index.size()) != settings.n || crosstalk.n != settings.n) {
        throw std::invalid_argument("setting vector, settings table and crosstalk matrix disagree on n");
    }
    for (int v : s.index) {
        if (v < 0 || v >= settings.m) {
            throw std::invalid_argument("setting index out of range");
        }
    }
}

std::vector<double> diagonal_probabilities(const Matrix &m) {
    std::vector<double> p(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        p[static_cast<std::size_t>(i)] = m(i, i).real();
    }
    return p;
}

std::vector<Mat2> local_rotations(const SettingVector &s, const SettingsTable &settings,
                                  const CrosstalkMatrix &crosstalk) {
    const std::vector<double> psi = effective_z_angles(s, settings, crosstalk);
    std::vector<Mat2> out;
    out.reserve(psi.size());
    for (double a : psi) {
        out.push_back(local_rotation(a, settings.theta));
    }
    return out;
}

}  // namespace

void SettingsTable::validate() const {
    if (n < 1 || n > kMaxQubits || m < 1) {
        throw std::invalid_argument("settings table needs 1 <= n <= 10 and m >= 1");
    }
    if (static_cast<int>(phi.size()) != n) {
        throw std::invalid_argument("phi must have one row per party");
    }
    for (const auto &row : phi) {
        if (static_cast<int>(row.size()) != m) {
            throw std::invalid_argument("phi rows must have m entries");
        }
        for (double a : row) {
            if (!std::isfinite(a)) {
                throw std::invalid_argument("phi angles must be finite");
            }
        }
    }
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("theta must be finite");
    }
}

CrosstalkMatrix CrosstalkMatrix::identity(int n) { return {n, Eigen::MatrixXd::Identity(n, n), 0.0}; }

void CrosstalkMatrix::validate() const {
    if (C.rows() != n || C.cols() != n) {
        throw std::invalid_argument("crosstalk matrix must be n x n");
    }
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("crosstalk bound must be nonnegative");
    }
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) {
                if (C(j, k) != 1.0) {
                    throw std::invalid_argument("crosstalk matrix diagonal must be 1");
                }
            } else if (!(std::abs(C(j, k)) <= epsilon + 1e-15)) {
                throw std::invalid_argument("crosstalk entry (" + std::to_string(j) + "," + std::to_string(k) +
                                            ") exceeds epsilon");
            }
        }
    }
}

int SettingVector::total() const { return std::accumulate(index.begin(), index.end(), 0); }

void OutcomeDistribution::validate() const {
    double sum = 0;
    for (double v : p) {
        if (!(v >= -1e-12)) {
            throw std::invalid_argument("outcome probability below zero");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10) {
        throw std::invalid_argument("outcome distribution does not sum to 1");
    }
    if (p.size() != (std::size_t{1} << s.index.size())) {
        throw std::invalid_argument("outcome distribution must have 2^n entries");
    }
}

SettingsTable symmetric_settings(int n, int m) {
    if (n < 2 || m < 2) {
        throw std::invalid_argument("symmetric settings need n >= 2 and m >= 2");
    }
    SettingsTable t{n, m, {}, kPi / 2};
    std::vector<double> row(static_cast<std::size_t>(m));
    for (int s = 0; s < m; ++s) {
        row[static_cast<std::size_t>(s)] = -kPi / (2.0 * m * n) + s * kPi / m;
    }
    t.phi.assign(static_cast<std::size_t>(n), row);
    return t;
}

SettingsTable df_settings(int n, int m) {
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("decoherence-free settings need an even number of parties");
    }
    if (m != 2 && m != 3) {
        throw std::invalid_argument("decoherence-free settings are defined for m = 2 or 3");
    }
    const double offset = (n + 1) * kPi / (12.0 * n);
    std::vector<double> first(static_cast<std::size_t>(m)), second(static_cast<std::size_t>(m));
    for (int s = 0; s < m; ++s) {
        const auto i = static_cast<std::size_t>(s);
        if (m == 2) {
            first[i] = s * kPi / 2;
            second[i] = offset + (1 - s) * kPi / 2;
        } else {
            first[i] = offset + s * kPi / 3;
            second[i] = (2 - s) * kPi / 3;
        }
    }
    SettingsTable t{n, m, {}, kPi / 2};
    for (int j = 0; j < n; ++j) {
        t.phi.push_back(j < n / 2 ? first : second);
    }
    return t;
}

std::vector<double> effective_z_angles(const SettingVector &s, const SettingsTable &settings,
                                       const CrosstalkMatrix &crosstalk) {
    check_dims(s, settings, crosstalk);
    std::vector<double> psi(static_cast<std::size_t>(settings.n), 0.0);
    for (int j = 0; j < settings.n; ++j) {
        const double addressed = settings.phi[static_cast<std::size_t>(j)][static_cast<std::size_t>(s.index[j])];
        for (int k = 0; k < settings.n; ++k) {
            psi[static_cast<std::size_t>(k)] += crosstalk.C(j, k) * addressed;
        }
    }
    return psi;
}

Mat2 local_rotation(double psi, double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const cplx up = std::polar(1.0, psi / 2), down = std::polar(1.0, -psi / 2);
    return {c * up, s * down, -s * up, c * down};
}

Mat2 local_observable(double psi, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {cplx(c, 0), s * std::polar(1.0, -psi), s * std::polar(1.0, psi), cplx(-c, 0)};
}

Matrix measurement_unitary(std::span<const double> psi, double theta) {
    const int n = static_cast<int>(psi.size());
    if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("measurement unitary needs 1 <= n <= 10 angles");
    }
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
    Matrix u = Matrix::Identity(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        std::span<cplx> column(u.col(col).data(), static_cast<std::size_t>(d));
        for (int k = 0; k < n; ++k) {
            kernels::apply_1q(column, qubit_stride(n, k), local_rotation(psi[static_cast<std::size_t>(k)], theta));
        }
    }
    return u;
}

OutcomeDistribution outcome_distribution(const DensityMatrix &rho, const SettingVector &s,
                                         const SettingsTable &settings, const CrosstalkMatrix &crosstalk) {
    if (rho.qubits() != settings.n) {
        throw std::invalid_argument("state and settings disagree on n");
    }
    const std::vector<Mat2> rot = local_rotations(s, settings, crosstalk);
    const int n = settings.n;
    const std::size_t d = rho.dim();
    auto rotate_columns = [&](Matrix &m) {
        for (std::size_t col = 0; col < d; ++col) {
            std::span<cplx> column(m.col(static_cast<Eigen::Index>(col)).data(), d);
            for (int k = 0; k < n; ++k) {
                kernels::apply_1q(column, qubit_stride(n, k), rot[static_cast<std::size_t>(k)]);
            }
        }
    };
    Matrix work = rho.entries();
    rotate_columns(work);  // U rho
    Matrix back = work.adjoint();
    rotate_columns(back);  // U rho U^dag
    OutcomeDistribution out{s, diagonal_probabilities(back)};
    out.validate();
    return out;
}

OutcomeDistribution outcome_distribution(const PureState &psi, const SettingVector &s,
                                         const SettingsTable &settings, const CrosstalkMatrix &crosstalk) {
    if (psi.qubits() != settings.n) {
        throw std::invalid_argument("state and settings disagree on n");
    }
    const std::vector<Mat2> rot = local_rotations(s, settings, crosstalk);
    Vector work = psi.amplitudes();
    std::span<cplx> amps(work.data(), psi.dim());
    for (int k = 0; k < settings.n; ++k) {
        kernels::apply_1q(amps, qubit_stride(settings.n, k), rot[static_cast<std::size_t>(k)]);
    }
    OutcomeDistribution out{s, std::vector<double>(psi.dim())};
    for (std::size_t i = 0; i < psi.dim(); ++i) {
        out.p[i] = std::norm(amps[i]);
    }
    out.validate();
    return out;
}

nlohmann::json to_json(const SettingsTable &settings) {
    return {{"n", settings.n}, {"m", settings.m}, {"theta", settings.theta}, {"phi", settings.phi}};
}

nlohmann::json to_json(const CrosstalkMatrix &crosstalk) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(crosstalk.n));
    for (int j = 0; j < crosstalk.n; ++j) {
        for (int k = 0; k < crosstalk.n; ++k) {
            rows[static_cast<std::size_t>(j)].push_back(crosstalk.C(j, k));
        }
    }
    return {{"n", crosstalk.n}, {"C", rows}, {"epsilon", crosstalk.epsilon}};
}

nlohmann::json measurement_config_json(const SettingsTable &settings, const CrosstalkMatrix &crosstalk) {
    nlohmann::json j = to_json(settings);
    const nlohmann::json c = to_json(crosstalk);
    j["C"] = c["C"];
    j["epsilon"] = c["epsilon"];
    return j;
}

SettingsTable settings_from_json(const nlohmann::json &j) {
    SettingsTable t;
    t.n = j.at("n").get<int>();
    t.m = j.at("m").get<int>();
    t.theta = j.value("theta", std::numbers::pi / 2);
    t.phi = j.at("phi").get<std::vector<std::vector<double>>>();
    t.validate();
    return t;
}

CrosstalkMatrix crosstalk_from_json(const nlohmann::json &j) {
    const int n = j.at("n").get<int>();
    CrosstalkMatrix c = CrosstalkMatrix::identity(n);
    c.epsilon = j.value("epsilon", 0.0);
    if (j.contains("C")) {
        const auto rows = j.at("C").get<std::vector<std::vector<double>>>();
        if (static_cast<int>(rows.size()) != n) {
            throw std::invalid_argument("crosstalk matrix must have n rows");
        }
        for (int r = 0; r < n; ++r) {
            if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n) {
                throw std::invalid_argument("crosstalk matrix must have n columns");
            }
            for (int k = 0; k < n; ++k) {
                c.C(r, k) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
            }
        }
    }
    c.validate();
    return c;
}

}  // namespace diew
