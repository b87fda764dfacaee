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

#ifndef DIEW_MEASUREMENT_H
#define DIEW_MEASUREMENT_H

#include <Eigen/Dense>
#include <compare>
#include <numbers>
#include <span>
#include <vector>

#include "diew/kernels.h"
#include "diew/state.h"
#include "json.hpp"

namespace diew {

/// Outcome bit r_j = 0 is the +1 eigenvalue of the measured observable, so a
/// joint outcome contributes (-1)^(sum_j r_j) to a correlator.
inline constexpr int kPlusOneOutcomeBit = 0;

/// Phase angles phi[party][setting] and the collective rotation angle theta.
struct SettingsTable {
    int n = 0;
    int m = 0;
    std::vector<std::vector<double>> phi;
    double theta = std::numbers::pi / 2;

    void validate() const;
};

/// C(j, k) is the fraction of the rotation addressed to ion j that lands on
/// ion k. Unit diagonal, |off-diagonal| <= epsilon.
struct CrosstalkMatrix {
    int n = 0;
    Eigen::MatrixXd C;
    double epsilon = 0.0;

    static CrosstalkMatrix identity(int n);
    void validate() const;
};

struct SettingVector {
    std::vector<int> index;

    int total() const;
    auto operator<=>(const SettingVector &) const = default;
};

struct OutcomeDistribution {
    SettingVector s;
    std::vector<double> p;  // indexed by outcome bitstring, party 1 = MSB

    void validate() const;
};

/// phi_s = -pi/(2mn) + s pi/m on every party, theta = pi/2.
SettingsTable symmetric_settings(int n, int m);

/// Angles maximizing the witness on (|0..01..1> + |1..10..0>)/sqrt2: the first
/// n/2 parties take one row, the rest the other. Only m = 2, 3 and even n.
SettingsTable df_settings(int n, int m);

/// psi_k = sum_j C(j,k) phi[j][s_j]. Z rotations commute, so the pulses of all
/// parties simply add up on each ion.
std::vector<double> effective_z_angles(const SettingVector &s, const SettingsTable &settings,
                                       const CrosstalkMatrix &crosstalk);

/// Phase rotation followed by the collective pulse, restricted to one qubit:
/// exp(i theta/2 sigma_y) exp(i psi/2 sigma_z). With this frame the measured
/// observable u^dag sigma_z u is cos(theta) sigma_z + sin(theta)(cos(psi) sigma_x
/// + sin(psi) sigma_y), i.e. psi is the azimuth of the measurement direction.
kernels::Mat2 local_rotation(double psi, double theta);

/// u^dag sigma_z u for the rotation above.
kernels::Mat2 local_observable(double psi, double theta);

/// Dense 2^n unitary, tensor product of local_rotation over the parties.
Matrix measurement_unitary(std::span<const double> psi, double theta);

/// p[r] = <r| U rho U^dag |r> with U built from the crosstalk-shifted angles.
OutcomeDistribution outcome_distribution(const DensityMatrix &rho, const SettingVector &s,
                                         const SettingsTable &settings, const CrosstalkMatrix &crosstalk);
OutcomeDistribution outcome_distribution(const PureState &psi, const SettingVector &s,
                                         const SettingsTable &settings, const CrosstalkMatrix &crosstalk);

/// Measurement config document: {"n", "m", "theta", "phi": [[...]], "C": [[...]],
/// "epsilon"}. Angles are radians and epsilon is a fraction.
nlohmann::json to_json(const SettingsTable &settings);
nlohmann::json to_json(const CrosstalkMatrix &crosstalk);
nlohmann::json measurement_config_json(const SettingsTable &settings, const CrosstalkMatrix &crosstalk);
SettingsTable settings_from_json(const nlohmann::json &j);
CrosstalkMatrix crosstalk_from_json(const nlohmann::json &j);

}  // namespace diew

#endif
