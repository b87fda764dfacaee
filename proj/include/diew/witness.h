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

#ifndef DIEW_WITNESS_H
#define DIEW_WITNESS_H

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diew/measurement.h"
#include "diew/state.h"
#include "json.hpp"

namespace diew {

/// A setting vector whose sum is 0 or 1 mod m, with its +-1 weight.
struct WitnessTerm {
    SettingVector s;
    int sign;
};

/// Weight of `s` in the witness: (-1)^(S/m) if S = 0 mod m, (-1)^((S-1)/m)
/// if S = 1 mod m, else 0 (S = sum of the setting indices).
int witness_sign(const SettingVector &s, int m);

/// All 2 m^(n-1) weighted setting vectors, in lexicographic order.
std::vector<WitnessTerm> witness_terms(int n, int m);
std::size_t witness_term_count(int n, int m);

class IncompleteTableError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Outcome statistics for exactly the setting vectors the witness uses.
/// Entries may be exact probabilities or empirical frequencies.
class CorrelationTable {
   public:
    CorrelationTable(int n, int m);

    int parties() const { return n_; }
    int settings() const { return m_; }

    /// Rejects setting vectors outside the witness set and invalid distributions.
    void set(OutcomeDistribution d);
    bool complete() const { return entries_.size() == witness_term_count(n_, m_); }
    const OutcomeDistribution &at(const SettingVector &s) const;
    const std::map<SettingVector, OutcomeDistribution> &entries() const { return entries_; }

    /// One row per (setting vector, outcome): s_1..s_n, r, probability.
    void write_csv(std::ostream &out) const;
    static CorrelationTable read_csv(std::istream &in, int m);

   private:
    int n_, m_;
    std::map<SettingVector, OutcomeDistribution> entries_;
};

/// Exact table for `rho` measured with `settings` under `crosstalk`.
CorrelationTable simulate_table(const DensityMatrix &rho, const SettingsTable &settings,
                                const CrosstalkMatrix &crosstalk);
CorrelationTable simulate_table(const PureState &psi, const SettingsTable &settings,
                                const CrosstalkMatrix &crosstalk);

/// sum_r (-1)^(r_1+...+r_n) P(r|s)
double correlator(const OutcomeDistribution &d);

/// Weighted sum of correlators over the witness set. Throws
/// IncompleteTableError if any setting vector is missing.
double diew_value(const CorrelationTable &t);

/// 2 m^(n-2) cot(pi/2m): largest value reachable by biseparable states.
double bisep_bound(int n, int m);

/// 2 m^(n-1) cos(pi/2m): largest quantum value, reached by GHZ.
double max_quantum(int n, int m);

/// Relative phase chi that maximizes the witness on
/// (|pattern> + e^{i chi}|~pattern>)/sqrt2 at C = 1. The value is
/// const + Re(e^{i chi} z) with z = sum_t sign_t prod_j <a_j|O_j|~a_j>, so
/// chi = -arg z; this plays the role of the experimental phase calibration.
double optimal_ghz_phase(std::string_view pattern, const SettingsTable &settings);

struct WitnessReport {
    int n = 0, m = 0;
    double I_value = 0;
    double std_error = 0;
    double B = 0;
    double B_CT = 0;
    double B_CT_stderr = 0;
    double I_max = 0;
    double visibility = 0;
    double q = 0;
    double sigma_violation = 0;
};

/// Fills the derived columns: V = I/I_max, q = (I - B_CT)/I and the violation
/// (I - B_CT)/sigma. sigma is `std_error` alone when `B_CT_stderr` is zero,
/// otherwise the two errors added in quadrature.
WitnessReport report(double I_value, double std_error, double B_CT, int n, int m, double B_CT_stderr = 0.0);

nlohmann::json to_json(const WitnessReport &r);
WitnessReport witness_report_from_json(const nlohmann::json &j);

}  // namespace diew

#endif
