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

#ifndef DIEW_EXPSIM_H
#define DIEW_EXPSIM_H

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "diew/measurement.h"
#include "diew/state.h"
#include "diew/witness.h"
#include "json.hpp"

namespace diew {

/// GHZ-class preparation: pattern, relative phase, then dephasing and white noise.
struct StateSpec {
    std::string pattern;
    double phase = 0.0;
    NoiseSpec noise;

    DensityMatrix build() const;
};

struct ShotPlan {
    int n = 0, m = 0;
    std::uint64_t copies_per_measurement = 0;
    std::uint64_t sets = 0;
    std::uint64_t rng_seed = 0;
    SettingsTable settings;
    CrosstalkMatrix crosstalk;
    StateSpec state;

    void validate() const;
    std::size_t measurements_per_set() const { return witness_term_count(n, m); }
    std::uint64_t total_copies() const { return copies_per_measurement * sets * measurements_per_set(); }
};

/// Counts of one measurement: `counts[r]` outcomes r for setting vector `s`,
/// taken as the `order`-th measurement of set `set_index`.
struct MeasurementRecord {
    std::size_t set_index = 0;
    std::size_t order = 0;
    SettingVector s;
    std::vector<std::uint64_t> counts;
};

class CountTable {
   public:
    CountTable(int n, int m);

    int parties() const { return n_; }
    int settings() const { return m_; }

    void add(MeasurementRecord record);
    const std::vector<MeasurementRecord> &records() const { return records_; }

    /// Counts summed over sets, keyed by setting vector.
    std::map<SettingVector, std::vector<std::uint64_t>> totals() const;

    /// Empirical frequencies; throws IncompleteTableError if a setting vector
    /// of the witness has no shots.
    CorrelationTable frequencies() const;

    /// Columns s1..sn, r, count, set_index; zero counts are omitted but every
    /// measurement keeps at least one row.
    void write_csv(std::ostream &out) const;
    static CountTable read_csv(std::istream &in, int m);

   private:
    int n_, m_;
    std::vector<MeasurementRecord> records_;
};

/// One uniformly random order of the witness setting vectors per set.
std::vector<std::vector<SettingVector>> schedule(const ShotPlan &plan);

/// Runs the plan: every scheduled measurement draws copies_per_measurement
/// outcomes from the exact outcome distribution of the configured state.
CountTable sample_counts(const ShotPlan &plan);

struct CorrelatorEstimate {
    SettingVector s;
    int sign = 0;
    std::uint64_t shots = 0;
    double value = 0;
    double std_error = 0;
};

struct EstimateReport {
    double I_exp = 0;
    double std_error = 0;
    std::size_t mc_samples = 0;
    std::uint64_t rng_seed = 0;
    std::vector<CorrelatorEstimate> correlators;
};

inline constexpr std::size_t kDefaultMonteCarloSamples = 1000;

/// I from empirical frequencies; its error is the spread of I over
/// `mc_samples` parametric resamples (multinomial per setting vector at the
/// observed shot count, drawn from the observed frequencies).
EstimateReport estimate(const CountTable &counts, std::size_t mc_samples = kDefaultMonteCarloSamples,
                        std::uint64_t rng_seed = 0);

/// Keeps `copies_target` randomly chosen copies (without replacement) of each
/// setting vector, pooling the sets first. The result holds one record per
/// setting vector with set_index 0.
CountTable subsample(const CountTable &counts, std::uint64_t copies_target, std::uint64_t rng_seed);

nlohmann::json to_json(const EstimateReport &r);
nlohmann::json to_json(const ShotPlan &plan);

}  // namespace diew

#endif
