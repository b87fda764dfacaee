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

#ifndef DIEW_CONFIG_H
#define DIEW_CONFIG_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diew/bisep.h"
#include "diew/expsim.h"
#include "diew/measurement.h"
#include "json.hpp"

namespace diew {

/// Validation failure; `issues` holds one "field.path: message" per problem.
class ConfigError : public std::runtime_error {
   public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string> &issues() const { return issues_; }

   private:
    std::vector<std::string> issues_;
};

enum class SettingsMode { symmetric, df, explicit_angles };

struct ShotSpec {
    std::uint64_t copies_per_measurement = 250;
    std::uint64_t sets = 1;
    std::size_t mc_samples = kDefaultMonteCarloSamples;
    /// Per setting vector, after pooling sets; unset keeps every copy.
    std::optional<std::uint64_t> subsample_copies;
};

/// Everything a CLI run needs, resolved from one JSON document.
///
///   {"n": 3, "m": 2,
///    "settings": {"mode": "symmetric" | "df" | "explicit", "phi": [[...]], "theta": 1.5708},
///    "state": {"pattern": "000", "phase": "auto", "white_noise": 0.16, "dephasing": 0},
///    "crosstalk": {"epsilon": 0.016, "C": [[...]], "epsilon_grid": [0, 0.01, 0.02]},
///    "shots": {"copies_per_measurement": 250, "sets": 6, "mc_samples": 1000, "subsample_copies": 600},
///    "optimizer": {"restarts": 50, ...},
///    "bound": {"B^CT": 4.07, "B^CT stderr": 0.004},
///    "seed": 7, "output_dir": "runs/n3m2"}
struct RunConfig {
    int n = 0, m = 0;
    SettingsMode mode = SettingsMode::symmetric;
    SettingsTable settings;
    StateSpec state;
    double epsilon = 0.0;
    /// Optional nondecreasing ε values for a bound scan.
    std::vector<double> epsilon_grid;
    /// Crosstalk used when simulating measurements; identity unless "C" is given.
    CrosstalkMatrix crosstalk;
    ShotSpec shots;
    OptimizerConfig optimizer;
    std::optional<double> known_B_CT;
    double known_B_CT_stderr = 0.0;
    std::uint64_t seed = 1;
    std::string output_dir;

    ShotPlan shot_plan() const;
    std::uint64_t mc_seed() const;
    std::uint64_t subsample_seed() const;
};

/// Collects every problem before throwing ConfigError. `seed_override`
/// replaces the document's seed (and the optimizer seed derived from it).
RunConfig parse_run_config(const nlohmann::json &doc, std::optional<std::uint64_t> seed_override = std::nullopt);

nlohmann::json to_json(const RunConfig &cfg);

}  // namespace diew

#endif
