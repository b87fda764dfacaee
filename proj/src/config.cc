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

#include "diew/config.h"

#include <cmath>

#include "diew/rng.h"

namespace diew {
namespace {

std::string join_issues(const std::vector<std::string> &issues) {
    std::string out = "invalid configuration";
    for (const auto &i : issues) {
        out += "\n  " + i;
    }
    return out;
}

class Reader {
   public:
    explicit Reader(std::vector<std::string> &issues) : issues_(issues) {}

    void fail(const std::string &path, const std::string &message) { issues_.push_back(path + ": " + message); }

    template <typename T>
    std::optional<T> get(const nlohmann::json &obj, const std::string &key, const std::string &path) {
        if (!obj.is_object() || !obj.contains(key)) {
            return std::nullopt;
        }
        try {
            return obj.at(key).get<T>();
        } catch (const nlohmann::json::exception &) {
            fail(path, "has the wrong type");
            return std::nullopt;
        }
    }

    template <typename T>
    T require(const nlohmann::json &obj, const std::string &key, const std::string &path, T fallback) {
        if (!obj.is_object() || !obj.contains(key)) {
            fail(path, "is required");
            return fallback;
        }
        return get<T>(obj, key, path).value_or(fallback);
    }

   private:
    std::vector<std::string> &issues_;
};

const nlohmann::json &section(const nlohmann::json &doc, const char *key) {
    static const nlohmann::json empty = nlohmann::json::object();
    return doc.is_object() && doc.contains(key) ? doc.at(key) : empty;
}

std::string mode_name(SettingsMode m) {
    switch (m) {
        case SettingsMode::symmetric:
            return "symmetric";
        case SettingsMode::df:
            return "df";
        case SettingsMode::explicit_angles:
            return "explicit";
    }
    return "symmetric";
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ShotPlan RunConfig::shot_plan() const {
    ShotPlan plan;
    plan.n = n;
    plan.m = m;
    plan.copies_per_measurement = shots.copies_per_measurement;
    plan.sets = shots.sets;
    plan.rng_seed = derive_seed(seed, {1});
    plan.settings = settings;
    plan.crosstalk = crosstalk;
    plan.state = state;
    return plan;
}

std::uint64_t RunConfig::mc_seed() const { return derive_seed(seed, {2}); }
std::uint64_t RunConfig::subsample_seed() const { return derive_seed(seed, {3}); }

RunConfig parse_run_config(const nlohmann::json &doc, std::optional<std::uint64_t> seed_override) {
    std::vector<std::string> issues;
    Reader rd(issues);
    RunConfig cfg;
    if (!doc.is_object()) {
        throw ConfigError({"(root): must be a JSON object"});
    }
    cfg.n = rd.require<int>(doc, "n", "n", 0);
    cfg.m = rd.require<int>(doc, "m", "m", 0);
    const bool shape_ok = cfg.n >= 2 && cfg.n <= kMaxQubits && cfg.m >= 2;
    if (!shape_ok) {
        rd.fail("n/m", "need 2 <= n <= 10 and m >= 2");
    }

    const auto &set_doc = section(doc, "settings");
    const std::string mode = rd.get<std::string>(set_doc, "mode", "settings.mode").value_or("symmetric");
    if (mode == "symmetric") {
        cfg.mode = SettingsMode::symmetric;
    } else if (mode == "df") {
        cfg.mode = SettingsMode::df;
    } else if (mode == "explicit") {
        cfg.mode = SettingsMode::explicit_angles;
    } else {
        rd.fail("settings.mode", "must be symmetric, df or explicit");
    }
    if (shape_ok) {
        try {
            switch (cfg.mode) {
                case SettingsMode::symmetric:
                    cfg.settings = symmetric_settings(cfg.n, cfg.m);
                    break;
                case SettingsMode::df:
                    if (cfg.n % 2 != 0 || (cfg.m != 2 && cfg.m != 3)) {
                        rd.fail("settings.mode", "df needs even n and m in {2, 3}");
                    } else {
                        cfg.settings = df_settings(cfg.n, cfg.m);
                    }
                    break;
                case SettingsMode::explicit_angles: {
                    cfg.settings.n = cfg.n;
                    cfg.settings.m = cfg.m;
                    cfg.settings.phi = rd.require<std::vector<std::vector<double>>>(set_doc, "phi", "settings.phi", {});
                    cfg.settings.validate();
                    break;
                }
            }
            if (auto theta = rd.get<double>(set_doc, "theta", "settings.theta")) {
                cfg.settings.theta = *theta;
            }
        } catch (const std::invalid_argument &e) {
            rd.fail("settings", e.what());
        }
    }

    const auto &st = section(doc, "state");
    std::string default_pattern;
    if (cfg.n > 0 && cfg.n <= kMaxQubits) {
        default_pattern = cfg.mode == SettingsMode::df
                              ? std::string(static_cast<std::size_t>(cfg.n / 2), '0') +
                                    std::string(static_cast<std::size_t>(cfg.n - cfg.n / 2), '1')
                              : std::string(static_cast<std::size_t>(cfg.n), '0');
    }
    cfg.state.pattern = rd.get<std::string>(st, "pattern", "state.pattern").value_or(default_pattern);
    if (static_cast<int>(cfg.state.pattern.size()) != cfg.n ||
        cfg.state.pattern.find_first_not_of("01") != std::string::npos) {
        rd.fail("state.pattern", "must be a bitstring of length n");
    }
    // Missing or "auto": the calibrated phase at which the settings saturate the witness.
    const bool auto_phase = !st.is_object() || !st.contains("phase") ||
                            (st.at("phase").is_string() && st.at("phase").get<std::string>() == "auto");
    const bool pattern_ok = static_cast<int>(cfg.state.pattern.size()) == cfg.n &&
                            cfg.state.pattern.find_first_not_of("01") == std::string::npos;
    if (!auto_phase) {
        cfg.state.phase = rd.get<double>(st, "phase", "state.phase").value_or(0.0);
    } else if (shape_ok && pattern_ok && !cfg.settings.phi.empty()) {
        cfg.state.phase = optimal_ghz_phase(cfg.state.pattern, cfg.settings);
    }
    cfg.state.noise.white_noise_fraction = rd.get<double>(st, "white_noise", "state.white_noise").value_or(0.0);
    cfg.state.noise.ghz_dephasing_factor = rd.get<double>(st, "dephasing", "state.dephasing").value_or(0.0);
    if (!(cfg.state.noise.white_noise_fraction >= 0 && cfg.state.noise.white_noise_fraction <= 1)) {
        rd.fail("state.white_noise", "must lie in [0, 1]");
    }
    if (!(cfg.state.noise.ghz_dephasing_factor >= 0 && cfg.state.noise.ghz_dephasing_factor <= 1)) {
        rd.fail("state.dephasing", "must lie in [0, 1]");
    }

    const auto &ct = section(doc, "crosstalk");
    cfg.epsilon = rd.get<double>(ct, "epsilon", "crosstalk.epsilon").value_or(0.0);
    if (!(cfg.epsilon >= 0) || !std::isfinite(cfg.epsilon)) {
        rd.fail("crosstalk.epsilon", "must be a nonnegative fraction");
        cfg.epsilon = 0;
    }
    cfg.epsilon_grid = rd.get<std::vector<double>>(ct, "epsilon_grid", "crosstalk.epsilon_grid").value_or(std::vector<double>{});
    for (std::size_t i = 0; i < cfg.epsilon_grid.size(); ++i) {
        const double e = cfg.epsilon_grid[i];
        if (!(e >= 0) || !std::isfinite(e) || (i > 0 && e < cfg.epsilon_grid[i - 1])) {
            rd.fail("crosstalk.epsilon_grid[" + std::to_string(i) + "]", "must be nonnegative and nondecreasing");
            break;
        }
    }
    if (shape_ok) {
        cfg.crosstalk = CrosstalkMatrix::identity(cfg.n);
        cfg.crosstalk.epsilon = cfg.epsilon;
        if (ct.is_object() && ct.contains("C")) {
            try {
                nlohmann::json cj = {{"n", cfg.n}, {"C", ct.at("C")}, {"epsilon", cfg.epsilon}};
                cfg.crosstalk = crosstalk_from_json(cj);
            } catch (const std::exception &e) {
                rd.fail("crosstalk.C", e.what());
            }
        }
    }

    const auto &sh = section(doc, "shots");
    cfg.shots.copies_per_measurement =
        rd.get<std::uint64_t>(sh, "copies_per_measurement", "shots.copies_per_measurement").value_or(250);
    cfg.shots.sets = rd.get<std::uint64_t>(sh, "sets", "shots.sets").value_or(1);
    cfg.shots.mc_samples = rd.get<std::size_t>(sh, "mc_samples", "shots.mc_samples").value_or(kDefaultMonteCarloSamples);
    if (sh.is_object() && sh.contains("subsample_copies") && !sh.at("subsample_copies").is_null()) {
        cfg.shots.subsample_copies = rd.get<std::uint64_t>(sh, "subsample_copies", "shots.subsample_copies");
    }
    if (cfg.shots.copies_per_measurement == 0) {
        rd.fail("shots.copies_per_measurement", "must be positive");
    }
    if (cfg.shots.sets == 0) {
        rd.fail("shots.sets", "must be positive");
    }
    if (cfg.shots.mc_samples < 2) {
        rd.fail("shots.mc_samples", "must be at least 2");
    }
    if (cfg.shots.subsample_copies &&
        (*cfg.shots.subsample_copies == 0 ||
         *cfg.shots.subsample_copies > cfg.shots.copies_per_measurement * cfg.shots.sets)) {
        rd.fail("shots.subsample_copies", "must be positive and at most copies_per_measurement * sets");
    }

    cfg.seed = seed_override.value_or(rd.get<std::uint64_t>(doc, "seed", "seed").value_or(1));
    nlohmann::json opt = section(doc, "optimizer");
    if (!opt.contains("rng_seed") || seed_override) {
        opt["rng_seed"] = derive_seed(cfg.seed, {4});
    }
    try {
        cfg.optimizer = optimizer_config_from_json(opt);
    } catch (const std::exception &e) {
        rd.fail("optimizer", e.what());
    }

    const auto &bd = section(doc, "bound");
    cfg.known_B_CT = rd.get<double>(bd, "B^CT", "bound.B^CT");
    cfg.known_B_CT_stderr = rd.get<double>(bd, "B^CT stderr", "bound.B^CT stderr").value_or(0.0);
    if (!(cfg.known_B_CT_stderr >= 0)) {
        rd.fail("bound.B^CT stderr", "must be nonnegative");
    }
    cfg.output_dir = rd.get<std::string>(doc, "output_dir", "output_dir").value_or("");

    if (!issues.empty()) {
        throw ConfigError(std::move(issues));
    }
    return cfg;
}

nlohmann::json to_json(const RunConfig &cfg) {
    nlohmann::json settings = {{"mode", mode_name(cfg.mode)}, {"theta", cfg.settings.theta}, {"phi", cfg.settings.phi}};
    nlohmann::json shots = {{"copies_per_measurement", cfg.shots.copies_per_measurement},
                            {"sets", cfg.shots.sets},
                            {"mc_samples", cfg.shots.mc_samples}};
    shots["subsample_copies"] = cfg.shots.subsample_copies ? nlohmann::json(*cfg.shots.subsample_copies) : nlohmann::json();
    nlohmann::json j = {{"n", cfg.n},
                        {"m", cfg.m},
                        {"settings", settings},
                        {"state",
                         {{"pattern", cfg.state.pattern},
                          {"phase", cfg.state.phase},
                          {"white_noise", cfg.state.noise.white_noise_fraction},
                          {"dephasing", cfg.state.noise.ghz_dephasing_factor}}},
                        {"crosstalk",
                         {{"epsilon", cfg.epsilon},
                          {"C", to_json(cfg.crosstalk)["C"]},
                          {"epsilon_grid", cfg.epsilon_grid}}},
                        {"shots", shots},
                        {"optimizer", to_json(cfg.optimizer)},
                        {"seed", cfg.seed},
                        {"output_dir", cfg.output_dir}};
    if (cfg.known_B_CT) {
        j["bound"] = {{"B^CT", *cfg.known_B_CT}, {"B^CT stderr", cfg.known_B_CT_stderr}};
    }
    return j;
}

}  // namespace diew
