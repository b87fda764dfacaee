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

// Command-line front end: bounds, simulate, optimize, run, analyze, report.

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diew/bisep.h"
#include "diew/config.h"
#include "diew/expsim.h"
#include "diew/kernels.h"
#include "diew/witness.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> mc_samples;
};

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("SHA-256 failed");
    }
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Collects artifacts in memory and writes them, plus manifest.json, to the
/// output directory (if any).
class Output {
   public:
    Output(std::string command, std::string dir) : command_(std::move(command)), dir_(std::move(dir)) {}

    void add(const std::string &name, std::string content) { files_[name] = std::move(content); }
    void add_json(const std::string &name, const json &j) { add(name, j.dump(2) + "\n"); }

    void commit(const json &config, std::optional<std::uint64_t> seed) const {
        if (dir_.empty()) {
            return;
        }
        fs::create_directories(dir_);
        json artifacts = json::object();
        for (const auto &[name, content] : files_) {
            std::ofstream out(fs::path(dir_) / name, std::ios::binary);
            out << content;
            if (!out) {
                throw std::runtime_error("cannot write " + (fs::path(dir_) / name).string());
            }
            artifacts[name] = sha256_hex(content);
        }
        json hashed = config;
        if (hashed.is_object()) {
            hashed.erase("output_dir");  // where results land is not part of the experiment
        }
        json manifest = {{"command", command_},
                         {"config", config},
                         {"config_sha256", sha256_hex(hashed.dump())},
                         {"artifacts", artifacts}};
        manifest["seed"] = seed ? json(*seed) : json();
        std::ofstream out(fs::path(dir_) / "manifest.json");
        out << manifest.dump(2) << "\n";
    }

   private:
    std::string command_, dir_;
    std::map<std::string, std::string> files_;
};

diew::RunConfig load_config(const CommonFlags &flags) {
    if (flags.config_path.empty()) {
        throw diew::ConfigError({"--config: is required"});
    }
    json doc;
    try {
        doc = json::parse(read_file(flags.config_path));
    } catch (const json::parse_error &e) {
        throw diew::ConfigError({flags.config_path + ": " + e.what()});
    } catch (const std::runtime_error &e) {
        throw diew::ConfigError({std::string("--config: ") + e.what()});
    }
    diew::RunConfig cfg = diew::parse_run_config(doc, flags.seed);
    if (flags.mc_samples) {
        if (*flags.mc_samples < 2) {
            throw diew::ConfigError({"--mc-samples: must be at least 2"});
        }
        cfg.shots.mc_samples = *flags.mc_samples;
    }
    if (!flags.out.empty()) {
        cfg.output_dir = flags.out;
    }
    return cfg;
}

/// B^CT for reports: the configured value, B itself without crosstalk, or a
/// fresh optimization (whose result is also written out).
struct BoundChoice {
    double B_CT = 0;
    double B_CT_stderr = 0;
    std::optional<diew::BoundResult> computed;
};

BoundChoice choose_bound(const diew::RunConfig &cfg) {
    BoundChoice c;
    if (cfg.known_B_CT) {
        c.B_CT = *cfg.known_B_CT;
        c.B_CT_stderr = cfg.known_B_CT_stderr;
    } else if (cfg.epsilon == 0.0) {
        c.B_CT = diew::bisep_bound(cfg.n, cfg.m);
    } else {
        c.computed = diew::optimize_crosstalk_bound(cfg.n, cfg.m, cfg.settings, cfg.epsilon, cfg.optimizer);
        c.B_CT = c.computed->B_CT;
    }
    return c;
}

int bound_exit(const BoundChoice &c) {
    return c.computed && !c.computed->converged() ? kExitNonConvergence : kExitOk;
}

std::string csv_of(const diew::CorrelationTable &t) {
    std::ostringstream ss;
    t.write_csv(ss);
    return ss.str();
}

std::string csv_of(const diew::CountTable &t) {
    std::ostringstream ss;
    t.write_csv(ss);
    return ss.str();
}

int cmd_bounds(std::optional<int> n, std::optional<int> m, const CommonFlags &flags) {
    json config;
    if (!flags.config_path.empty()) {
        const diew::RunConfig cfg = load_config(flags);
        n = n.value_or(cfg.n);
        m = m.value_or(cfg.m);
    }
    if (!n || !m) {
        throw diew::ConfigError({"--n/--m: required unless --config is given"});
    }
    json j;
    try {
        j = {{"n", *n}, {"m", *m}, {"B", diew::bisep_bound(*n, *m)}, {"I^max", diew::max_quantum(*n, *m)}};
    } catch (const std::invalid_argument &e) {
        throw diew::ConfigError({std::string("--n/--m: ") + e.what()});
    }
    std::cout << j.dump(2) << "\n";
    Output out("bounds", flags.out);
    out.add_json("bounds.json", j);
    out.commit({{"n", *n}, {"m", *m}}, std::nullopt);
    return kExitOk;
}

int cmd_simulate(const CommonFlags &flags) {
    const diew::RunConfig cfg = load_config(flags);
    const diew::DensityMatrix rho = cfg.state.build();
    const diew::CorrelationTable table = diew::simulate_table(rho, cfg.settings, cfg.crosstalk);
    const double I = diew::diew_value(table);
    const BoundChoice bound = choose_bound(cfg);
    // Exact value: no shot noise, so the violation in sigma is undefined.
    diew::WitnessReport rep = diew::report(I, 1.0, bound.B_CT, cfg.n, cfg.m, bound.B_CT_stderr);
    rep.std_error = 0.0;
    rep.sigma_violation = bound.B_CT_stderr > 0 ? (I - bound.B_CT) / bound.B_CT_stderr : std::nan("");

    Output out("simulate", cfg.output_dir);
    out.add("correlations.csv", csv_of(table));
    out.add_json("witness_report.json", diew::to_json(rep));
    if (bound.computed) {
        out.add_json("bound_result.json", diew::to_json(*bound.computed));
    }
    out.commit(diew::to_json(cfg), cfg.seed);
    std::cout << diew::to_json(rep).dump(2) << "\n";
    return bound_exit(bound);
}

int cmd_optimize(const CommonFlags &flags) {
    const diew::RunConfig cfg = load_config(flags);
    Output out("optimize", cfg.output_dir);
    const diew::BoundResult r = diew::optimize_crosstalk_bound(cfg.n, cfg.m, cfg.settings, cfg.epsilon, cfg.optimizer);
    bool converged = r.converged();
    const json rj = diew::to_json(r);
    out.add_json("bound_result.json", rj);
    json printed = {{"n", r.n}, {"m", r.m}, {"epsilon", r.epsilon}, {"B", r.B}, {"B^CT", r.B_CT},
                    {"delta_CT", r.delta_CT}, {"converged", converged}};
    if (!cfg.epsilon_grid.empty()) {
        const auto scan = diew::crosstalk_bound_scan(cfg.n, cfg.m, cfg.settings, cfg.epsilon_grid, cfg.optimizer);
        json rows = json::array();
        json brief = json::array();
        for (const auto &s : scan) {
            converged = converged && s.converged();
            rows.push_back(diew::to_json(s));
            brief.push_back({{"epsilon", s.epsilon}, {"B^CT", s.B_CT}});
        }
        out.add_json("bound_scan.json", rows);
        printed["scan"] = brief;
    }
    out.commit(diew::to_json(cfg), cfg.seed);
    std::cout << printed.dump(2) << "\n";
    if (!converged) {
        std::cerr << "optimizer did not converge\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

/// Estimate, witness report and (optionally) the subsampled variant for a count table.
void analyze_counts(const diew::RunConfig &cfg, const diew::CountTable &counts, const BoundChoice &bound,
                    Output &out, json &printed) {
    const diew::EstimateReport est = diew::estimate(counts, cfg.shots.mc_samples, cfg.mc_seed());
    const diew::WitnessReport rep =
        diew::report(est.I_exp, est.std_error, bound.B_CT, cfg.n, cfg.m, bound.B_CT_stderr);
    out.add_json("estimate_report.json", diew::to_json(est));
    out.add_json("witness_report.json", diew::to_json(rep));
    printed["full"] = diew::to_json(rep);
    if (cfg.shots.subsample_copies) {
        const diew::CountTable sub = diew::subsample(counts, *cfg.shots.subsample_copies, cfg.subsample_seed());
        const diew::EstimateReport sest = diew::estimate(sub, cfg.shots.mc_samples, cfg.mc_seed());
        const diew::WitnessReport srep =
            diew::report(sest.I_exp, sest.std_error, bound.B_CT, cfg.n, cfg.m, bound.B_CT_stderr);
        json sj = diew::to_json(srep);
        sj["copies"] = *cfg.shots.subsample_copies * diew::witness_term_count(cfg.n, cfg.m);
        out.add("counts_subsampled.csv", csv_of(sub));
        out.add_json("estimate_report_subsampled.json", diew::to_json(sest));
        out.add_json("witness_report_subsampled.json", sj);
        printed["subsampled"] = sj;
    }
    if (bound.computed) {
        out.add_json("bound_result.json", diew::to_json(*bound.computed));
    }
}

int cmd_run(const CommonFlags &flags) {
    const diew::RunConfig cfg = load_config(flags);
    const diew::ShotPlan plan = cfg.shot_plan();
    const diew::CountTable counts = diew::sample_counts(plan);
    const BoundChoice bound = choose_bound(cfg);
    Output out("run", cfg.output_dir);
    json printed = {{"plan", diew::to_json(plan)}};
    out.add("counts.csv", csv_of(counts));
    out.add_json("shot_plan.json", diew::to_json(plan));
    analyze_counts(cfg, counts, bound, out, printed);
    out.commit(diew::to_json(cfg), cfg.seed);
    std::cout << printed.dump(2) << "\n";
    return bound_exit(bound);
}

int cmd_analyze(const CommonFlags &flags, const std::string &counts_path) {
    const diew::RunConfig cfg = load_config(flags);
    std::ifstream in(counts_path);
    if (!in) {
        throw diew::ConfigError({"--counts: cannot read " + counts_path});
    }
    const diew::CountTable counts = diew::CountTable::read_csv(in, cfg.m);
    if (counts.parties() != cfg.n) {
        throw diew::ConfigError({"--counts: table has " + std::to_string(counts.parties()) + " parties, config says " +
                                 std::to_string(cfg.n)});
    }
    const BoundChoice bound = choose_bound(cfg);
    Output out("analyze", cfg.output_dir);
    json printed;
    out.add("counts.csv", read_file(counts_path));
    analyze_counts(cfg, counts, bound, out, printed);
    out.commit(diew::to_json(cfg), cfg.seed);
    std::cout << printed.dump(2) << "\n";
    return bound_exit(bound);
}

std::string fixed(double v, int digits) {
    if (!std::isfinite(v)) {
        return "-";
    }
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

int cmd_report(const std::vector<std::string> &runs, const CommonFlags &flags) {
    const std::vector<std::string> columns = {"n",     "m",     "B",  "B^CT", "I^exp", "I^exp stderr",
                                              "I^exp-B^CT (sigma)", "I^max", "V",   "q (%)", "copies"};
    json rows = json::array();
    for (const auto &run : runs) {
        for (const char *name : {"witness_report.json", "witness_report_subsampled.json"}) {
            const fs::path p = fs::path(run) / name;
            if (!fs::exists(p)) {
                continue;
            }
            json j = json::parse(read_file(p));
            diew::witness_report_from_json(j);  // shape check
            j["run"] = run;
            if (!j.contains("copies")) {
                const fs::path plan = fs::path(run) / "shot_plan.json";
                j["copies"] = fs::exists(plan) ? json::parse(read_file(plan)).value("copies", json()) : json();
            }
            rows.push_back(j);
        }
    }
    if (rows.empty()) {
        throw diew::ConfigError({"runs: no witness_report.json found"});
    }
    std::ostringstream csv;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        csv << (c ? "," : "") << '"' << columns[c] << '"';
    }
    csv << ",run\n";
    std::ostringstream table;
    table << std::left << std::setw(3) << "n" << std::setw(3) << "m" << std::setw(10) << "B" << std::setw(10) << "B^CT"
          << std::setw(10) << "I^exp" << std::setw(10) << "stderr" << std::setw(10) << "sigma" << std::setw(10)
          << "I^max" << std::setw(8) << "V" << std::setw(8) << "q (%)" << "copies\n";
    for (const auto &r : rows) {
        auto num = [&](const char *k) { return r.at(k).is_null() ? std::nan("") : r.at(k).get<double>(); };
        for (std::size_t c = 0; c < columns.size(); ++c) {
            csv << (c ? "," : "") << (r.at(columns[c]).is_null() ? "" : r.at(columns[c]).dump());
        }
        csv << "," << r.at("run").dump() << "\n";
        table << std::left << std::setw(3) << r.at("n").get<int>() << std::setw(3) << r.at("m").get<int>()
              << std::setw(10) << fixed(num("B"), 3) << std::setw(10) << fixed(num("B^CT"), 3) << std::setw(10)
              << fixed(num("I^exp"), 3) << std::setw(10) << fixed(num("I^exp stderr"), 3) << std::setw(10)
              << fixed(num("I^exp-B^CT (sigma)"), 1) << std::setw(10) << fixed(num("I^max"), 3) << std::setw(8)
              << fixed(num("V"), 2) << std::setw(8) << fixed(num("q (%)"), 1)
              << (r.at("copies").is_null() ? "-" : r.at("copies").dump()) << "\n";
    }
    std::cout << table.str();
    Output out("report", flags.out);
    out.add("summary.csv", csv.str());
    out.add("summary.txt", table.str());
    out.add_json("summary.json", rows);
    out.commit({{"runs", runs}}, std::nullopt);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Device-independent entanglement witnesses for GHZ states with crosstalk"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "diew 1.0.0");

    CommonFlags flags;
    auto add_common = [&](CLI::App *sub, bool needs_config) {
        auto *opt = sub->add_option("--config", flags.config_path, "JSON run configuration")->check(CLI::ExistingFile);
        if (needs_config) {
            opt->required();
        }
        sub->add_option("--seed", flags.seed, "Root seed (overrides the config)");
        sub->add_option("--out", flags.out, "Output directory");
        sub->add_option("--mc-samples", flags.mc_samples, "Monte Carlo resamples for the error estimate");
    };

    std::optional<int> bn, bm;
    auto *bounds = app.add_subcommand("bounds", "Print B and I^max for (n, m)");
    bounds->add_option("--n", bn, "Number of parties");
    bounds->add_option("--m", bm, "Settings per party");
    add_common(bounds, false);

    auto *simulate = app.add_subcommand("simulate", "Exact witness value for the configured state");
    add_common(simulate, true);
    auto *optimize = app.add_subcommand("optimize", "Crosstalk-robust biseparable bound");
    add_common(optimize, true);
    auto *run = app.add_subcommand("run", "Sample a shot plan and estimate the witness");
    add_common(run, true);

    std::string counts_path;
    auto *analyze = app.add_subcommand("analyze", "Re-estimate from an existing count table");
    analyze->add_option("--counts", counts_path, "Count table CSV")->required()->check(CLI::ExistingFile);
    add_common(analyze, true);

    std::vector<std::string> runs;
    auto *report = app.add_subcommand("report", "Aggregate run directories into one summary table");
    report->add_option("runs", runs, "Run output directories")->required()->check(CLI::ExistingDirectory);
    report->add_option("--out", flags.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*bounds) {
            return cmd_bounds(bn, bm, flags);
        }
        if (*simulate) {
            return cmd_simulate(flags);
        }
        if (*optimize) {
            return cmd_optimize(flags);
        }
        if (*run) {
            return cmd_run(flags);
        }
        if (*analyze) {
            return cmd_analyze(flags, counts_path);
        }
        if (*report) {
            return cmd_report(runs, flags);
        }
    } catch (const diew::ConfigError &e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
