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

#include "diew/expsim.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "diew/rng.h"
#include "parallel.h"

namespace diew {
namespace {

enum : std::uint64_t { kTagSchedule = 11, kTagShots = 12, kTagResample = 13, kTagSubsample = 14 };

std::string bitstring(std::size_t r, int n) {
    std::string out(static_cast<std::size_t>(n), '0');
    for (int j = 0; j < n; ++j) {
        if ((r >> (n - 1 - j)) & 1U) {
            out[static_cast<std::size_t>(j)] = '1';
        }
    }
    return out;
}

double correlator_of_counts(const std::vector<std::uint64_t> &counts, std::uint64_t shots) {
    std::int64_t signed_sum = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
        const auto c = static_cast<std::int64_t>(counts[r]);
        signed_sum += std::popcount(r) % 2 == 0 ? c : -c;
    }
    return static_cast<double>(signed_sum) / static_cast<double>(shots);
}

double sample_stddev(const std::vector<double> &xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

DensityMatrix StateSpec::build() const { return noisy_ghz(pattern, phase, noise); }

void ShotPlan::validate() const {
    if (copies_per_measurement == 0 || sets == 0) {
        throw std::invalid_argument("shot plan needs positive copies per measurement and sets");
    }
    settings.validate();
    crosstalk.validate();
    if (settings.n != n || settings.m != m || crosstalk.n != n) {
        throw std::invalid_argument("shot plan settings do not match (n, m)");
    }
    if (static_cast<int>(state.pattern.size()) != n) {
        throw std::invalid_argument("state pattern length does not match n");
    }
    state.noise.validate();
}

CountTable::CountTable(int n, int m) : n_(n), m_(m) {
    if (n < 2 || n > kMaxQubits || m < 2) {
        throw std::invalid_argument("count table needs 2 <= n <= 10 and m >= 2");
    }
}

void CountTable::add(MeasurementRecord record) {
    if (static_cast<int>(record.s.index.size()) != n_ || record.counts.size() != (std::size_t{1} << n_)) {
        throw std::invalid_argument("measurement record does not match the table shape");
    }
    if (witness_sign(record.s, m_) == 0) {
        throw std::invalid_argument("measurement record is not a witness setting vector");
    }
    records_.push_back(std::move(record));
}

std::map<SettingVector, std::vector<std::uint64_t>> CountTable::totals() const {
    std::map<SettingVector, std::vector<std::uint64_t>> out;
    for (const auto &rec : records_) {
        auto &acc = out[rec.s];
        acc.resize(rec.counts.size(), 0);
        for (std::size_t r = 0; r < rec.counts.size(); ++r) {
            acc[r] += rec.counts[r];
        }
    }
    return out;
}

CorrelationTable CountTable::frequencies() const {
    CorrelationTable t(n_, m_);
    for (const auto &[s, counts] : totals()) {
        const std::uint64_t shots = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
        if (shots == 0) {
            continue;
        }
        std::vector<double> p(counts.size());
        for (std::size_t r = 0; r < counts.size(); ++r) {
            p[r] = static_cast<double>(counts[r]) / static_cast<double>(shots);
        }
        t.set({s, std::move(p)});
    }
    if (!t.complete()) {
        throw IncompleteTableError("counts are missing setting vectors of the witness");
    }
    return t;
}

void CountTable::write_csv(std::ostream &out) const {
    for (int j = 1; j <= n_; ++j) {
        out << 's' << j << ',';
    }
    out << "r,count,set_index\n";
    for (const auto &rec : records_) {
        bool wrote = false;
        for (std::size_t r = 0; r < rec.counts.size(); ++r) {
            if (rec.counts[r] == 0 && (wrote || r + 1 < rec.counts.size())) {
                continue;
            }
            for (int v : rec.s.index) {
                out << v << ',';
            }
            out << bitstring(r, n_) << ',' << rec.counts[r] << ',' << rec.set_index << '\n';
            wrote = true;
        }
    }
}

CountTable CountTable::read_csv(std::istream &in, int m) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty counts CSV");
    }
    const int n = static_cast<int>(std::count(line.begin(), line.end(), ',')) - 2;
    CountTable table(n, m);
    std::map<std::pair<std::size_t, SettingVector>, std::size_t> position;
    std::vector<MeasurementRecord> records;
    std::map<std::size_t, std::size_t> next_order;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        SettingVector s;
        for (int j = 0; j < n; ++j) {
            std::getline(ss, cell, ',');
            s.index.push_back(std::stoi(cell));
        }
        std::string r;
        std::getline(ss, r, ',');
        std::getline(ss, cell, ',');
        const std::uint64_t count = std::stoull(cell);
        std::getline(ss, cell, ',');
        const std::size_t set_index = std::stoull(cell);
        if (static_cast<int>(r.size()) != n) {
            throw std::invalid_argument("outcome bitstring has the wrong length: " + r);
        }
        auto key = std::make_pair(set_index, s);
        auto it = position.find(key);
        if (it == position.end()) {
            it = position.emplace(key, records.size()).first;
            records.push_back({set_index, next_order[set_index]++, s, std::vector<std::uint64_t>(std::size_t{1} << n, 0)});
        }
        records[it->second].counts[pattern_index(r)] += count;
    }
    for (auto &rec : records) {
        table.add(std::move(rec));
    }
    return table;
}

std::vector<std::vector<SettingVector>> schedule(const ShotPlan &plan) {
    plan.validate();
    std::vector<SettingVector> base;
    for (const WitnessTerm &t : witness_terms(plan.n, plan.m)) {
        base.push_back(t.s);
    }
    std::vector<std::vector<SettingVector>> out;
    out.reserve(plan.sets);
    for (std::uint64_t set = 0; set < plan.sets; ++set) {
        Rng rng = make_rng(plan.rng_seed, {kTagSchedule, set});
        std::vector<SettingVector> order = base;
        std::shuffle(order.begin(), order.end(), rng);
        out.push_back(std::move(order));
    }
    return out;
}

CountTable sample_counts(const ShotPlan &plan) {
    plan.validate();
    const CorrelationTable exact = simulate_table(plan.state.build(), plan.settings, plan.crosstalk);
    CountTable table(plan.n, plan.m);
    const auto order = schedule(plan);
    for (std::size_t set = 0; set < order.size(); ++set) {
        for (std::size_t pos = 0; pos < order[set].size(); ++pos) {
            const SettingVector &s = order[set][pos];
            Rng rng = make_rng(plan.rng_seed, {kTagShots, set, pos});
            table.add({set, pos, s, sample_multinomial(plan.copies_per_measurement, exact.at(s).p, rng)});
        }
    }
    return table;
}

EstimateReport estimate(const CountTable &counts, std::size_t mc_samples, std::uint64_t rng_seed) {
    const CorrelationTable freq = counts.frequencies();
    const auto totals = counts.totals();
    const auto terms = witness_terms(counts.parties(), counts.settings());

    EstimateReport rep;
    rep.mc_samples = mc_samples;
    rep.rng_seed = rng_seed;
    rep.I_exp = diew_value(freq);
    std::vector<std::uint64_t> shots(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto &c = totals.at(terms[i].s);
        shots[i] = std::accumulate(c.begin(), c.end(), std::uint64_t{0});
        rep.correlators.push_back({terms[i].s, terms[i].sign, shots[i], correlator(freq.at(terms[i].s)), 0.0});
    }

    // samples[k][i]: resampled correlator i in Monte Carlo draw k.
    const auto samples = detail::parallel_map<std::vector<double>>(mc_samples, 0, [&](std::size_t k) {
        Rng rng = make_rng(rng_seed, {kTagResample, k});
        std::vector<double> e(terms.size());
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const auto drawn = sample_multinomial(shots[i], freq.at(terms[i].s).p, rng);
            e[i] = correlator_of_counts(drawn, shots[i]);
        }
        return e;
    });
    std::vector<double> values(mc_samples, 0.0);
    for (std::size_t k = 0; k < mc_samples; ++k) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            values[k] += terms[i].sign * samples[k][i];
        }
    }
    rep.std_error = sample_stddev(values);
    std::vector<double> column(mc_samples);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t k = 0; k < mc_samples; ++k) {
            column[k] = samples[k][i];
        }
        rep.correlators[i].std_error = sample_stddev(column);
    }
    return rep;
}

CountTable subsample(const CountTable &counts, std::uint64_t copies_target, std::uint64_t rng_seed) {
    CountTable out(counts.parties(), counts.settings());
    std::size_t order = 0;
    for (const auto &[s, c] : counts.totals()) {
        const std::uint64_t available = std::accumulate(c.begin(), c.end(), std::uint64_t{0});
        if (copies_target > available) {
            throw std::invalid_argument("subsample target exceeds the available copies");
        }
        std::vector<std::uint32_t> population;
        population.reserve(available);
        for (std::size_t r = 0; r < c.size(); ++r) {
            population.insert(population.end(), c[r], static_cast<std::uint32_t>(r));
        }
        std::vector<std::uint32_t> kept;
        kept.reserve(copies_target);
        Rng rng = make_rng(rng_seed, {kTagSubsample, order});
        std::sample(population.begin(), population.end(), std::back_inserter(kept), copies_target, rng);
        std::vector<std::uint64_t> sub(c.size(), 0);
        for (std::uint32_t r : kept) {
            ++sub[r];
        }
        out.add({0, order++, s, std::move(sub)});
    }
    return out;
}

nlohmann::json to_json(const EstimateReport &r) {
    nlohmann::json corr = nlohmann::json::array();
    for (const auto &c : r.correlators) {
        corr.push_back({{"s", c.s.index}, {"sign", c.sign}, {"shots", c.shots}, {"E", c.value}, {"stderr", c.std_error}});
    }
    return {{"I^exp", r.I_exp},
            {"stderr", r.std_error},
            {"mc_samples", r.mc_samples},
            {"mc_seed", r.rng_seed},
            {"correlators", corr}};
}

nlohmann::json to_json(const ShotPlan &plan) {
    return {{"n", plan.n},
            {"m", plan.m},
            {"copies/meas.", plan.copies_per_measurement},
            {"meas./set", plan.measurements_per_set()},
            {"sets", plan.sets},
            {"copies", plan.total_copies()},
            {"rng_seed", plan.rng_seed}};
}

}  // namespace diew
