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

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace diew {
namespace {

void check_nm(int n, int m) {
    if (n < 2 || m < 2) {
        throw std::invalid_argument("witness needs n >= 2 and m >= 2");
    }
}

std::string bitstring(std::size_t r, int n) {
    std::string out(static_cast<std::size_t>(n), '0');
    for (int j = 0; j < n; ++j) {
        if ((r >> (n - 1 - j)) & 1U) {
            out[static_cast<std::size_t>(j)] = '1';
        }
    }
    return out;
}

template <typename State>
CorrelationTable simulate_table_impl(const State &state, const SettingsTable &settings,
                                     const CrosstalkMatrix &crosstalk) {
    settings.validate();
    CorrelationTable t(settings.n, settings.m);
    for (const WitnessTerm &term : witness_terms(settings.n, settings.m)) {
        t.set(outcome_distribution(state, term.s, settings, crosstalk));
    }
    return t;
}

}  // namespace

int witness_sign(const SettingVector &s, int m) {
    const int total = s.total();
    const int residue = total % m;
    if (residue == 0) {
        return (total / m) % 2 == 0 ? 1 : -1;
    }
    if (residue == 1) {
        return ((total - 1) / m) % 2 == 0 ? 1 : -1;
    }
    return 0;
}

std::vector<WitnessTerm> witness_terms(int n, int m) {
    check_nm(n, m);
    std::vector<WitnessTerm> out;
    out.reserve(witness_term_count(n, m));
    SettingVector s{std::vector<int>(static_cast<std::size_t>(n), 0)};
    while (true) {
        if (const int sign = witness_sign(s, m); sign != 0) {
            out.push_back({s, sign});
        }
        int j = n - 1;
        while (j >= 0 && ++s.index[static_cast<std::size_t>(j)] == m) {
            s.index[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) {
            break;
        }
    }
    return out;
}

std::size_t witness_term_count(int n, int m) {
    check_nm(n, m);
    std::size_t count = 2;
    for (int i = 0; i < n - 1; ++i) {
        count *= static_cast<std::size_t>(m);
    }
    return count;
}

CorrelationTable::CorrelationTable(int n, int m) : n_(n), m_(m) { check_nm(n, m); }

void CorrelationTable::set(OutcomeDistribution d) {
    if (static_cast<int>(d.s.index.size()) != n_) {
        throw std::invalid_argument("setting vector has the wrong number of parties");
    }
    for (int v : d.s.index) {
        if (v < 0 || v >= m_) {
            throw std::invalid_argument("setting index out of range");
        }
    }
    if (witness_sign(d.s, m_) == 0) {
        throw std::invalid_argument("setting vector is not part of the witness");
    }
    d.validate();
    SettingVector key = d.s;
    entries_.insert_or_assign(std::move(key), std::move(d));
}

const OutcomeDistribution &CorrelationTable::at(const SettingVector &s) const {
    auto it = entries_.find(s);
    if (it == entries_.end()) {
        throw IncompleteTableError("correlation table has no entry for a required setting vector");
    }
    return it->second;
}

void CorrelationTable::write_csv(std::ostream &out) const {
    for (int j = 1; j <= n_; ++j) {
        out << 's' << j << ',';
    }
    out << "r,probability\n";
    out.precision(17);
    for (const auto &[s, d] : entries_) {
        for (std::size_t r = 0; r < d.p.size(); ++r) {
            for (int v : s.index) {
                out << v << ',';
            }
            out << bitstring(r, n_) << ',' << d.p[r] << '\n';
        }
    }
}

CorrelationTable CorrelationTable::read_csv(std::istream &in, int m) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty correlation CSV");
    }
    const int n = static_cast<int>(std::count(line.begin(), line.end(), ',')) - 1;
    std::map<SettingVector, std::vector<double>> rows;
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
        auto &p = rows[s];
        p.resize(std::size_t{1} << n, 0.0);
        p[pattern_index(r)] = std::stod(cell);
    }
    CorrelationTable t(n, m);
    for (auto &[s, p] : rows) {
        t.set({s, std::move(p)});
    }
    return t;
}

CorrelationTable simulate_table(const DensityMatrix &rho, const SettingsTable &settings,
                                const CrosstalkMatrix &crosstalk) {
    return simulate_table_impl(rho, settings, crosstalk);
}

CorrelationTable simulate_table(const PureState &psi, const SettingsTable &settings,
                                const CrosstalkMatrix &crosstalk) {
    return simulate_table_impl(psi, settings, crosstalk);
}

double correlator(const OutcomeDistribution &d) {
    d.validate();
    double e = 0;
    for (std::size_t r = 0; r < d.p.size(); ++r) {
        e += (std::popcount(r) % 2 == 0) ? d.p[r] : -d.p[r];
    }
    return e;
}

double diew_value(const CorrelationTable &t) {
    double total = 0;
    for (const WitnessTerm &term : witness_terms(t.parties(), t.settings())) {
        total += term.sign * correlator(t.at(term.s));
    }
    return total;
}

double bisep_bound(int n, int m) {
    check_nm(n, m);
    return 2.0 * std::pow(static_cast<double>(m), n - 2) / std::tan(std::numbers::pi / (2.0 * m));
}

double max_quantum(int n, int m) {
    check_nm(n, m);
    return 2.0 * std::pow(static_cast<double>(m), n - 1) * std::cos(std::numbers::pi / (2.0 * m));
}

double optimal_ghz_phase(std::string_view pattern, const SettingsTable &settings) {
    settings.validate();
    if (static_cast<int>(pattern.size()) != settings.n) {
        throw std::invalid_argument("pattern length does not match the settings");
    }
    pattern_index(pattern);  // validates the characters
    const CrosstalkMatrix identity = CrosstalkMatrix::identity(settings.n);
    cplx z{0, 0};
    for (const WitnessTerm &t : witness_terms(settings.n, settings.m)) {
        const std::vector<double> psi = effective_z_angles(t.s, settings, identity);
        cplx prod{1, 0};
        for (int j = 0; j < settings.n; ++j) {
            const kernels::Mat2 o = local_observable(psi[static_cast<std::size_t>(j)], settings.theta);
            prod *= pattern[static_cast<std::size_t>(j)] == '0' ? o.a01 : o.a10;
        }
        z += static_cast<double>(t.sign) * prod;
    }
    return std::abs(z) == 0.0 ? 0.0 : -std::arg(z);
}

WitnessReport report(double I_value, double std_error, double B_CT, int n, int m, double B_CT_stderr) {
    if (!std::isfinite(I_value) || !std::isfinite(B_CT)) {
        throw std::invalid_argument("report needs finite witness value and bound");
    }
    if (!(std_error > 0.0) || !(B_CT_stderr >= 0.0)) {
        throw std::invalid_argument("report needs a positive standard error");
    }
    WitnessReport r;
    r.n = n;
    r.m = m;
    r.I_value = I_value;
    r.std_error = std_error;
    r.B = bisep_bound(n, m);
    r.B_CT = B_CT;
    r.B_CT_stderr = B_CT_stderr;
    r.I_max = max_quantum(n, m);
    r.visibility = I_value / r.I_max;
    r.q = I_value > 0 ? (I_value - B_CT) / I_value : std::numeric_limits<double>::quiet_NaN();
    r.sigma_violation = (I_value - B_CT) / std::hypot(std_error, B_CT_stderr);
    return r;
}

nlohmann::json to_json(const WitnessReport &r) {
    auto finite_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    return {
        {"n", r.n},
        {"m", r.m},
        {"B", r.B},
        {"B^CT", r.B_CT},
        {"B^CT stderr", r.B_CT_stderr},
        {"I^exp", r.I_value},
        {"I^exp stderr", r.std_error},
        {"I^exp-B^CT (sigma)", finite_or_null(r.sigma_violation)},
        {"I^max", r.I_max},
        {"V", r.visibility},
        {"q (%)", finite_or_null(100.0 * r.q)},
    };
}

WitnessReport witness_report_from_json(const nlohmann::json &j) {
    WitnessReport r;
    r.n = j.at("n").get<int>();
    r.m = j.at("m").get<int>();
    r.B = j.at("B").get<double>();
    r.B_CT = j.at("B^CT").get<double>();
    r.B_CT_stderr = j.value("B^CT stderr", 0.0);
    r.I_value = j.at("I^exp").get<double>();
    r.std_error = j.at("I^exp stderr").get<double>();
    const auto &sigma = j.at("I^exp-B^CT (sigma)");
    r.sigma_violation = sigma.is_null() ? std::numeric_limits<double>::quiet_NaN() : sigma.get<double>();
    r.I_max = j.at("I^max").get<double>();
    r.visibility = j.at("V").get<double>();
    r.q = j.at("q (%)").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("q (%)").get<double>() / 100.0;
    return r;
}

}  // namespace diew
