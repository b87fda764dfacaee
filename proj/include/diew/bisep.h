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

#ifndef DIEW_BISEP_H
#define DIEW_BISEP_H

#include <cstdint>
#include <string_view>
#include <vector>

#include "diew/measurement.h"
#include "diew/state.h"
#include "diew/witness.h"
#include "json.hpp"

namespace diew {

/// Split of the parties (0-based) into two nonempty blocks. The canonical
/// form puts party 0 in block_a, so each cut appears once.
struct Bipartition {
    std::vector<int> block_a, block_b;

    /// Bit j set for every party of block_a.
    std::uint32_t mask() const;
    std::string label() const;  // e.g. "1,2|3" with 1-based parties
};

/// The 2^(n-1) - 1 canonical bipartitions, ordered by block_a mask.
std::vector<Bipartition> enumerate_bipartitions(int n);

/// Hermitian operator whose expectation on rho equals the witness value of
/// the statistics produced by measuring rho with `settings` under `crosstalk`.
class WitnessOperator {
   public:
    WitnessOperator(SettingsTable settings, CrosstalkMatrix crosstalk);

    const Matrix &matrix() const { return op_; }
    const SettingsTable &settings() const { return settings_; }
    const CrosstalkMatrix &crosstalk() const { return crosstalk_; }
    int parties() const { return settings_.n; }

    double expectation(const Vector &psi) const;
    double largest_eigenvalue() const;

   private:
    SettingsTable settings_;
    CrosstalkMatrix crosstalk_;
    Matrix op_;
};

WitnessOperator build_witness_operator(const SettingsTable &settings, const CrosstalkMatrix &crosstalk);

/// <psi| I(settings, crosstalk) |psi> evaluated term by term, without forming
/// the operator. Used inside the parameter searches.
double witness_expectation(const Vector &psi, const SettingsTable &settings, const CrosstalkMatrix &crosstalk,
                           const std::vector<WitnessTerm> &terms);

/// Which off-diagonal crosstalk entries the adversarial search may move.
enum class CrosstalkSupport { nearest_neighbor, all_pairs };

std::string_view support_name(CrosstalkSupport s);
CrosstalkSupport parse_support(std::string_view name);

struct OptimizerConfig {
    int restarts = 50;
    int seesaw_max_iters = 500;
    double seesaw_tol = 1e-10;
    bool angle_search = false;
    std::uint64_t rng_seed = 1;

    CrosstalkSupport support = CrosstalkSupport::nearest_neighbor;
    /// Independent starting points for the joint state/crosstalk/angle ascent.
    int refine_starts = 16;
    /// Random see-saw restarts per cut inside each ascent step (besides the warm start).
    int refine_restarts = 2;
    /// Grid points per coordinate before golden-section polishing.
    int coordinate_grid = 9;
    int max_outer_iters = 60;
    /// Worker threads; 0 picks the hardware concurrency. Output never depends on it.
    int threads = 0;

    void validate() const;
};

nlohmann::json to_json(const OptimizerConfig &cfg);
OptimizerConfig optimizer_config_from_json(const nlohmann::json &j);

/// |a> on block_a times |b> on block_b.
struct ProductState {
    Bipartition cut;
    Vector a, b;

    /// The 2^n amplitude vector in the usual party order.
    Vector full() const;
};

struct SeesawResult {
    double value = 0;
    ProductState state;
    int iterations = 0;
    bool converged = false;
    /// Objective after each full iteration of the best run.
    std::vector<double> history;
};

/// One see-saw run from a given |b>: alternately replace |a> and |b> by the
/// leading eigenvector of the operator contracted with the other factor.
SeesawResult seesaw_from(const WitnessOperator &w, const Bipartition &cut, const Vector &initial_b,
                         int max_iters, double tol);

/// Best of cfg.restarts see-saw runs from seeded random |b>.
SeesawResult seesaw_max_product(const WitnessOperator &w, const Bipartition &cut, const OptimizerConfig &cfg);

struct BiseparableOptimum {
    double value = 0;
    /// Value recomputed from the argmax through the measurement simulation.
    double certified_value = 0;
    ProductState state;
    SettingsTable settings;
    CrosstalkMatrix crosstalk;
    bool converged = true;
};

struct BoundResult {
    int n = 0, m = 0;
    double epsilon = 0;
    double I_bisep_eps = 0;
    double I_bisep_zero = 0;
    double delta_CT = 0;
    double B = 0;
    double B_CT = 0;
    BiseparableOptimum eps_argmax;
    BiseparableOptimum zero_argmax;

    bool converged() const { return eps_argmax.converged && zero_argmax.converged; }
};

/// Largest witness value over biseparable states for the given measurement
/// model; crosstalk entries on the configured support range over
/// [-epsilon, epsilon] and, with angle_search, the phases are free too.
/// `warm_starts` are feasible points to start from (they must fit epsilon).
BiseparableOptimum maximize_biseparable(const SettingsTable &settings, double epsilon, const OptimizerConfig &cfg,
                                        const std::vector<BiseparableOptimum> &warm_starts = {});

/// Worst-case crosstalk shift of the biseparable bound:
/// delta = I_bisep(epsilon) - I_bisep(0), B_CT = B + delta.
BoundResult optimize_crosstalk_bound(int n, int m, const SettingsTable &settings, double epsilon,
                                     const OptimizerConfig &cfg);

/// optimize_crosstalk_bound over an increasing epsilon grid, each point
/// warm-started from the previous optimum (a feasible point of the larger box).
std::vector<BoundResult> crosstalk_bound_scan(int n, int m, const SettingsTable &settings,
                                              const std::vector<double> &epsilons, const OptimizerConfig &cfg);

nlohmann::json to_json(const BiseparableOptimum &opt);
nlohmann::json to_json(const BoundResult &r);

}  // namespace diew

#endif
