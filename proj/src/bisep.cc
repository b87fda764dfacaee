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

#include "diew/bisep.h"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "diew/kernels.h"
#include "diew/rng.h"
#include "parallel.h"

namespace diew {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvPhi = 0.6180339887498949;  // 1 / golden ratio

// Task tags keep the random streams of different search stages disjoint.
enum : std::uint64_t { kTagSeesaw = 1, kTagRefineStart = 2, kTagRefineStep = 3 };

std::uint64_t stage_id(double epsilon, bool angle_search) {
    return std::bit_cast<std::uint64_t>(epsilon) ^ (angle_search ? 0x5bd1e995ULL : 0ULL);
}

/// Index bookkeeping for one cut: basis index x <-> (i over block_a, j over block_b).
struct CutLayout {
    int n = 0;
    std::size_t dim_a = 0, dim_b = 0;
    std::vector<std::size_t> full_index;  // full_index[i * dim_b + j] = x

    explicit CutLayout(const Bipartition &cut) {
        n = static_cast<int>(cut.block_a.size() + cut.block_b.size());
        dim_a = std::size_t{1} << cut.block_a.size();
        dim_b = std::size_t{1} << cut.block_b.size();
        full_index.resize(dim_a * dim_b);
        const auto na = static_cast<int>(cut.block_a.size());
        const auto nb = static_cast<int>(cut.block_b.size());
        for (std::size_t i = 0; i < dim_a; ++i) {
            for (std::size_t j = 0; j < dim_b; ++j) {
                std::size_t x = 0;
                for (int t = 0; t < na; ++t) {
                    if ((i >> (na - 1 - t)) & 1U) {
                        x |= qubit_stride(n, cut.block_a[static_cast<std::size_t>(t)]);
                    }
                }
                for (int t = 0; t < nb; ++t) {
                    if ((j >> (nb - 1 - t)) & 1U) {
                        x |= qubit_stride(n, cut.block_b[static_cast<std::size_t>(t)]);
                    }
                }
                full_index[i * dim_b + j] = x;
            }
        }
    }

    Matrix permute(const Matrix &op) const {
        const auto d = static_cast<Eigen::Index>(full_index.size());
        Matrix out(d, d);
        for (Eigen::Index c = 0; c < d; ++c) {
            for (Eigen::Index r = 0; r < d; ++r) {
                out(r, c) = op(static_cast<Eigen::Index>(full_index[static_cast<std::size_t>(r)]),
                               static_cast<Eigen::Index>(full_index[static_cast<std::size_t>(c)]));
            }
        }
        return out;
    }
};

struct Leading {
    double value;
    Vector vector;
};

Leading leading_eigenpair(const Matrix &h) {
    if (h.rows() == 1) {
        return {h(0, 0).real(), Vector::Ones(1)};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const Eigen::Index last = h.rows() - 1;
    return {solver.eigenvalues()(last), solver.eigenvectors().col(last)};
}

// W_A(b)_{ii'} = sum_{jj'} conj(b_j) W_p[(i,j),(i',j')] b_j'
Matrix contract_with_b(const Matrix &wp, const Vector &b, std::size_t dim_a, std::size_t dim_b) {
    const auto da = static_cast<Eigen::Index>(dim_a), db = static_cast<Eigen::Index>(dim_b);
    Matrix y(wp.rows(), da);
    for (Eigen::Index ip = 0; ip < da; ++ip) {
        y.col(ip) = wp.middleCols(ip * db, db) * b;
    }
    Matrix out(da, da);
    for (Eigen::Index i = 0; i < da; ++i) {
        out.row(i) = b.adjoint() * y.middleRows(i * db, db);
    }
    return 0.5 * (out + out.adjoint());
}

// W_B(a)_{jj'} = sum_{ii'} conj(a_i) W_p[(i,j),(i',j')] a_i'
Matrix contract_with_a(const Matrix &wp, const Vector &a, std::size_t dim_a, std::size_t dim_b) {
    const auto da = static_cast<Eigen::Index>(dim_a), db = static_cast<Eigen::Index>(dim_b);
    Matrix y = Matrix::Zero(wp.rows(), db);
    for (Eigen::Index ip = 0; ip < da; ++ip) {
        y += a(ip) * wp.middleCols(ip * db, db);
    }
    Matrix out = Matrix::Zero(db, db);
    for (Eigen::Index i = 0; i < da; ++i) {
        out += std::conj(a(i)) * y.middleRows(i * db, db);
    }
    return 0.5 * (out + out.adjoint());
}

Vector random_unit_vector(std::size_t dim, Rng &rng) {
    std::normal_distribution<double> gauss;
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = cplx(re, im);
    }
    return v / v.norm();
}

SeesawResult run_seesaw(const Matrix &wp, const CutLayout &layout, const Bipartition &cut, Vector b, int max_iters,
                        double tol) {
    SeesawResult res;
    res.state.cut = cut;
    b /= b.norm();
    double prev = -std::numeric_limits<double>::infinity();
    Vector a;
    for (int it = 1; it <= max_iters; ++it) {
        a = leading_eigenpair(contract_with_b(wp, b, layout.dim_a, layout.dim_b)).vector;
        Leading lb = leading_eigenpair(contract_with_a(wp, a, layout.dim_a, layout.dim_b));
        b = std::move(lb.vector);
        res.history.push_back(lb.value);
        res.value = lb.value;
        res.iterations = it;
        if (std::abs(lb.value - prev) < tol) {
            res.converged = true;
            break;
        }
        prev = lb.value;
    }
    res.state.a = std::move(a);
    res.state.b = std::move(b);
    return res;
}

bool better(double candidate, double incumbent) { return candidate > incumbent; }

std::vector<std::pair<int, int>> support_entries(int n, CrosstalkSupport support) {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) {
                continue;
            }
            if (support == CrosstalkSupport::all_pairs || std::abs(j - k) == 1) {
                out.emplace_back(j, k);
            }
        }
    }
    return out;
}

/// Maximizes a 1-D function on [lo, hi]: uniform grid, then golden-section
/// refinement inside the bracket around the best grid point. Only moves away
/// from `current_x` when strictly better than `current_value`.
template <typename F>
std::pair<double, double> coordinate_maximize(F &&f, double lo, double hi, int grid, double current_x,
                                              double current_value) {
    double best_x = current_x, best_v = current_value;
    const int g = std::max(grid, 3);
    const double step = (hi - lo) / (g - 1);
    int best_i = -1;
    double grid_best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < g; ++i) {
        const double x = lo + i * step;
        const double v = f(x);
        if (v > grid_best) {
            grid_best = v;
            best_i = i;
        }
    }
    double a = lo + std::max(best_i - 1, 0) * step;
    double b = lo + std::min(best_i + 1, g - 1) * step;
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60 && (b - a) > 1e-12 * std::max(1.0, std::abs(hi - lo)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    const double polished_x = fc > fd ? c : d;
    const double polished_v = std::max(fc, fd);
    const double grid_x = lo + best_i * step;
    const auto [cand_x, cand_v] = polished_v >= grid_best ? std::pair{polished_x, polished_v} : std::pair{grid_x, grid_best};
    if (cand_v > best_v) {
        best_x = cand_x;
        best_v = cand_v;
    }
    return {best_x, best_v};
}

/// How the objective depends on C(j, k) with the state and every other
/// entry fixed. Only qubit k's phase moves, by delta_s = dx * phi[j][s] for
/// terms with s_j = s, and each term is a sinusoid in that phase:
///   f(dx) = cos(theta) z + sin(theta) sum_s (cos(delta_s) p_s + sin(delta_s) q_s).
struct CouplingSlice {
    double z = 0, cos_theta = 1, sin_theta = 0;
    std::vector<double> p, q, rate;

    double value(double dx) const {
        double total = 0;
        for (std::size_t s = 0; s < p.size(); ++s) {
            const double delta = dx * rate[s];
            total += std::cos(delta) * p[s] + std::sin(delta) * q[s];
        }
        return cos_theta * z + sin_theta * total;
    }
};

CouplingSlice slice_coupling(const Vector &psi, const SettingsTable &settings, const CrosstalkMatrix &crosstalk,
                             const std::vector<WitnessTerm> &terms, int j, int k) {
    const int n = settings.n;
    const std::size_t d = static_cast<std::size_t>(psi.size());
    const std::size_t stride = qubit_stride(n, k);
    CouplingSlice out;
    out.cos_theta = std::cos(settings.theta);
    out.sin_theta = std::sin(settings.theta);
    out.p.assign(static_cast<std::size_t>(settings.m), 0.0);
    out.q.assign(static_cast<std::size_t>(settings.m), 0.0);
    out.rate = settings.phi[static_cast<std::size_t>(j)];
    Vector work(psi.size());
    for (const WitnessTerm &t : terms) {
        const std::vector<double> angles = effective_z_angles(t.s, settings, crosstalk);
        work = psi;
        std::span<cplx> amps(work.data(), d);
        for (int r = 0; r < n; ++r) {
            if (r != k) {
                kernels::apply_1q(amps, qubit_stride(n, r), local_observable(angles[static_cast<std::size_t>(r)], settings.theta));
            }
        }
        // <psi| P_k |work> for P = X, Y, Z on qubit k
        cplx px{0, 0}, py{0, 0}, pz{0, 0};
        for (std::size_t block = 0; block < d; block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                const cplx c0 = std::conj(psi(static_cast<Eigen::Index>(i)));
                const cplx c1 = std::conj(psi(static_cast<Eigen::Index>(i + stride)));
                const cplx w0 = work(static_cast<Eigen::Index>(i));
                const cplx w1 = work(static_cast<Eigen::Index>(i + stride));
                px += c0 * w1 + c1 * w0;
                py += cplx(0, -1) * c0 * w1 + cplx(0, 1) * c1 * w0;
                pz += c0 * w0 - c1 * w1;
            }
        }
        const double x = t.sign * px.real(), y = t.sign * py.real();
        const double a = angles[static_cast<std::size_t>(k)];
        const auto s = static_cast<std::size_t>(t.s.index[static_cast<std::size_t>(j)]);
        out.z += t.sign * pz.real();
        out.p[s] += std::cos(a) * x + std::sin(a) * y;
        out.q[s] += std::cos(a) * y - std::sin(a) * x;
    }
    return out;
}

struct SearchPoint {
    SettingsTable settings;
    CrosstalkMatrix crosstalk;
    std::optional<ProductState> state;
};

class BiseparableSearch {
   public:
    BiseparableSearch(const SettingsTable &nominal, double epsilon, const OptimizerConfig &cfg)
        : nominal_(nominal),
          epsilon_(epsilon),
          cfg_(cfg),
          terms_(witness_terms(nominal.n, nominal.m)),
          cuts_(enumerate_bipartitions(nominal.n)),
          support_(support_entries(nominal.n, cfg.support)),
          stage_(stage_id(epsilon, cfg.angle_search)) {
        for (const auto &cut : cuts_) {
            layouts_.emplace_back(cut);
        }
    }

    BiseparableOptimum run(const std::vector<BiseparableOptimum> &warm_starts) {
        BiseparableOptimum base = fixed_model_optimum();
        if (epsilon_ == 0.0 && !cfg_.angle_search) {
            return base;
        }
        std::vector<SearchPoint> starts;
        starts.push_back({base.settings, base.crosstalk, base.state});
        for (const auto &w : warm_starts) {
            starts.push_back({w.settings, w.crosstalk, w.state});
        }
        for (int t = 1; t < cfg_.refine_starts; ++t) {
            starts.push_back(random_start(static_cast<std::uint64_t>(t)));
        }
        auto results = detail::parallel_map<BiseparableOptimum>(
            starts.size(), cfg_.threads, [&](std::size_t i) { return ascend(starts[i], i); });
        BiseparableOptimum best = base;
        for (auto &r : results) {
            if (better(r.value, best.value)) {
                best = std::move(r);
            }
        }
        return best;
    }

   private:
    /// Exact outer loop over cuts with the nominal settings and no crosstalk.
    BiseparableOptimum fixed_model_optimum() const {
        const CrosstalkMatrix identity = CrosstalkMatrix::identity(nominal_.n);
        const WitnessOperator w(nominal_, identity);
        auto per_cut = detail::parallel_map<SeesawResult>(cuts_.size(), cfg_.threads, [&](std::size_t c) {
            return seesaw_max_product(w, cuts_[c], cfg_);
        });
        std::size_t best = 0;
        for (std::size_t c = 1; c < per_cut.size(); ++c) {
            if (better(per_cut[c].value, per_cut[best].value)) {
                best = c;
            }
        }
        BiseparableOptimum out;
        out.value = per_cut[best].value;
        out.state = per_cut[best].state;
        out.settings = nominal_;
        out.crosstalk = identity;
        out.converged = per_cut[best].converged;
        return out;
    }

    CrosstalkMatrix base_crosstalk() const {
        CrosstalkMatrix c = CrosstalkMatrix::identity(nominal_.n);
        c.epsilon = epsilon_;
        return c;
    }

    SearchPoint random_start(std::uint64_t t) const {
        Rng rng = make_rng(cfg_.rng_seed, {kTagRefineStart, stage_, t});
        SearchPoint p{nominal_, base_crosstalk(), std::nullopt};
        if (epsilon_ > 0) {
            std::bernoulli_distribution coin;
            for (const auto &[j, k] : support_) {
                p.crosstalk.C(j, k) = coin(rng) ? epsilon_ : -epsilon_;
            }
        }
        if (cfg_.angle_search) {
            std::uniform_real_distribution<double> angle(-kPi, kPi);
            for (auto &row : p.settings.phi) {
                for (double &a : row) {
                    a = angle(rng);
                }
            }
        }
        return p;
    }

    /// Joint ascent: best product state over every cut for the current
    /// measurement model, then coordinate moves on crosstalk and phases.
    BiseparableOptimum ascend(SearchPoint point, std::size_t start_index) const {
        point.crosstalk.epsilon = epsilon_;
        std::optional<ProductState> state = point.state;
        double last = -std::numeric_limits<double>::infinity();
        bool converged = true;
        const double tol = std::max(cfg_.seesaw_tol, 1e-13);
        // Per-cut warm vectors; fresh random restarts only on the first pass.
        std::vector<std::optional<Vector>> warm(cuts_.size());
        for (int outer = 0; outer < cfg_.max_outer_iters; ++outer) {
            const WitnessOperator w(point.settings, point.crosstalk);
            SeesawResult best_state;
            best_state.value = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < cuts_.size(); ++c) {
                const Matrix wp = layouts_[c].permute(w.matrix());
                std::vector<Vector> inits;
                if (warm[c]) {
                    inits.push_back(*warm[c]);
                } else if (state && state->cut.mask() == cuts_[c].mask()) {
                    inits.push_back(state->b);
                }
                if (outer == 0) {
                    for (int r = 0; r < cfg_.refine_restarts; ++r) {
                        Rng rng = make_rng(cfg_.rng_seed, {kTagRefineStep, stage_, start_index, cuts_[c].mask(),
                                                           static_cast<std::uint64_t>(r)});
                        inits.push_back(random_unit_vector(layouts_[c].dim_b, rng));
                    }
                }
                SeesawResult cut_best;
                cut_best.value = -std::numeric_limits<double>::infinity();
                for (auto &b0 : inits) {
                    SeesawResult res =
                        run_seesaw(wp, layouts_[c], cuts_[c], std::move(b0), cfg_.seesaw_max_iters, cfg_.seesaw_tol);
                    if (better(res.value, cut_best.value)) {
                        cut_best = std::move(res);
                    }
                }
                warm[c] = cut_best.state.b;
                if (better(cut_best.value, best_state.value)) {
                    best_state = std::move(cut_best);
                }
            }
            state = best_state.state;
            converged = best_state.converged;
            const Vector psi = state->full();
            double value = best_state.value;
            if (epsilon_ > 0) {
                value = crosstalk_sweeps(psi, point, value);
            }
            if (cfg_.angle_search) {
                value = angle_sweeps(psi, point, value);
            }
            if (value <= last + tol) {
                break;
            }
            last = value;
        }
        BiseparableOptimum out;
        out.state = *state;
        out.settings = point.settings;
        out.crosstalk = point.crosstalk;
        out.value = witness_expectation(out.state.full(), out.settings, out.crosstalk, terms_);
        out.converged = converged;
        return out;
    }

    double crosstalk_sweeps(const Vector &psi, SearchPoint &point, double value) const {
        for (int sweep = 0; sweep < 20; ++sweep) {
            const double before = value;
            for (const auto &[j, k] : support_) {
                const CouplingSlice slice = slice_coupling(psi, point.settings, point.crosstalk, terms_, j, k);
                const double current = point.crosstalk.C(j, k);
                auto f = [&](double x) { return slice.value(x - current); };
                auto [x, v] = coordinate_maximize(f, -epsilon_, epsilon_, cfg_.coordinate_grid, current, f(current));
                point.crosstalk.C(j, k) = std::clamp(x, -epsilon_, epsilon_);
                value = v;
            }
            if (value <= before + 1e-13) {
                break;
            }
        }
        return witness_expectation(psi, point.settings, point.crosstalk, terms_);
    }

    double angle_sweeps(const Vector &psi, SearchPoint &point, double value) const {
        for (int sweep = 0; sweep < 20; ++sweep) {
            const double before = value;
            for (int j = 0; j < point.settings.n; ++j) {
                for (int s = 0; s < point.settings.m; ++s) {
                    double &angle = point.settings.phi[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)];
                    auto f = [&](double x) {
                        angle = x;
                        return witness_expectation(psi, point.settings, point.crosstalk, terms_);
                    };
                    const double current = angle;
                    const double current_value = f(current);
                    if (epsilon_ == 0.0) {
                        // Without crosstalk the objective is a + b cos(x) + c sin(x) in each phase.
                        const double f0 = f(0.0), f1 = f(kPi / 2), f2 = f(kPi);
                        const double mean = 0.5 * (f0 + f2);
                        const double x = std::atan2(f1 - mean, 0.5 * (f0 - f2));
                        const double v = f(x);
                        angle = v > current_value ? x : current;
                        value = std::max(v, current_value);
                    } else {
                        auto [x, v] = coordinate_maximize(f, -kPi, kPi, 2 * cfg_.coordinate_grid, current,
                                                          current_value);
                        angle = x;
                        value = v;
                    }
                }
            }
            if (value <= before + 1e-13) {
                break;
            }
        }
        return witness_expectation(psi, point.settings, point.crosstalk, terms_);
    }

    SettingsTable nominal_;
    double epsilon_;
    OptimizerConfig cfg_;
    std::vector<WitnessTerm> terms_;
    std::vector<Bipartition> cuts_;
    std::vector<CutLayout> layouts_;
    std::vector<std::pair<int, int>> support_;
    std::uint64_t stage_;
};

void certify(BiseparableOptimum &opt) {
    const PureState psi(opt.settings.n, opt.state.full());
    opt.certified_value = diew_value(simulate_table(psi, opt.settings, opt.crosstalk));
}

}  // namespace

std::uint32_t Bipartition::mask() const {
    std::uint32_t m = 0;
    for (int j : block_a) {
        m |= 1U << j;
    }
    return m;
}

std::string Bipartition::label() const {
    std::string out;
    for (std::size_t i = 0; i < block_a.size(); ++i) {
        out += (i ? "," : "") + std::to_string(block_a[i] + 1);
    }
    out += '|';
    for (std::size_t i = 0; i < block_b.size(); ++i) {
        out += (i ? "," : "") + std::to_string(block_b[i] + 1);
    }
    return out;
}

std::vector<Bipartition> enumerate_bipartitions(int n) {
    if (n < 2 || n > kMaxQubits) {
        throw std::invalid_argument("bipartitions need 2 <= n <= 10");
    }
    std::vector<Bipartition> out;
    const std::uint32_t full = (1U << n) - 1;
    for (std::uint32_t mask = 1; mask < full; mask += 2) {  // party 0 always in block_a
        Bipartition p;
        for (int j = 0; j < n; ++j) {
            ((mask >> j) & 1U ? p.block_a : p.block_b).push_back(j);
        }
        out.push_back(std::move(p));
    }
    return out;
}

Vector ProductState::full() const {
    const CutLayout layout(cut);
    Vector out(static_cast<Eigen::Index>(layout.full_index.size()));
    for (std::size_t i = 0; i < layout.dim_a; ++i) {
        for (std::size_t j = 0; j < layout.dim_b; ++j) {
            out(static_cast<Eigen::Index>(layout.full_index[i * layout.dim_b + j])) =
                a(static_cast<Eigen::Index>(i)) * b(static_cast<Eigen::Index>(j));
        }
    }
    return out;
}

WitnessOperator::WitnessOperator(SettingsTable settings, CrosstalkMatrix crosstalk)
    : settings_(std::move(settings)), crosstalk_(std::move(crosstalk)) {
    settings_.validate();
    crosstalk_.validate();
    if (crosstalk_.n != settings_.n) {
        throw std::invalid_argument("settings and crosstalk disagree on n");
    }
    const int n = settings_.n;
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n);
    const std::size_t len = static_cast<std::size_t>(d * d);
    op_ = Matrix::Zero(d, d);
    Matrix term(d, d);
    for (const WitnessTerm &t : witness_terms(n, settings_.m)) {
        const std::vector<double> psi = effective_z_angles(t.s, settings_, crosstalk_);
        term.setIdentity();
        for (Eigen::Index col = 0; col < d; ++col) {
            std::span<cplx> column(term.col(col).data(), static_cast<std::size_t>(d));
            for (int k = 0; k < n; ++k) {
                kernels::apply_1q(column, qubit_stride(n, k),
                                  local_observable(psi[static_cast<std::size_t>(k)], settings_.theta));
            }
        }
        kernels::axpy(static_cast<double>(t.sign), {term.data(), len}, {op_.data(), len});
    }
}

double WitnessOperator::expectation(const Vector &psi) const {
    const Vector w = op_ * psi;
    return kernels::dot({psi.data(), static_cast<std::size_t>(psi.size())},
                        {w.data(), static_cast<std::size_t>(w.size())})
        .real();
}

double WitnessOperator::largest_eigenvalue() const { return leading_eigenpair(op_).value; }

WitnessOperator build_witness_operator(const SettingsTable &settings, const CrosstalkMatrix &crosstalk) {
    return WitnessOperator(settings, crosstalk);
}

double witness_expectation(const Vector &psi, const SettingsTable &settings, const CrosstalkMatrix &crosstalk,
                           const std::vector<WitnessTerm> &terms) {
    const int n = settings.n;
    const std::size_t d = static_cast<std::size_t>(psi.size());
    Vector work(psi.size());
    double total = 0;
    for (const WitnessTerm &t : terms) {
        const std::vector<double> angles = effective_z_angles(t.s, settings, crosstalk);
        work = psi;
        std::span<cplx> amps(work.data(), d);
        for (int k = 0; k < n; ++k) {
            kernels::apply_1q(amps, qubit_stride(n, k), local_observable(angles[static_cast<std::size_t>(k)], settings.theta));
        }
        total += t.sign * kernels::dot({psi.data(), d}, {work.data(), d}).real();
    }
    return total;
}

std::string_view support_name(CrosstalkSupport s) {
    return s == CrosstalkSupport::all_pairs ? "all_pairs" : "nearest_neighbor";
}

CrosstalkSupport parse_support(std::string_view name) {
    if (name == "nearest_neighbor") {
        return CrosstalkSupport::nearest_neighbor;
    }
    if (name == "all_pairs") {
        return CrosstalkSupport::all_pairs;
    }
    throw std::invalid_argument("unknown crosstalk support: " + std::string(name));
}

void OptimizerConfig::validate() const {
    if (restarts < 1 || seesaw_max_iters < 1 || refine_starts < 1 || refine_restarts < 0 || coordinate_grid < 3 ||
        max_outer_iters < 1 || threads < 0) {
        throw std::invalid_argument("optimizer counts must be positive");
    }
    if (!(seesaw_tol > 0)) {
        throw std::invalid_argument("see-saw tolerance must be positive");
    }
}

nlohmann::json to_json(const OptimizerConfig &cfg) {
    return {{"restarts", cfg.restarts},
            {"seesaw_max_iters", cfg.seesaw_max_iters},
            {"seesaw_tol", cfg.seesaw_tol},
            {"angle_search", cfg.angle_search},
            {"rng_seed", cfg.rng_seed},
            {"support", support_name(cfg.support)},
            {"refine_starts", cfg.refine_starts},
            {"refine_restarts", cfg.refine_restarts},
            {"coordinate_grid", cfg.coordinate_grid},
            {"max_outer_iters", cfg.max_outer_iters},
            {"threads", cfg.threads}};
}

OptimizerConfig optimizer_config_from_json(const nlohmann::json &j) {
    OptimizerConfig cfg;
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.seesaw_max_iters = j.value("seesaw_max_iters", cfg.seesaw_max_iters);
    cfg.seesaw_tol = j.value("seesaw_tol", cfg.seesaw_tol);
    cfg.angle_search = j.value("angle_search", cfg.angle_search);
    cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
    cfg.support = parse_support(j.value("support", std::string(support_name(cfg.support))));
    cfg.refine_starts = j.value("refine_starts", cfg.refine_starts);
    cfg.refine_restarts = j.value("refine_restarts", cfg.refine_restarts);
    cfg.coordinate_grid = j.value("coordinate_grid", cfg.coordinate_grid);
    cfg.max_outer_iters = j.value("max_outer_iters", cfg.max_outer_iters);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.validate();
    return cfg;
}

SeesawResult seesaw_from(const WitnessOperator &w, const Bipartition &cut, const Vector &initial_b, int max_iters,
                         double tol) {
    const CutLayout layout(cut);
    if (static_cast<std::size_t>(initial_b.size()) != layout.dim_b) {
        throw std::invalid_argument("initial state does not match block_b");
    }
    return run_seesaw(layout.permute(w.matrix()), layout, cut, initial_b, max_iters, tol);
}

SeesawResult seesaw_max_product(const WitnessOperator &w, const Bipartition &cut, const OptimizerConfig &cfg) {
    cfg.validate();
    const CutLayout layout(cut);
    const Matrix wp = layout.permute(w.matrix());
    SeesawResult best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        Rng rng = make_rng(cfg.rng_seed, {kTagSeesaw, cut.mask(), static_cast<std::uint64_t>(r)});
        SeesawResult res =
            run_seesaw(wp, layout, cut, random_unit_vector(layout.dim_b, rng), cfg.seesaw_max_iters, cfg.seesaw_tol);
        if (better(res.value, best.value)) {
            best = std::move(res);
        }
    }
    return best;
}

BiseparableOptimum maximize_biseparable(const SettingsTable &settings, double epsilon, const OptimizerConfig &cfg,
                                        const std::vector<BiseparableOptimum> &warm_starts) {
    settings.validate();
    cfg.validate();
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("crosstalk bound must be nonnegative");
    }
    for (const auto &w : warm_starts) {
        for (int j = 0; j < w.crosstalk.n; ++j) {
            for (int k = 0; k < w.crosstalk.n; ++k) {
                if (j != k && std::abs(w.crosstalk.C(j, k)) > epsilon) {
                    throw std::invalid_argument("warm start lies outside the crosstalk box");
                }
            }
        }
    }
    BiseparableOptimum opt = BiseparableSearch(settings, epsilon, cfg).run(warm_starts);
    certify(opt);
    return opt;
}

BoundResult optimize_crosstalk_bound(int n, int m, const SettingsTable &settings, double epsilon,
                                     const OptimizerConfig &cfg) {
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("crosstalk bound must be nonnegative");
    }
    if (settings.n != n || settings.m != m) {
        throw std::invalid_argument("settings table does not match (n, m)");
    }
    BoundResult r;
    r.n = n;
    r.m = m;
    r.epsilon = epsilon;
    r.B = bisep_bound(n, m);
    r.zero_argmax = maximize_biseparable(settings, 0.0, cfg);
    r.eps_argmax = epsilon > 0 ? maximize_biseparable(settings, epsilon, cfg, {r.zero_argmax}) : r.zero_argmax;
    r.I_bisep_zero = r.zero_argmax.value;
    r.I_bisep_eps = r.eps_argmax.value;
    r.delta_CT = r.I_bisep_eps - r.I_bisep_zero;
    r.B_CT = r.B + r.delta_CT;
    return r;
}

std::vector<BoundResult> crosstalk_bound_scan(int n, int m, const SettingsTable &settings,
                                              const std::vector<double> &epsilons, const OptimizerConfig &cfg) {
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] >= 0.0) || (i > 0 && epsilons[i] < epsilons[i - 1])) {
            throw std::invalid_argument("epsilon grid must be nonnegative and nondecreasing");
        }
    }
    std::vector<BoundResult> out;
    if (epsilons.empty()) {
        return out;
    }
    const BiseparableOptimum zero = maximize_biseparable(settings, 0.0, cfg);
    std::optional<BiseparableOptimum> previous;
    for (double eps : epsilons) {
        BoundResult r;
        r.n = n;
        r.m = m;
        r.epsilon = eps;
        r.B = bisep_bound(n, m);
        r.zero_argmax = zero;
        if (eps == 0.0) {
            r.eps_argmax = zero;
        } else {
            std::vector<BiseparableOptimum> warm{zero};
            if (previous) {
                warm.push_back(*previous);
            }
            r.eps_argmax = maximize_biseparable(settings, eps, cfg, warm);
        }
        previous = r.eps_argmax;
        r.I_bisep_zero = zero.value;
        r.I_bisep_eps = r.eps_argmax.value;
        r.delta_CT = r.I_bisep_eps - r.I_bisep_zero;
        r.B_CT = r.B + r.delta_CT;
        out.push_back(std::move(r));
    }
    return out;
}

namespace {
nlohmann::json vector_json(const Vector &v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back({v(i).real(), v(i).imag()});
    }
    return out;
}
}  // namespace

nlohmann::json to_json(const BiseparableOptimum &opt) {
    return {{"value", opt.value},
            {"certified_value", opt.certified_value},
            {"converged", opt.converged},
            {"bipartition", opt.state.cut.label()},
            {"state_a", vector_json(opt.state.a)},
            {"state_b", vector_json(opt.state.b)},
            {"measurement", measurement_config_json(opt.settings, opt.crosstalk)}};
}

nlohmann::json to_json(const BoundResult &r) {
    return {{"n", r.n},
            {"m", r.m},
            {"epsilon", r.epsilon},
            {"B", r.B},
            {"I_bisep_eps", r.I_bisep_eps},
            {"I_bisep_zero", r.I_bisep_zero},
            {"delta_CT", r.delta_CT},
            {"B^CT", r.B_CT},
            {"converged", r.converged()},
            {"argmax_eps", to_json(r.eps_argmax)},
            {"argmax_zero", to_json(r.zero_argmax)}};
}

}  // namespace diew
