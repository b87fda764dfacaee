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

#ifndef DIEW_KERNELS_H
#define DIEW_KERNELS_H

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace diew::kernels {

using cplx = std::complex<double>;

/// Row-major 2x2 complex matrix acting on a single qubit.
struct Mat2 {
    cplx a00, a01, a10, a11;
};

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// The inner loops that dominate runtime. Every entry has a scalar reference
/// implementation; vector variants must agree with it to rounding.
struct KernelTable {
    /// Applies `u` to the qubit whose amplitude index bit is `stride`
    /// (a power of two) across the whole vector.
    void (*apply_1q)(cplx *state, std::size_t dim, std::size_t stride, const Mat2 &u);
    /// sum_i conj(a[i]) * b[i]
    cplx (*dot)(const cplx *a, const cplx *b, std::size_t len);
    /// y[i] += alpha * x[i]
    void (*axpy)(cplx alpha, const cplx *x, cplx *y, std::size_t len);
};

const KernelTable &table(Isa isa);
bool isa_supported(Isa isa);

/// Picked once on first use: the widest supported ISA unless the
/// DIEW_FORCE_SCALAR environment variable is set.
Isa active_isa();
const KernelTable &active();

/// Overrides the runtime choice (tests and benchmarks). Throws if `isa`
/// is not supported on this CPU.
void force_isa(Isa isa);

// Thin span-based wrappers over the active table.
inline void apply_1q(std::span<cplx> state, std::size_t stride, const Mat2 &u) {
    active().apply_1q(state.data(), state.size(), stride, u);
}
inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

namespace detail {
const KernelTable &scalar_table();
const KernelTable *avx2_table();  // nullptr when not compiled in
}  // namespace detail

}  // namespace diew::kernels

#endif
