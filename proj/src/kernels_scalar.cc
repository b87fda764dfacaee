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

#include "diew/kernels.h"

namespace diew::kernels::detail {
namespace {

void apply_1q_scalar(cplx *state, std::size_t dim, std::size_t stride, const Mat2 &u) {
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
        for (std::size_t i = block; i < block + stride; ++i) {
            const cplx x0 = state[i];
            const cplx x1 = state[i + stride];
            state[i] = u.a00 * x0 + u.a01 * x1;
            state[i + stride] = u.a10 * x0 + u.a11 * x1;
        }
    }
}

cplx dot_scalar(const cplx *a, const cplx *b, std::size_t len) {
    double re = 0, im = 0;
    for (std::size_t i = 0; i < len; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

void axpy_scalar(cplx alpha, const cplx *x, cplx *y, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        y[i] += alpha * x[i];
    }
}

}  // namespace

const KernelTable &scalar_table() {
    static const KernelTable t{apply_1q_scalar, dot_scalar, axpy_scalar};
    return t;
}

}  // namespace diew::kernels::detail
