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

#if defined(DIEW_HAVE_AVX2) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace diew::kernels::detail {
namespace {

// One __m256d holds two complex doubles laid out as [re0, im0, re1, im1].

inline __m256d cmul(__m256d a_re, __m256d a_im, __m256d v) {
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    return _mm256_fmaddsub_pd(a_re, v, _mm256_mul_pd(a_im, swapped));
}

// Stride 1: both amplitudes of a pair share one register, [x0, x1].
void apply_1q_adjacent(cplx *state, std::size_t dim, const Mat2 &u) {
    const __m256d diag_re = _mm256_setr_pd(u.a00.real(), u.a00.real(), u.a11.real(), u.a11.real());
    const __m256d diag_im = _mm256_setr_pd(u.a00.imag(), u.a00.imag(), u.a11.imag(), u.a11.imag());
    const __m256d off_re = _mm256_setr_pd(u.a01.real(), u.a01.real(), u.a10.real(), u.a10.real());
    const __m256d off_im = _mm256_setr_pd(u.a01.imag(), u.a01.imag(), u.a10.imag(), u.a10.imag());
    auto *base = reinterpret_cast<double *>(state);
    for (std::size_t i = 0; i < dim; i += 2) {
        const __m256d x = _mm256_loadu_pd(base + 2 * i);
        const __m256d flipped = _mm256_permute2f128_pd(x, x, 1);
        _mm256_storeu_pd(base + 2 * i, _mm256_add_pd(cmul(diag_re, diag_im, x), cmul(off_re, off_im, flipped)));
    }
}

void apply_1q_avx2(cplx *state, std::size_t dim, std::size_t stride, const Mat2 &u) {
    if (stride == 1 && dim >= 2) {
        apply_1q_adjacent(state, dim, u);
        return;
    }
    if (stride < 2) {
        scalar_table().apply_1q(state, dim, stride, u);
        return;
    }
    const __m256d r00 = _mm256_set1_pd(u.a00.real()), i00 = _mm256_set1_pd(u.a00.imag());
    const __m256d r01 = _mm256_set1_pd(u.a01.real()), i01 = _mm256_set1_pd(u.a01.imag());
    const __m256d r10 = _mm256_set1_pd(u.a10.real()), i10 = _mm256_set1_pd(u.a10.imag());
    const __m256d r11 = _mm256_set1_pd(u.a11.real()), i11 = _mm256_set1_pd(u.a11.imag());
    auto *base = reinterpret_cast<double *>(state);
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
        for (std::size_t i = block; i < block + stride; i += 2) {
            double *p0 = base + 2 * i;
            double *p1 = base + 2 * (i + stride);
            const __m256d x0 = _mm256_loadu_pd(p0);
            const __m256d x1 = _mm256_loadu_pd(p1);
            const __m256d y0 = _mm256_add_pd(cmul(r00, i00, x0), cmul(r01, i01, x1));
            const __m256d y1 = _mm256_add_pd(cmul(r10, i10, x0), cmul(r11, i11, x1));
            _mm256_storeu_pd(p0, y0);
            _mm256_storeu_pd(p1, y1);
        }
    }
}

cplx dot_avx2(const cplx *a, const cplx *b, std::size_t len) {
    const auto *pa = reinterpret_cast<const double *>(a);
    const auto *pb = reinterpret_cast<const double *>(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_im);
    }
    alignas(32) double re[4], im[4];
    _mm256_store_pd(re, acc_re);
    _mm256_store_pd(im, acc_im);
    // acc_im lanes hold [ar*bi, ai*br, ...]; conj(a)*b has im = ar*bi - ai*br.
    cplx total{re[0] + re[1] + re[2] + re[3], im[0] - im[1] + im[2] - im[3]};
    for (; i < len; ++i) {
        total += std::conj(a[i]) * b[i];
    }
    return total;
}

void axpy_avx2(cplx alpha, const cplx *x, cplx *y, std::size_t len) {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    const auto *px = reinterpret_cast<const double *>(x);
    auto *py = reinterpret_cast<double *>(y);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const __m256d vx = _mm256_loadu_pd(px + 2 * i);
        const __m256d vy = _mm256_loadu_pd(py + 2 * i);
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul(ar, ai, vx)));
    }
    for (; i < len; ++i) {
        y[i] += alpha * x[i];
    }
}

}  // namespace

const KernelTable *avx2_table() {
    static const KernelTable t{apply_1q_avx2, dot_avx2, axpy_avx2};
    return &t;
}

}  // namespace diew::kernels::detail

#else

namespace diew::kernels::detail {
const KernelTable *avx2_table() { return nullptr; }
}  // namespace diew::kernels::detail

#endif
