// Copyright 2026 The qpt Authors
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

// Compiled with -mavx2 -mfma. Nothing in here may run before dispatch.cpp has
// confirmed CPU support.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace qpt::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_avx2(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(a + r * cols, x, cols);
}

// Two rows of X against one at a time halves the loads of the shared operand.
void gram_avx2(const double* x, std::size_t n, std::size_t len, double* g) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x + i * len;
        std::size_t j = i;
        for (; j + 2 <= n; j += 2) {
            const double* xj0 = x + j * len;
            const double* xj1 = xj0 + len;
            __m256d acc0 = _mm256_setzero_pd();
            __m256d acc1 = _mm256_setzero_pd();
            std::size_t k = 0;
            for (; k + 4 <= len; k += 4) {
                const __m256d vi = _mm256_loadu_pd(xi + k);
                acc0 = _mm256_fmadd_pd(vi, _mm256_loadu_pd(xj0 + k), acc0);
                acc1 = _mm256_fmadd_pd(vi, _mm256_loadu_pd(xj1 + k), acc1);
            }
            double s0 = hsum(acc0);
            double s1 = hsum(acc1);
            for (; k < len; ++k) {
                s0 += xi[k] * xj0[k];
                s1 += xi[k] * xj1[k];
            }
            g[i * n + j] = g[j * n + i] = s0;
            g[i * n + j + 1] = g[(j + 1) * n + i] = s1;
        }
        for (; j < n; ++j) {
            const double s = dot_avx2(xi, x + j * len, len);
            g[i * n + j] = g[j * n + i] = s;
        }
    }
}

double weighted_sumsq_avx2(const double* r, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vr = _mm256_loadu_pd(r + i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), vr), vr, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * r[i] * r[i];
    return s;
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable t{Isa::avx2, dot_avx2, axpy_avx2, gemv_avx2, gram_avx2,
                               weighted_sumsq_avx2};
    return t;
}

}  // namespace qpt::kernels::detail
