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

#pragma once

// Dense real kernels behind the solver inner loops. Each kernel has a scalar
// reference build and, on x86-64, an AVX2/FMA build. The active table is
// picked once per process: AVX2 when the CPU reports avx2+fma, scalar
// otherwise, and QPT_KERNELS=scalar in the environment forces the reference.

#include <cstddef>
#include <span>
#include <string_view>

namespace qpt::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // y = A x with A row-major rows x cols
    void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
    // g = X X^T with X row-major n x len; g is n x n row-major, both triangles filled
    void (*gram)(const double* x, std::size_t n, std::size_t len, double* g);
    // sum_i w_i r_i^2
    double (*weighted_sumsq)(const double* r, const double* w, std::size_t n);
};

bool isa_available(Isa isa);
const KernelTable& table(Isa isa);
const KernelTable& active();
std::string_view isa_name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline double weighted_sumsq(std::span<const double> r, std::span<const double> w) {
    return active().weighted_sumsq(r.data(), w.data(), r.size());
}

}  // namespace qpt::kernels
