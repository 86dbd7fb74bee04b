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

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace qpt::kernels {

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if QPT_HAVE_AVX2_TU && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_available(isa)) {
        throw std::runtime_error("kernel ISA not available on this CPU: " + std::string(isa_name(isa)));
    }
#if QPT_HAVE_AVX2_TU
    if (isa == Isa::avx2) return detail::avx2_table();
#endif
    return detail::scalar_table();
}

const KernelTable& active() {
    static const KernelTable& t = [] () -> const KernelTable& {
        const char* env = std::getenv("QPT_KERNELS");
        if (env != nullptr && std::string(env) == "scalar") return table(Isa::scalar);
        return isa_available(Isa::avx2) ? table(Isa::avx2) : table(Isa::scalar);
    }();
    return t;
}

std::string_view isa_name(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

}  // namespace qpt::kernels
