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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "diew/kernels.h"

namespace diew::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    static const bool has = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return has;
#else
    return false;
#endif
}

Isa detect() {
    if (std::getenv("DIEW_FORCE_SCALAR") != nullptr) {
        return Isa::scalar;
    }
    return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

struct Selection {
    std::atomic<Isa> isa;
    std::atomic<const KernelTable *> kernels;
};

Selection &current() {
    static Selection sel{detect(), nullptr};
    static const bool init = [] {
        sel.kernels.store(&table(sel.isa.load()));
        return true;
    }();
    (void)init;
    return sel;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
            return detail::avx2_table() != nullptr && cpu_has_avx2();
    }
    return false;
}

const KernelTable &table(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
    }
    return isa == Isa::avx2 ? *detail::avx2_table() : detail::scalar_table();
}

Isa active_isa() { return current().isa.load(std::memory_order_relaxed); }

const KernelTable &active() { return *current().kernels.load(std::memory_order_acquire); }

void force_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
    }
    current().isa.store(isa, std::memory_order_relaxed);
    current().kernels.store(&table(isa), std::memory_order_release);
}

}  // namespace diew::kernels
