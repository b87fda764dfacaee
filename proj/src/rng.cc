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

#include "diew/rng.h"

#include <algorithm>

namespace diew {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t p : path) {
        h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
}

std::vector<std::uint64_t> sample_multinomial(std::uint64_t trials, std::span<const double> probabilities,
                                              Rng &rng) {
    std::vector<std::uint64_t> out(probabilities.size(), 0);
    double remaining_mass = 0;
    for (double p : probabilities) {
        remaining_mass += std::max(p, 0.0);
    }
    std::uint64_t remaining = trials;
    for (std::size_t i = 0; i < probabilities.size() && remaining > 0; ++i) {
        const double p = std::max(probabilities[i], 0.0);
        if (i + 1 == probabilities.size() || p >= remaining_mass) {
            out[i] = remaining;
            remaining = 0;
            break;
        }
        if (p > 0) {
            std::binomial_distribution<std::uint64_t> draw(remaining, std::clamp(p / remaining_mass, 0.0, 1.0));
            out[i] = draw(rng);
            remaining -= out[i];
        }
        remaining_mass -= p;
    }
    return out;
}

}  // namespace diew
