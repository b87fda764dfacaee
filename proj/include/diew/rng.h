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

#ifndef DIEW_RNG_H
#define DIEW_RNG_H

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace diew {

using Rng = std::mt19937_64;

/// Mixes a root seed with task coordinates (set index, restart index, ...)
/// into an independent sub-seed. Results depend only on the inputs, so
/// work can be split across threads without changing any output.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

inline Rng make_rng(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(root, path));
}

/// Multinomial draw of `trials` items over `probabilities` by chained
/// conditional binomials. Probabilities need not be normalized exactly;
/// tiny negative entries are clamped to zero.
std::vector<std::uint64_t> sample_multinomial(std::uint64_t trials, std::span<const double> probabilities,
                                              Rng &rng);

}  // namespace diew

#endif
