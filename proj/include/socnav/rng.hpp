// Copyright 2026 The socnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCNAV_RNG_HPP
#define SOCNAV_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace socnav {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Seed of a named sub-stream of `master`. Distinct labels give
/// statistically independent streams.
std::uint64_t stream_seed(std::uint64_t master, std::string_view label);

/// Per-trial seed inside a batch, injective in (cell, trial) for a fixed master.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t cell_index,
                         std::uint64_t trial_index);

/// Uniform double in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

/// Standard normal draw.
double standard_normal(Rng& rng);

}  // namespace socnav

#endif  // SOCNAV_RNG_HPP
