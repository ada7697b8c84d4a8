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

#include "socnav/rng.hpp"

#include <cmath>

namespace socnav {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::string_view label) {
  // FNV-1a over the label, then mixed with the master seed.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return mix64(master ^ mix64(h));
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t cell_index,
                         std::uint64_t trial_index) {
  // mix64 is a bijection, so distinct (cell, trial) pairs below 2^32 each
  // map to distinct seeds.
  return mix64(mix64(master) ^ ((cell_index << 32) | (trial_index & 0xFFFFFFFFull)));
}

double uniform(Rng& rng, double lo, double hi) {
  // 53 random mantissa bits; independent of the standard library's
  // distribution implementation.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double standard_normal(Rng& rng) {
  // Box-Muller without caching, one draw per call.
  double u1 = 0.0;
  do {
    u1 = uniform(rng, 0.0, 1.0);
  } while (u1 <= 0.0);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace socnav
