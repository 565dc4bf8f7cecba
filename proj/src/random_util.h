// Copyright 2026 The occfilter Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OCCFILTER_SRC_RANDOM_UTIL_H_
#define OCCFILTER_SRC_RANDOM_UTIL_H_

#include <cstdint>
#include <random>

namespace occfilter::internal {

// The std distributions are implementation-defined; these are not, so seeded
// outputs are reproducible across standard libraries.
inline double UnitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformReal(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * UnitUniform(rng);
}

// Integer in [lo, hi].
inline int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

}  // namespace occfilter::internal

#endif  // OCCFILTER_SRC_RANDOM_UTIL_H_
