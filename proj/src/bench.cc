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

#include "occfilter/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace occfilter {

LatencyStats BenchRuntime(const std::function<void()>& fn, int repetitions,
                          int warmup) {
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (warmup < 0) throw std::invalid_argument("warmup must be >= 0");
  for (int i = 0; i < warmup; ++i) fn();

  using Clock = std::chrono::steady_clock;
  std::vector<double> samples;
  samples.reserve(repetitions);
  for (int i = 0; i < repetitions; ++i) {
    const auto start = Clock::now();
    fn();
    const std::chrono::duration<double, std::milli> elapsed =
        Clock::now() - start;
    samples.push_back(elapsed.count());
  }

  LatencyStats stats;
  stats.repetitions = repetitions;
  double sum = 0.0;
  for (double s : samples) sum += s;
  stats.mean_ms = sum / repetitions;
  double sq = 0.0;
  for (double s : samples) sq += (s - stats.mean_ms) * (s - stats.mean_ms);
  stats.stddev_ms = std::sqrt(sq / repetitions);
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  stats.min_ms = *lo;
  stats.max_ms = *hi;
  return stats;
}

}  // namespace occfilter
