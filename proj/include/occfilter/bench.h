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

// Wall-clock latency measurement for pipeline stages.

#ifndef OCCFILTER_BENCH_H_
#define OCCFILTER_BENCH_H_

#include <functional>

namespace occfilter {

struct LatencyStats {
  double mean_ms = 0.0;
  double stddev_ms = 0.0;  // Population standard deviation.
  double min_ms = 0.0;
  double max_ms = 0.0;
  int repetitions = 0;
};

// Runs `fn` `warmup` times untimed, then `repetitions` times timed.
// Throws std::invalid_argument if repetitions < 1 or warmup < 0.
LatencyStats BenchRuntime(const std::function<void()>& fn,
                          int repetitions = 100, int warmup = 3);

}  // namespace occfilter

#endif  // OCCFILTER_BENCH_H_
