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

#include <stdexcept>

#include "gtest/gtest.h"

namespace occfilter {
namespace {

TEST(BenchRuntimeTest, SingleRepetitionHasZeroSpread) {
  int calls = 0;
  const LatencyStats s = BenchRuntime([&] { ++calls; }, 1, 3);
  EXPECT_EQ(calls, 4);
  EXPECT_EQ(s.repetitions, 1);
  EXPECT_EQ(s.stddev_ms, 0.0);
  EXPECT_EQ(s.min_ms, s.max_ms);
}

TEST(BenchRuntimeTest, MeanWithinRange) {
  volatile double sink = 0;
  const LatencyStats s = BenchRuntime(
      [&] {
        for (int i = 0; i < 20000; ++i) sink = sink + i;
      },
      25);
  EXPECT_LE(s.min_ms, s.mean_ms);
  EXPECT_LE(s.mean_ms, s.max_ms);
  EXPECT_GE(s.stddev_ms, 0.0);
}

TEST(BenchRuntimeTest, RejectsZeroRepetitions) {
  EXPECT_THROW(BenchRuntime([] {}, 0), std::invalid_argument);
}

}  // namespace
}  // namespace occfilter
