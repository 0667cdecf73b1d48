// Copyright 2026 The Stormrider Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "stormrider/rng.hpp"

namespace stormrider {
namespace {

TEST(Rng, SameSeedAndStreamRepeat) {
  Rng a(7, 3), b(7, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDiffer) {
  Rng a(7, 3), b(7, 4);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, SplitIgnoresParentPosition) {
  Rng parent(11);
  const Rng early = parent.split(5);
  for (int i = 0; i < 10; ++i) parent.next_u64();
  Rng late = parent.split(5);
  Rng e = early;
  for (int i = 0; i < 20; ++i) EXPECT_EQ(e.next_u64(), late.next_u64());
}

TEST(Rng, DrawDependsOnlyOnKeyAndCounter) {
  Rng r(99);
  const auto key = r.key();
  for (std::uint64_t i = 1; i <= 5; ++i) {
    EXPECT_EQ(r.next_u64(), Rng::mix64(key + i * Rng::kGolden));
  }
}

TEST(Rng, UniformRanges) {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double v = r.uniform_open();
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Rng, BelowCoversRangeEvenly) {
  Rng r(2);
  std::vector<int> hits(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = r.below(7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (const int h : hits) EXPECT_NEAR(h, n / 7.0, 5.0 * std::sqrt(n / 7.0));
}

// Sample moments against the textbook mean and variance.
TEST(Rng, DistributionMoments) {
  Rng r(3);
  const int n = 200000;
  auto moments = [&](auto draw) {
    double s = 0, ss = 0;
    for (int i = 0; i < n; ++i) {
      const double x = draw();
      s += x;
      ss += x * x;
    }
    const double m = s / n;
    return std::pair{m, ss / n - m * m};
  };
  auto [nm, nv] = moments([&] { return r.normal(); });
  EXPECT_NEAR(nm, 0.0, 0.01);
  EXPECT_NEAR(nv, 1.0, 0.02);

  for (const double shape : {0.4, 1.0, 3.5}) {
    auto [gm, gv] = moments([&] { return r.gamma(shape, 2.0); });
    EXPECT_NEAR(gm, shape * 2.0, 0.03 * shape * 2.0);
    EXPECT_NEAR(gv, shape * 4.0, 0.06 * shape * 4.0);
  }
  for (const double mean : {0.3, 4.0, 60.0}) {
    auto [pm, pv] = moments([&] { return static_cast<double>(r.poisson(mean)); });
    EXPECT_NEAR(pm, mean, 0.02 * mean + 0.01);
    EXPECT_NEAR(pv, mean, 0.05 * mean + 0.01);
  }
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(4);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  r.shuffle(std::span<int>(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
  EXPECT_FALSE(std::is_sorted(v.begin(), v.end()));
}

}  // namespace
}  // namespace stormrider
