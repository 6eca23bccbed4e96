// Copyright 2026 The lprlab Authors.
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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lprlab/rng.hpp"

using namespace lprlab;

TEST(Rng, DeriveSeedIsDeterministicAndKeySensitive) {
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 10000; ++k) seen.insert(derive_seed(3, {k}));
  EXPECT_EQ(seen.size(), 10000U);
}

TEST(Rng, SplitMixMatchesPublishedSequence) {
  // Reference outputs of the SplitMix64 generator seeded with 0: successive
  // states are k * golden gamma, so output k is splitmix64((k-1) * gamma).
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(0x9E3779B97F4A7C15ULL), 0x6E789E6AA1B965F4ULL);
}

TEST(Rng, UniformStaysInHalfOpenUnitInterval) {
  Engine rng(42);
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalConsumesTwoDrawsAndHasUnitMoments) {
  Engine a(9), b(9);
  standard_normal(a);
  b();
  b();
  EXPECT_EQ(a(), b());

  Engine rng(5);
  const int count = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < count; ++i) {
    const double z = standard_normal(rng);
    sum += z;
    sq += z * z;
  }
  const double mean = sum / count;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(sq / count - mean * mean, 1.0, 0.02);
}
