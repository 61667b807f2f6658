/*
 * Copyright 2026 The Abide Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "abide/rng.hpp"

#include <cmath>
#include <set>

#include "gtest/gtest.h"

namespace abide::rng {
namespace {

// Reference vectors from the Random123 known-answer tests for
// philox4x32-10.
TEST(Philox, KnownAnswerVectors) {
  EXPECT_EQ(philox4x32({0u, 0u, 0u, 0u}, {0u, 0u}),
            (Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                       {0xffffffffu, 0xffffffffu}),
            (Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                       {0xa4093822u, 0x299f31d0u}),
            (Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, CounterAndKeySensitivity) {
  const Block base = philox4x32({1u, 2u, 3u, 4u}, {5u, 6u});
  EXPECT_NE(base, philox4x32({1u, 2u, 3u, 5u}, {5u, 6u}));
  EXPECT_NE(base, philox4x32({1u, 2u, 3u, 4u}, {5u, 7u}));
}

TEST(UnitStream, DeterministicAndAddressable) {
  const UnitStream stream(42, 7, 123456);
  const UnitStream same(42, 7, 123456);
  for (unsigned draw = 0; draw < 8; ++draw) {
    EXPECT_EQ(stream.uint64(draw), same.uint64(draw));
  }
  const UnitStream other_unit(42, 7, 123457);
  const UnitStream other_replicate(42, 8, 123456);
  const UnitStream other_seed(43, 7, 123456);
  EXPECT_NE(stream.uint64(0), other_unit.uint64(0));
  EXPECT_NE(stream.uint64(0), other_replicate.uint64(0));
  EXPECT_NE(stream.uint64(0), other_seed.uint64(0));
}

TEST(UnitStream, DrawsAreDistinctWords) {
  const UnitStream stream(1, 0, 0);
  std::set<std::uint64_t> seen;
  for (unsigned draw = 0; draw < 32; ++draw) {
    seen.insert(stream.uint64(draw));
  }
  EXPECT_EQ(seen.size(), 32u);
}

TEST(UnitStream, UniformStrictlyInsideUnitInterval) {
  const UnitStream stream(987, 1, 55);
  for (unsigned draw = 0; draw < 1000; ++draw) {
    const double u = stream.uniform(draw);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_GT(to_unit_double(0), 0.0);
  EXPECT_LT(to_unit_double(~std::uint64_t{0}), 1.0);
}

TEST(UnitStream, ExponentialMatchesRateInMean) {
  double sum = 0.0;
  const int n = 200000;
  for (int unit = 0; unit < n; ++unit) {
    sum += UnitStream(3, 0, unit).exponential(0, 2.0);
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}

}  // namespace
}  // namespace abide::rng
