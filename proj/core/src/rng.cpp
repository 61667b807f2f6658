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

namespace abide::rng {

namespace {

constexpr std::uint32_t kMultiplier0 = 0xD2511F53u;
constexpr std::uint32_t kMultiplier1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Block philox4x32(Counter counter, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kMultiplier0, counter[0], hi0, lo0);
    mul_hi_lo(kMultiplier1, counter[2], hi1, lo1);
    counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
  }
  return counter;
}

double to_unit_double(std::uint64_t word) {
  // 53-bit mantissa shifted into (0, 1); the half-step offset excludes both
  // endpoints so log() and logit() stay finite.
  return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t UnitStream::uint64(unsigned draw) const {
  const unsigned block = draw / 2;
  Counter counter = base_;
  counter[3] |= static_cast<std::uint32_t>(block) << 24;
  const Block words = philox4x32(counter, key_);
  const unsigned offset = (draw % 2) * 2;
  return (static_cast<std::uint64_t>(words[offset]) << 32) | words[offset + 1];
}

double UnitStream::exponential(unsigned draw, double rate) const {
  return -std::log(uniform(draw)) / rate;
}

}  // namespace abide::rng
