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
#ifndef ABIDE_RNG_HPP_
#define ABIDE_RNG_HPP_

#include <array>
#include <cstdint>

namespace abide::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;
using Block = std::array<std::uint32_t, 4>;

// Philox-4x32-10 counter-based generator (Salmon et al., SC'11). One call
// turns a (counter, key) pair into four statistically independent 32-bit
// words, so any position of any logical stream can be produced in isolation.
Block philox4x32(Counter counter, Key key);

// Maps a 64-bit word to a double strictly inside (0, 1).
double to_unit_double(std::uint64_t word);

// Uniform draws addressed by (seed, replicate, unit). Draw k of a given unit
// never depends on other units or replicates, which makes population
// generation order-free and parallel-safe.
class UnitStream {
 public:
  UnitStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t unit)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        base_{static_cast<std::uint32_t>(unit),
              static_cast<std::uint32_t>(unit >> 32),
              static_cast<std::uint32_t>(replicate),
              static_cast<std::uint32_t>(replicate >> 32)} {}

  // Draw index k maps to word k of the per-unit Philox block sequence. The
  // block index occupies the top byte of the counter, which limits a unit to
  // 512 draws and replicates to 2^56 — far beyond what the harness uses.
  std::uint64_t uint64(unsigned draw) const;
  double uniform(unsigned draw) const { return to_unit_double(uint64(draw)); }
  double exponential(unsigned draw, double rate) const;
  bool bernoulli(unsigned draw, double probability) const {
    return uniform(draw) < probability;
  }

 private:
  Key key_;
  Counter base_;
};

}  // namespace abide::rng

#endif  // ABIDE_RNG_HPP_
