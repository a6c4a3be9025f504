// Copyright 2026 The cqtsim Authors
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

#ifndef CQTSIM_RNG_HPP_
#define CQTSIM_RNG_HPP_

#include <array>
#include <cstdint>

namespace cqtsim {

// Seed expander (Steele/Lea/Flood splitmix64). Used only to derive state
// words for the main generator so that nearby seeds decorrelate.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** (Blackman/Vigna). Chosen over std engines so that sampled
// output is bit-identical across standard libraries; uniform doubles are
// derived by hand for the same reason.
class Xoshiro256StarStar {
 public:
  static Xoshiro256StarStar seeded(std::uint64_t seed) {
    SplitMix64 sm(seed);
    Xoshiro256StarStar g;
    for (auto& word : g.state_) word = sm.next();
    return g;
  }

  // Counter-derived substream: run r of a sampling job draws from
  // substream(master_seed, r), so results do not depend on scheduling.
  static Xoshiro256StarStar substream(std::uint64_t master_seed,
                                      std::uint64_t counter) {
    return seeded(master_seed ^ (0x9E3779B97F4A7C15ULL * (counter + 1)));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  Xoshiro256StarStar() = default;

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace cqtsim

#endif  // CQTSIM_RNG_HPP_
