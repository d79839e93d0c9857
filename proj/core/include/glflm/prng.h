// Copyright 2026 The glflm Authors.
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

#ifndef GLFLM_PRNG_H_
#define GLFLM_PRNG_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace glflm {

// SplitMix64 (Steele, Lea & Flood 2014): a 64-bit counter-based generator.
// The state advances by the golden-ratio increment and each output is a
// fixed mix of the counter, so a seed yields the same stream on every
// platform and standard library.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t Next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound) by rejection of the low remainder band.
  // `bound` must be positive.
  uint64_t Uniform(uint64_t bound) {
    const uint64_t reject_below = (0 - bound) % bound;
    while (true) {
      const uint64_t r = Next();
      if (r >= reject_below) return r % bound;
    }
  }

 private:
  uint64_t state_;
};

// Fisher-Yates from the back: for i = n-1 .. 1, swap i with Uniform(i + 1).
template <typename T>
void ShuffleInPlace(std::vector<T>& items, uint64_t seed) {
  SplitMix64 rng(seed);
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = static_cast<size_t>(rng.Uniform(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace glflm

#endif  // GLFLM_PRNG_H_
