// Copyright 2026 The fuzzyref Authors.
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

#ifndef FUZZYREF_RANDOM_H_
#define FUZZYREF_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace fuzzyref {

// Seeded generator with portable draws. std::uniform_*_distribution output is
// implementation-defined, so the conversions are done here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // [0, n)
  uint64_t Below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

  bool Coin() { return (engine_() >> 63) != 0; }

  template <typename T>
  void Shuffle(std::vector<T> &values) {
    for (size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[Below(i)]);
    }
  }

  template <typename T>
  const T &Pick(const std::vector<T> &values) {
    return values[Below(values.size())];
  }

  uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finaliser, for deriving independent seeds.
inline uint64_t MixSeed(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace fuzzyref

#endif  // FUZZYREF_RANDOM_H_
