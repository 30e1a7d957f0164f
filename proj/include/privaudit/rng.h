//
// Copyright 2026 The privaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRIVAUDIT_RNG_H_
#define PRIVAUDIT_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace privaudit {

// Identifies the full random-number pipeline. Any change to the engine, the
// seed derivation, or the uniform/normal/shuffle transforms below must bump
// this string, since reports record it to make audits reproducible.
inline constexpr char kPrngVersion[] =
    "mt19937_64+splitmix64-derive+u53+box-muller+fisher-yates/v1";

// Mixes a stream index into a seed (splitmix64 finalizer). Used to give every
// independent consumer (split, init, shadow k, sweep point k, ...) its own
// stream from a single master seed.
uint64_t DeriveSeed(uint64_t seed, uint64_t stream);

// Seeded generator with fully specified output. std::mt19937_64 is pinned by
// the standard; the distributions in <random> are not, so the transforms are
// implemented here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch only, two uniforms per
  // draw).
  double Normal();

  // Uniform integer in [0, n) by rejection; n must be positive.
  size_t UniformIndex(size_t n);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[UniformIndex(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace privaudit

#endif  // PRIVAUDIT_RNG_H_
