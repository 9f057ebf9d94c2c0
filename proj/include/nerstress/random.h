//
// Copyright 2026 The nerstress Authors
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

#ifndef NERSTRESS_RANDOM_H_
#define NERSTRESS_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace nerstress {

// 64-bit FNV-1a. Stable across platforms; used for seed derivation only.
std::uint64_t Fnv1a64(std::string_view data);

// Mixes a global seed with an ordered list of keys. Every randomized
// per-item decision seeds from this so results do not depend on processing
// order or worker count.
std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::string_view> keys);

// Seeded generator with platform-independent helpers. The standard
// distributions are implementation-defined, so they are not used anywhere
// output must be byte-stable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

  bool Coin() { return (Next() >> 63) != 0; }

  // Uniform sample of k distinct indices from [0, n), returned ascending.
  std::vector<std::size_t> SampleIndices(std::size_t n, std::size_t k);

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformIndex(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

}  // namespace nerstress

#endif  // NERSTRESS_RANDOM_H_
