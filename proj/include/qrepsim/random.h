// Copyright 2026 The qrepsim Authors
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

#ifndef QREPSIM_RANDOM_H_
#define QREPSIM_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace qrepsim {

using Rng = std::mt19937_64;

// Independent RNG streams per subsystem, so that changing how many draws one
// subsystem makes does not perturb another.
enum class SeedStream : std::uint64_t {
  kTopology = 1,
  kAttributes = 2,
  kInitialUp = 3,
  kPlacement = 4,
  kWorkload = 5,
  kRuntime = 6,
  kChurn = 7,
};

// splitmix64 finalizer over (seed, stream).
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

inline std::uint64_t DeriveSeed(std::uint64_t seed, SeedStream stream) {
  return DeriveSeed(seed, static_cast<std::uint64_t>(stream));
}

inline Rng MakeRng(std::uint64_t seed, SeedStream stream) {
  return Rng(DeriveSeed(seed, stream));
}

// Uniform index in [0, n). n must be > 0.
inline std::size_t UniformIndex(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Moves a uniformly chosen subset of size min(count, items.size()) to the
// front of `items` (partial Fisher-Yates) and truncates to it.
template <typename T>
void SampleWithoutReplacement(std::vector<T>& items, std::size_t count,
                              Rng& rng) {
  if (count > items.size()) count = items.size();
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + UniformIndex(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(count);
}

}  // namespace qrepsim

#endif  // QREPSIM_RANDOM_H_
