// Copyright 2026 The eqboost Authors
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

#ifndef EQBOOST_RANDOM_HPP_
#define EQBOOST_RANDOM_HPP_

#include <cstdint>

namespace eqboost {

// Deterministic 64-bit stream (xoshiro256++ seeded through splitmix64).
// The standard <random> distributions are not bit-identical across standard
// libraries, so everything downstream draws from this class only.
//
// Parallel trials derive one independent substream per (trial, component)
// by seed mixing; streams with different derivation paths never share state.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream substream(std::uint64_t trial, std::uint64_t component = 0) const;

  std::uint64_t next_u64();
  // Uniform in [0, 1), 53 random bits.
  double next_double();
  // Uniform in [0, bound), unbiased. bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t state_[4] = {};
};

}  // namespace eqboost

#endif  // EQBOOST_RANDOM_HPP_
