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

#include "eqboost/oracles.hpp"

namespace eqboost {

LabeledExample ex_query(const DiscreteDistribution& dist, const Hypothesis& g,
                        RandomStream& rng) {
  const Index x = sample(dist, rng);
  return LabeledExample{x, g(x)};
}

EqResponse eq_query(const Hypothesis& f, const Hypothesis& g,
                    const DiscreteDistribution& dist, RandomStream& rng) {
  const Mask wrong = disagreement(f, g, dist.size());
  if (dist.mass(wrong) <= 0.0) return EqResponse{true, {}};
  const DiscreteDistribution conditional = restrict(dist, wrong);
  const Index x = sample(conditional, rng);
  // The counterexample's label is inferred: labels are binary and f is wrong
  // at x, so the ground truth there is -f(x).
  return EqResponse{false, LabeledExample{x, -f(x)}};
}

std::optional<std::vector<LabeledExample>> eq_batch(const Hypothesis& f,
                                                    const Hypothesis& g,
                                                    const DiscreteDistribution& dist,
                                                    long long k, RandomStream& rng) {
  if (k < 1) throw OutOfRangeError("eq_batch: k must be >= 1");
  const Mask wrong = disagreement(f, g, dist.size());
  if (dist.mass(wrong) <= 0.0) return std::nullopt;
  const DiscreteDistribution conditional = restrict(dist, wrong);
  const ArrayXi ft = f.evaluate(dist.size());
  std::vector<LabeledExample> out;
  out.reserve(static_cast<std::size_t>(k));
  for (long long i = 0; i < k; ++i) {
    const Index x = sample(conditional, rng);
    out.push_back(LabeledExample{x, -ft[x]});
  }
  return out;
}

}  // namespace eqboost
