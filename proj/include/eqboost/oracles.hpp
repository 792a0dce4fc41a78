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

#ifndef EQBOOST_ORACLES_HPP_
#define EQBOOST_ORACLES_HPP_

#include <optional>
#include <vector>

#include "eqboost/model.hpp"

namespace eqboost {

// Equivalence-query reply: YES when the queried classifier has zero risk,
// otherwise a counterexample drawn from the exact conditional on the
// disagreement set, labeled with the ground truth (= -f at the point).
struct EqResponse {
  bool yes = false;
  LabeledExample counterexample;
};

// Example query: a point drawn from dist, labeled by the ground truth g.
LabeledExample ex_query(const DiscreteDistribution& dist, const Hypothesis& g,
                        RandomStream& rng);

EqResponse eq_query(const Hypothesis& f, const Hypothesis& g,
                    const DiscreteDistribution& dist, RandomStream& rng);

// k i.i.d. equivalence-query samples for f, or nullopt when the oracle
// answers YES. Draws exactly as k repetitions of eq_query on the same stream.
std::optional<std::vector<LabeledExample>> eq_batch(const Hypothesis& f,
                                                    const Hypothesis& g,
                                                    const DiscreteDistribution& dist,
                                                    long long k, RandomStream& rng);

}  // namespace eqboost

#endif  // EQBOOST_ORACLES_HPP_
