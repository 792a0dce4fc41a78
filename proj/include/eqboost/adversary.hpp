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

#ifndef EQBOOST_ADVERSARY_HPP_
#define EQBOOST_ADVERSARY_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "eqboost/model.hpp"

namespace eqboost {

enum class AdversaryKind { Strong, FixedError, NearestError, BiasedError, Lazy };

AdversaryKind parse_adversary_kind(std::string_view name);
std::string_view adversary_kind_name(AdversaryKind kind);

// The harness is omniscient: it owns the data distribution and the ground
// truth and hands them to the adversary implementations, which is what makes
// exact reply distributions (and hence exact strength testing) possible.
struct GameContext {
  const DiscreteDistribution* dist = nullptr;
  const Hypothesis* g = nullptr;
};

// An attacker: given the classifier under attack and one example-oracle draw,
// returns a point of the feature space. Stateless across rounds (adversaries
// get no transcript access).
class Adversary {
 public:
  virtual ~Adversary() = default;

  // Throws NoErrorExistsError when risk(f) == 0 (converted to YES upstream).
  virtual Index respond(const Hypothesis& f, Index x, RandomStream& rng) = 0;

  // The exact distribution of respond(f, EX, rng) over the feature space.
  virtual ArrayXd reply_distribution(const Hypothesis& f) = 0;

  virtual std::string_view name() const = 0;
};

// kind == BiasedError samples error points with weight D(x) * rank^-beta,
// rank being the 1-based position of the error point in index order.
std::unique_ptr<Adversary> make_adversary(AdversaryKind kind, const GameContext& ctx,
                                          double bias_exponent = 2.0);

struct StrengthTestResult {
  double tv = 0.0;
  bool is_strong = false;
};

// Exact mode: total variation between the adversary's ideal reply
// distribution for f and the true EQ conditional. Throws
// ZeroRiskFunctionError when f has zero risk.
StrengthTestResult strength_test(Adversary& adv, const Hypothesis& f,
                                 const Hypothesis& g, const DiscreteDistribution& dist);

constexpr long long kDefaultStrengthSamples = 1000;
constexpr double kDefaultStrengthTau = 0.1;

// Two-sample mode for non-introspectable adversaries: n_samples respond()
// draws against the exact conditional; strong iff the empirical TV is <= tau.
StrengthTestResult strength_test_empirical(Adversary& adv, const Hypothesis& f,
                                           const Hypothesis& g,
                                           const DiscreteDistribution& dist,
                                           long long n_samples, double tau,
                                           RandomStream& rng);

// The two-sample mode at its default operating point.
StrengthTestResult strength_test_empirical(Adversary& adv, const Hypothesis& f,
                                           const Hypothesis& g,
                                           const DiscreteDistribution& dist,
                                           RandomStream& rng);

}  // namespace eqboost

#endif  // EQBOOST_ADVERSARY_HPP_
