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

#ifndef EQBOOST_LEARNERS_HPP_
#define EQBOOST_LEARNERS_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "eqboost/model.hpp"
#include "eqboost/oracles.hpp"
#include "eqboost/voting.hpp"

namespace eqboost {

enum class ScheduleMode { Theory, Practical };

struct ScheduleOverrides {
  std::optional<double> c_m;
  std::optional<double> c_t;
};

// Derived run parameters for the boosting learner.
//
// Theory mode (reporting; B blows up fast):
//   eps_prime = eps / (1e5 * log2(1/eps)^4)
//   B = 2*ceil(log2(1/eps_prime)) + 1
//   m = ceil(c_m * (d + log2(B^4) + log2(1/delta)) * B^4)
//   t = ceil(c_t * B^3)
// Practical mode (the executable path): eps_prime = eps, same B and t,
// and m = ceil(c_m * (d + log2(1/delta))) — the batch size the consistency
// argument needs per region, without the worst-case oversampling factor.
struct Schedule {
  double epsilon = 0;
  double delta = 0;
  double eps_prime = 0;
  int bound = 0;        // B
  long long batch_size = 0;  // m
  long long rounds = 0;      // t
  double c_m = 0;
  double c_t = 0;
  int vc = 0;  // d
  ScheduleMode mode = ScheduleMode::Practical;

  long long distinct_function_bound() const { return rounds * (bound + 1); }
  // m * t * (B+1), as a double (Theory-mode values overflow 64-bit ints).
  double query_bound() const;
};

constexpr double kDefaultCm = 128.0;
constexpr double kDefaultCt = 10.0;

// Theory mode requires epsilon in (0, 1/32); Practical accepts any (0,1).
Schedule schedule_params(double epsilon, double delta, int d, ScheduleMode mode,
                         const ScheduleOverrides& overrides = {});

struct QueryStats {
  long long eq_queries = 0;          // counterexamples requested (m per non-YES batch)
  long long distinct_functions = 0;  // distinct classifiers sent to the oracle
  long long rounds = 0;              // outer iterations executed
  bool early_stop = false;           // YES on a majority query, or target risk reached
};

// Source of labeled counterexamples for arbitrary classifiers: the exact EQ
// oracle, or an adversary wrapped by the game harness. nullopt means YES.
class CounterexampleSource {
 public:
  virtual ~CounterexampleSource() = default;
  virtual std::optional<std::vector<LabeledExample>> request(const Hypothesis& f,
                                                             long long m) = 0;
};

class ExactEqSource final : public CounterexampleSource {
 public:
  ExactEqSource(const DiscreteDistribution& dist, Hypothesis g, RandomStream rng)
      : dist_(&dist), g_(std::move(g)), rng_(rng) {}
  std::optional<std::vector<LabeledExample>> request(const Hypothesis& f,
                                                     long long m) override {
    return eq_batch(f, g_, *dist_, m, rng_);
  }

 private:
  const DiscreteDistribution* dist_;
  Hypothesis g_;
  RandomStream rng_;
};

// Returns a class member agreeing with every sample, or nullopt when none
// exists (conflicting labels, or more structure than the class can express).
// The choice is canonical per class:
//   Thresholds          leftmost consistent threshold (max negative + 1)
//   Intervals           tightest interval around the positives (empty union
//                       when there are none)
//   UnionOfKIntervals   tight interval per positive cluster, clusters split
//                       at negative samples
//   ExplicitFinite      first consistent member in class order
std::optional<Hypothesis> find_consistent(const HypothesisClass& cls,
                                          std::span<const LabeledExample> samples,
                                          Index n);

// ceil((d*log2(1/eps) + log2(1/delta)) / eps), the realizable-case PAC bound.
long long pac_sample_size(int d, double epsilon, double delta);

struct PacResult {
  Hypothesis hypothesis;
  long long samples_used = 0;
};

// Draws pac_sample_size examples and returns a consistent member. Throws
// InternalError if no consistent member exists (impossible when g is in the
// class).
PacResult pac_learn(const HypothesisClass& cls, const DiscreteDistribution& dist,
                    const Hypothesis& g, double epsilon, double delta,
                    RandomStream& rng);

struct EqLearnOptions {
  std::optional<Hypothesis> initial_hypothesis;  // default: class canonical element
  // Omniscient exact-risk probe; with stop_at_target set (Practical mode
  // only), the run returns as soon as the current majority has risk <= eps.
  std::function<double(const Hypothesis&)> exact_risk;
  bool stop_at_target = false;
  // Theory-mode executions abort with ScheduleInfeasibleError when
  // m*t*(B+1) exceeds this.
  double query_budget = 1e8;
  // Called once per completed round, before the new member joins the
  // committee: (round index, state before extension, chosen member).
  std::function<void(long long round, const VoteState& state, const Hypothesis& next)>
      observer;
  // Called at the top of every round with the majority about to be queried.
  std::function<void(long long round, const Hypothesis& majority)> round_begin;
};

struct EqLearnResult {
  Hypothesis hypothesis;
  QueryStats stats;
};

// The boosting learner. Round i queries the current majority for a batch,
// then one batch per confidence level |vote| = v with the majority flipped
// on that level set, and feeds everything to find_consistent. YES on the
// majority query ends the run with the current majority; YES on a flipped
// query skips that level. Throws AdversaryInconsistentError when a training
// set has no consistent member (only possible with non-genuine
// counterexamples).
EqLearnResult eq_learn(const HypothesisClass& cls, Index n, CounterexampleSource& source,
                       const Schedule& schedule, const EqLearnOptions& options = {});

}  // namespace eqboost

#endif  // EQBOOST_LEARNERS_HPP_
