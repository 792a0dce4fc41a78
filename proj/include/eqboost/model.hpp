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

#ifndef EQBOOST_MODEL_HPP_
#define EQBOOST_MODEL_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eqboost/errors.hpp"
#include "eqboost/random.hpp"

namespace eqboost {

using Index = Eigen::Index;
using ArrayXd = Eigen::ArrayXd;
using ArrayXi = Eigen::ArrayXi;
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Finite feature space: points are the integers 0 .. size-1.
struct FeatureSpace {
  Index size = 1;
  explicit FeatureSpace(Index n) : size(n) {
    if (n < 1) throw OutOfRangeError("FeatureSpace: size must be >= 1");
  }
};

// Exact probability vector over a finite feature space. Immutable after
// construction; weights sum to 1 (tolerance 1e-9 asserted at construction).
class DiscreteDistribution {
 public:
  const ArrayXd& weights() const { return weights_; }
  Index size() const { return weights_.size(); }
  double weight(Index x) const { return weights_[x]; }
  // Exact mass of a region.
  double mass(const Mask& region) const;
  // Sum of the raw weights seen at construction (diagnostic).
  double normalization() const { return normalization_; }

  friend DiscreteDistribution make_distribution(const ArrayXd& raw_weights);
  friend Index sample(const DiscreteDistribution& dist, RandomStream& rng);

 private:
  DiscreteDistribution() = default;
  ArrayXd weights_;
  ArrayXd cdf_;  // inclusive cumulative sums, cdf_[size-1] == 1
  double normalization_ = 1.0;
};

// Normalizes a non-negative weight vector. Throws NegativeWeightError /
// AllZeroError on bad input.
DiscreteDistribution make_distribution(const ArrayXd& raw_weights);
DiscreteDistribution uniform_distribution(Index n);
DiscreteDistribution point_mass(Index n, Index x);

// Draws an index with probability weights[i], by cumulative-sum inversion
// (binary search); one next_double() per draw.
Index sample(const DiscreteDistribution& dist, RandomStream& rng);

// Conditional distribution on a region: proportional to dist inside, zero
// outside. Throws ZeroMassRegionError when dist(region) == 0.
DiscreteDistribution restrict(const DiscreteDistribution& dist, const Mask& region);

// Half of the L1 distance between two weight vectors over the same space.
double total_variation(const ArrayXd& p, const ArrayXd& q);

// A {-1,+1}-valued classifier over the grid 0..n-1, in one of four
// representations.
class Hypothesis {
 public:
  struct Threshold {
    Index theta;  // +1 iff x >= theta
  };
  struct Interval {
    Index lo, hi;  // +1 iff lo <= x <= hi; requires lo <= hi
  };
  struct IntervalUnion {
    // Sorted, pairwise disjoint, non-empty, non-adjacent parts.
    // An empty list is the all -1 classifier.
    std::vector<Interval> parts;
  };
  struct Table {
    ArrayXi values;  // entries are exactly -1 or +1
  };
  using Repr = std::variant<Threshold, Interval, IntervalUnion, Table>;

  static Hypothesis threshold(Index theta);
  static Hypothesis interval(Index lo, Index hi);
  static Hypothesis interval_union(std::vector<Interval> parts);
  static Hypothesis table(ArrayXi values);
  static Hypothesis constant(int label);  // all +1 or all -1

  int operator()(Index x) const;
  ArrayXi evaluate(Index n) const;
  const Repr& repr() const { return repr_; }
  std::string describe() const;

 private:
  explicit Hypothesis(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

struct LabeledExample {
  Index point = 0;
  int label = 0;  // -1 or +1
};

// Exact disagreement probability P_{x~dist}[f(x) != g(x)].
double risk(const Hypothesis& f, const Hypothesis& g, const DiscreteDistribution& dist);
// {x : f(x) != g(x)} over 0..n-1.
Mask disagreement(const Hypothesis& f, const Hypothesis& g, Index n);
// The classifier equal to f off the region and to -f on it (explicit table).
Hypothesis xor_region(const Hypothesis& f, const Mask& region);

std::uint64_t table_fingerprint(const ArrayXi& table);

// One of four hypothesis classes with known VC dimension.
class HypothesisClass {
 public:
  enum class Kind { Thresholds, Intervals, UnionOfKIntervals, ExplicitFinite };

  static HypothesisClass thresholds();
  static HypothesisClass intervals();
  static HypothesisClass union_of_k_intervals(int k);
  static HypothesisClass explicit_finite(std::vector<Hypothesis> members,
                                         std::optional<int> vc_override = std::nullopt);

  Kind kind() const { return kind_; }
  int k() const { return k_; }
  const std::vector<Hypothesis>& members() const { return members_; }
  std::string name() const;

  bool contains(const Hypothesis& h, Index n) const;
  // First element used to seed the boosting learner (all +1 where possible).
  Hypothesis canonical(Index n) const;
  // Uniform-ish random member, for experiment harnesses.
  Hypothesis sample_member(Index n, RandomStream& rng) const;

  friend int vc_dim(const HypothesisClass& cls);

 private:
  HypothesisClass(Kind kind, int k) : kind_(kind), k_(k) {}
  Kind kind_;
  int k_ = 0;  // UnionOfKIntervals only
  std::vector<Hypothesis> members_;
  std::optional<int> vc_;
};

// Thresholds -> 1, Intervals -> 2, UnionOfKIntervals(k) -> 2k. ExplicitFinite
// classes are resolved by exhaustive shattering search when their grid has
// n <= 20 points, otherwise the constructor's override is required
// (TooLargeForExactVcError without one).
int vc_dim(const HypothesisClass& cls);

// Exhaustive shattering search over explicit evaluation tables; returns the
// size of the largest shattered point set. Throws TooLargeForExactVcError
// when n > 20.
int exhaustive_vc(const std::vector<ArrayXi>& tables, Index n);

}  // namespace eqboost

#endif  // EQBOOST_MODEL_HPP_
