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

// Test-only oracles and generators, independent of the library's learner
// implementations.

#ifndef EQBOOST_TESTS_TEST_SUPPORT_HPP_
#define EQBOOST_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <map>
#include <span>
#include <vector>

#include "eqboost/model.hpp"

namespace eqboost::testing {

inline Hypothesis random_table(Index n, RandomStream& rng) {
  ArrayXi t(n);
  for (Index i = 0; i < n; ++i) t[i] = rng.next_below(2) ? 1 : -1;
  return Hypothesis::table(std::move(t));
}

inline DiscreteDistribution random_dist(Index n, RandomStream& rng) {
  ArrayXd w(n);
  for (Index i = 0; i < n; ++i) w[i] = rng.next_double();
  return make_distribution(w);
}

// Exact supremum, over every member of the Intervals class (single interval
// or the empty hypothesis) consistent with `samples`, of the mass inside
// `region` where the member disagrees with g. Returns 0 when no consistent
// member exists. Runs in O(n + samples).
//
// The objective is separable: starting from the tightest consistent interval,
// extending an endpoint by one point changes the objective by
// +mass(point in region) when g is -1 there and by -mass otherwise, so the
// two endpoint scans maximize independently; with no positive samples a
// Kadane pass over each negative-free gap finds the best interval.
inline double worst_consistent_interval_error(std::span<const LabeledExample> samples,
                                              const Mask& region,
                                              const DiscreteDistribution& dist,
                                              const Hypothesis& g) {
  const Index n = dist.size();
  const ArrayXi gt = g.evaluate(n);

  std::vector<double> gain(n);
  double base_empty = 0.0;  // objective of the all-negative hypothesis
  for (Index x = 0; x < n; ++x) {
    const double w = region[x] ? dist.weight(x) : 0.0;
    gain[x] = gt[x] > 0 ? -w : w;
    if (gt[x] > 0) base_empty += w;
  }

  std::map<Index, int> by_point;
  for (const auto& s : samples) {
    auto [it, inserted] = by_point.emplace(s.point, s.label);
    if (!inserted && it->second != s.label) return 0.0;  // no consistent member
  }

  Index pmin = n, pmax = -1;
  std::vector<Index> negatives;
  for (const auto& [x, y] : by_point) {
    if (y > 0) {
      pmin = std::min(pmin, x);
      pmax = std::max(pmax, x);
    } else {
      negatives.push_back(x);
    }
  }

  if (pmax >= 0) {
    Index left_block = -1, right_block = n;
    for (const Index x : negatives) {
      if (x >= pmin && x <= pmax) return 0.0;  // contradiction
      if (x < pmin) left_block = std::max(left_block, x);
      if (x > pmax) right_block = std::min(right_block, x);
    }
    double value = base_empty;
    for (Index x = pmin; x <= pmax; ++x) value += gain[x];

    double best_left = 0.0, acc = 0.0;
    for (Index a = pmin - 1; a > left_block; --a) {
      acc += gain[a];
      best_left = std::max(best_left, acc);
    }
    double best_right = 0.0;
    acc = 0.0;
    for (Index b = pmax + 1; b < right_block; ++b) {
      acc += gain[b];
      best_right = std::max(best_right, acc);
    }
    return value + best_left + best_right;
  }

  // No positive samples: the empty hypothesis, or the best interval within a
  // gap free of negative samples.
  double best_sub = 0.0;
  Index start = 0;
  negatives.push_back(n);  // sentinel terminating the final gap
  for (const Index neg : negatives) {
    double acc = 0.0;
    for (Index x = start; x < neg; ++x) {
      acc = std::max(0.0, acc) + gain[x];
      best_sub = std::max(best_sub, acc);
    }
    start = neg + 1;
  }
  return base_empty + best_sub;
}

// Brute-force reference for the scan above (small grids only).
inline double worst_consistent_interval_error_bruteforce(
    std::span<const LabeledExample> samples, const Mask& region,
    const DiscreteDistribution& dist, const Hypothesis& g) {
  const Index n = dist.size();
  const ArrayXi gt = g.evaluate(n);
  auto objective = [&](const Hypothesis& h) {
    double v = 0.0;
    for (Index x = 0; x < n; ++x)
      if (region[x] && h(x) != gt[x]) v += dist.weight(x);
    return v;
  };
  auto consistent = [&](const Hypothesis& h) {
    for (const auto& s : samples)
      if (h(s.point) != s.label) return false;
    return true;
  };

  double best = 0.0;
  bool any = false;
  const Hypothesis empty = Hypothesis::interval_union({});
  if (consistent(empty)) {
    best = objective(empty);
    any = true;
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) {
      const Hypothesis h = Hypothesis::interval(a, b);
      if (!consistent(h)) continue;
      best = any ? std::max(best, objective(h)) : objective(h);
      any = true;
    }
  }
  return any ? best : 0.0;
}

}  // namespace eqboost::testing

#endif  // EQBOOST_TESTS_TEST_SUPPORT_HPP_
