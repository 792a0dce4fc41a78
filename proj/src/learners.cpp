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

#include "eqboost/learners.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace eqboost {

double Schedule::query_bound() const {
  return static_cast<double>(batch_size) * static_cast<double>(rounds) *
         static_cast<double>(bound + 1);
}

namespace {

long long checked_ceil(double x, const char* what) {
  if (!(x >= 0) || x > 9.0e18)
    throw OutOfRangeError(std::string("schedule_params: ") + what + " out of range");
  return static_cast<long long>(std::ceil(x));
}

}  // namespace

Schedule schedule_params(double epsilon, double delta, int d, ScheduleMode mode,
                         const ScheduleOverrides& overrides) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw OutOfRangeError("schedule_params: delta must be in (0,1)");
  if (d < 1) throw OutOfRangeError("schedule_params: d must be >= 1");
  if (mode == ScheduleMode::Theory) {
    if (!(epsilon > 0.0) || !(epsilon <= 1.0 / 32.0))
      throw OutOfRangeError("schedule_params: Theory mode needs epsilon in (0,1/32]");
  } else {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
      throw OutOfRangeError("schedule_params: epsilon must be in (0,1)");
  }

  Schedule s;
  s.epsilon = epsilon;
  s.delta = delta;
  s.vc = d;
  s.mode = mode;
  s.c_m = overrides.c_m.value_or(kDefaultCm);
  s.c_t = overrides.c_t.value_or(kDefaultCt);
  if (s.c_m <= 0 || s.c_t <= 0)
    throw OutOfRangeError("schedule_params: constants must be positive");

  if (mode == ScheduleMode::Theory) {
    const double log_inv = std::log2(1.0 / epsilon);
    s.eps_prime = epsilon / (1e5 * log_inv * log_inv * log_inv * log_inv);
  } else {
    s.eps_prime = epsilon;
  }
  s.bound = vote_bound(s.eps_prime);

  const double b4 = std::pow(static_cast<double>(s.bound), 4.0);
  const double log_delta = std::log2(1.0 / delta);
  if (mode == ScheduleMode::Theory) {
    s.batch_size = checked_ceil(s.c_m * (d + std::log2(b4) + log_delta) * b4, "m");
  } else {
    s.batch_size = checked_ceil(s.c_m * (d + log_delta), "m");
  }
  s.rounds = checked_ceil(s.c_t * std::pow(static_cast<double>(s.bound), 3.0), "t");
  return s;
}

std::optional<Hypothesis> find_consistent(const HypothesisClass& cls,
                                          std::span<const LabeledExample> samples,
                                          Index n) {
  // Deduplicate; conflicting duplicate labels mean no consistent member.
  std::map<Index, int> by_point;
  for (const auto& s : samples) {
    if (s.point < 0 || s.point >= n)
      throw OutOfRangeError("find_consistent: sample point outside the feature space");
    if (s.label != 1 && s.label != -1)
      throw OutOfRangeError("find_consistent: labels must be -1 or +1");
    auto [it, inserted] = by_point.emplace(s.point, s.label);
    if (!inserted && it->second != s.label) return std::nullopt;
  }

  switch (cls.kind()) {
    case HypothesisClass::Kind::Thresholds: {
      Index max_neg = -1;
      Index min_pos = n;
      for (const auto& [x, y] : by_point) {
        if (y > 0) min_pos = std::min(min_pos, x);
        else max_neg = std::max(max_neg, x);
      }
      if (max_neg >= min_pos) return std::nullopt;
      return Hypothesis::threshold(max_neg + 1);
    }
    case HypothesisClass::Kind::Intervals:
    case HypothesisClass::Kind::UnionOfKIntervals: {
      const int max_parts =
          cls.kind() == HypothesisClass::Kind::Intervals ? 1 : cls.k();
      // Tight interval per cluster of positives; clusters split at negatives.
      std::vector<Hypothesis::Interval> clusters;
      bool open = false;
      for (const auto& [x, y] : by_point) {
        if (y > 0) {
          if (open) clusters.back().hi = x;
          else clusters.push_back({x, x});
          open = true;
        } else {
          open = false;
        }
      }
      if (static_cast<int>(clusters.size()) > max_parts) return std::nullopt;
      if (clusters.size() == 1 && cls.kind() == HypothesisClass::Kind::Intervals)
        return Hypothesis::interval(clusters[0].lo, clusters[0].hi);
      return Hypothesis::interval_union(std::move(clusters));
    }
    case HypothesisClass::Kind::ExplicitFinite: {
      for (const auto& m : cls.members()) {
        bool ok = true;
        for (const auto& [x, y] : by_point) {
          if (m(x) != y) {
            ok = false;
            break;
          }
        }
        if (ok) return m;
      }
      return std::nullopt;
    }
  }
  throw InternalError("find_consistent: unknown class kind");
}

long long pac_sample_size(int d, double epsilon, double delta) {
  if (d < 1) throw OutOfRangeError("pac_sample_size: d must be >= 1");
  if (!(epsilon > 0.0) || !(epsilon < 1.0) || !(delta > 0.0) || !(delta < 1.0))
    throw OutOfRangeError("pac_sample_size: epsilon and delta must be in (0,1)");
  const double m = (d * std::log2(1.0 / epsilon) + std::log2(1.0 / delta)) / epsilon;
  return checked_ceil(m, "pac sample size");
}

PacResult pac_learn(const HypothesisClass& cls, const DiscreteDistribution& dist,
                    const Hypothesis& g, double epsilon, double delta,
                    RandomStream& rng) {
  const long long m = pac_sample_size(vc_dim(cls), epsilon, delta);
  std::vector<LabeledExample> samples;
  samples.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) samples.push_back(ex_query(dist, g, rng));
  auto h = find_consistent(cls, samples, dist.size());
  if (!h)
    throw InternalError("pac_learn: no consistent member for realizable samples");
  return PacResult{std::move(*h), m};
}

EqLearnResult eq_learn(const HypothesisClass& cls, Index n, CounterexampleSource& source,
                       const Schedule& schedule, const EqLearnOptions& options) {
  if (schedule.mode == ScheduleMode::Theory &&
      schedule.query_bound() > options.query_budget) {
    throw ScheduleInfeasibleError(
        "eq_learn: Theory-mode query bound exceeds the configured budget");
  }

  QueryStats stats;
  std::unordered_set<std::uint64_t> seen;
  auto request = [&](const Hypothesis& f, long long m) {
    seen.insert(table_fingerprint(f.evaluate(n)));
    auto r = source.request(f, m);
    if (r) stats.eq_queries += static_cast<long long>(r->size());
    return r;
  };

  VoteState state(VoteParams{schedule.eps_prime, schedule.bound}, n);
  state.extend(options.initial_hypothesis ? *options.initial_hypothesis
                                          : cls.canonical(n));

  auto finish = [&](Hypothesis h, bool early) {
    stats.early_stop = early;
    stats.distinct_functions = static_cast<long long>(seen.size());
    return EqLearnResult{std::move(h), stats};
  };

  for (long long i = 2; i <= schedule.rounds; ++i) {
    ++stats.rounds;
    Hypothesis maj = state.majority();
    if (options.round_begin) options.round_begin(i, maj);

    auto batch = request(maj, schedule.batch_size);
    if (!batch) return finish(std::move(maj), true);

    std::vector<LabeledExample> training = std::move(*batch);
    for (int v = 1; v <= schedule.bound; v += 2) {
      const Hypothesis flipped = xor_region(maj, state.level_set(v));
      auto extra = request(flipped, schedule.batch_size);
      if (!extra) continue;  // flipped classifier has zero risk; skip the level
      training.insert(training.end(), extra->begin(), extra->end());
    }

    auto next = find_consistent(cls, training, n);
    if (!next)
      throw AdversaryInconsistentError(
          "eq_learn: training set has no consistent member");
    if (options.observer) options.observer(i, state, *next);
    state.extend(*next);

    if (options.stop_at_target && options.exact_risk &&
        schedule.mode == ScheduleMode::Practical) {
      Hypothesis current = state.majority();
      if (options.exact_risk(current) <= schedule.epsilon)
        return finish(std::move(current), true);
    }
  }
  return finish(state.majority(), false);
}

}  // namespace eqboost
