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

#include "eqboost/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eqboost {

namespace {

constexpr double kNormalizationTol = 1e-9;
constexpr Index kExactVcGridLimit = 20;

// Maximal runs of +1 entries, as closed intervals.
std::vector<Hypothesis::Interval> positive_runs(const ArrayXi& table) {
  std::vector<Hypothesis::Interval> runs;
  const Index n = table.size();
  Index i = 0;
  while (i < n) {
    if (table[i] > 0) {
      Index j = i;
      while (j + 1 < n && table[j + 1] > 0) ++j;
      runs.push_back({i, j});
      i = j + 1;
    } else {
      ++i;
    }
  }
  return runs;
}

}  // namespace

double DiscreteDistribution::mass(const Mask& region) const {
  if (region.size() != weights_.size())
    throw OutOfRangeError("mass: region size does not match the feature space");
  return region.select(weights_, 0.0).sum();
}

DiscreteDistribution make_distribution(const ArrayXd& raw_weights) {
  if (raw_weights.size() < 1) throw AllZeroError("make_distribution: empty weight vector");
  for (Index i = 0; i < raw_weights.size(); ++i) {
    if (raw_weights[i] < 0.0 || !std::isfinite(raw_weights[i]))
      throw NegativeWeightError("make_distribution: negative weight at index " +
                                std::to_string(i));
  }
  const double total = raw_weights.sum();
  if (total <= 0.0) throw AllZeroError("make_distribution: all weights are zero");

  DiscreteDistribution dist;
  dist.normalization_ = total;
  dist.weights_ = raw_weights / total;
  if (std::abs(dist.weights_.sum() - 1.0) > kNormalizationTol)
    throw InternalError("make_distribution: normalization drift above tolerance");

  dist.cdf_.resize(raw_weights.size());
  double acc = 0.0;
  for (Index i = 0; i < dist.weights_.size(); ++i) {
    acc += dist.weights_[i];
    dist.cdf_[i] = acc;
  }
  dist.cdf_[dist.cdf_.size() - 1] = 1.0;
  return dist;
}

DiscreteDistribution uniform_distribution(Index n) {
  return make_distribution(ArrayXd::Ones(n));
}

DiscreteDistribution point_mass(Index n, Index x) {
  ArrayXd w = ArrayXd::Zero(n);
  w[x] = 1.0;
  return make_distribution(w);
}

Index sample(const DiscreteDistribution& dist, RandomStream& rng) {
  const double u = rng.next_double();
  const double* begin = dist.cdf_.data();
  const double* end = begin + dist.cdf_.size();
  const double* it = std::upper_bound(begin, end, u);
  if (it == end) --it;  // u can tie with the final 1.0 only through rounding
  return static_cast<Index>(it - begin);
}

DiscreteDistribution restrict(const DiscreteDistribution& dist, const Mask& region) {
  if (region.size() != dist.size())
    throw OutOfRangeError("restrict: region size does not match the feature space");
  const ArrayXd conditioned = region.select(dist.weights(), 0.0);
  if (conditioned.sum() <= 0.0)
    throw ZeroMassRegionError("restrict: region has zero mass");
  return make_distribution(conditioned);
}

double total_variation(const ArrayXd& p, const ArrayXd& q) {
  if (p.size() != q.size()) throw OutOfRangeError("total_variation: size mismatch");
  return 0.5 * (p - q).abs().sum();
}

// --- Hypothesis -------------------------------------------------------------

Hypothesis Hypothesis::threshold(Index theta) { return Hypothesis(Threshold{theta}); }

Hypothesis Hypothesis::interval(Index lo, Index hi) {
  if (lo > hi) throw OutOfRangeError("interval: requires lo <= hi");
  return Hypothesis(Interval{lo, hi});
}

Hypothesis Hypothesis::interval_union(std::vector<Interval> parts) {
  for (const auto& p : parts)
    if (p.lo > p.hi) throw OutOfRangeError("interval_union: requires lo <= hi");
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& p : parts) {
    if (!merged.empty() && p.lo <= merged.back().hi)
      throw OutOfRangeError("interval_union: parts overlap");
    if (!merged.empty() && p.lo == merged.back().hi + 1)
      merged.back().hi = p.hi;  // adjacent parts form one run
    else
      merged.push_back(p);
  }
  return Hypothesis(IntervalUnion{std::move(merged)});
}

Hypothesis Hypothesis::table(ArrayXi values) {
  for (Index i = 0; i < values.size(); ++i)
    if (values[i] != 1 && values[i] != -1)
      throw OutOfRangeError("table: entries must be -1 or +1");
  return Hypothesis(Table{std::move(values)});
}

Hypothesis Hypothesis::constant(int label) {
  if (label == 1) return threshold(0);
  if (label == -1) return interval_union({});
  throw OutOfRangeError("constant: label must be -1 or +1");
}

int Hypothesis::operator()(Index x) const {
  return std::visit(
      [x](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Threshold>) {
          return x >= r.theta ? 1 : -1;
        } else if constexpr (std::is_same_v<T, Interval>) {
          return (x >= r.lo && x <= r.hi) ? 1 : -1;
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          for (const auto& p : r.parts)
            if (x >= p.lo && x <= p.hi) return 1;
          return -1;
        } else {
          if (x < 0 || x >= r.values.size())
            throw OutOfRangeError("Hypothesis: point outside the table");
          return r.values[x];
        }
      },
      repr_);
}

ArrayXi Hypothesis::evaluate(Index n) const {
  return std::visit(
      [n](const auto& r) -> ArrayXi {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Threshold>) {
          ArrayXi out = ArrayXi::Constant(n, -1);
          const Index start = std::clamp<Index>(r.theta, 0, n);
          if (start < n) out.segment(start, n - start).setConstant(1);
          return out;
        } else if constexpr (std::is_same_v<T, Interval>) {
          ArrayXi out = ArrayXi::Constant(n, -1);
          const Index lo = std::clamp<Index>(r.lo, 0, n);
          const Index hi = std::clamp<Index>(r.hi + 1, 0, n);
          if (lo < hi) out.segment(lo, hi - lo).setConstant(1);
          return out;
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          ArrayXi out = ArrayXi::Constant(n, -1);
          for (const auto& p : r.parts) {
            const Index lo = std::clamp<Index>(p.lo, 0, n);
            const Index hi = std::clamp<Index>(p.hi + 1, 0, n);
            if (lo < hi) out.segment(lo, hi - lo).setConstant(1);
          }
          return out;
        } else {
          if (r.values.size() != n)
            throw OutOfRangeError("Hypothesis: table size does not match the feature space");
          return r.values;
        }
      },
      repr_);
}

std::string Hypothesis::describe() const {
  std::ostringstream out;
  std::visit(
      [&out](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Threshold>) {
          out << "threshold:" << r.theta;
        } else if constexpr (std::is_same_v<T, Interval>) {
          out << "interval:" << r.lo << "-" << r.hi;
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          out << "union:";
          for (std::size_t i = 0; i < r.parts.size(); ++i) {
            if (i) out << ";";
            out << r.parts[i].lo << "-" << r.parts[i].hi;
          }
          if (r.parts.empty()) out << "empty";
        } else {
          out << "table:n=" << r.values.size();
        }
      },
      repr_);
  return out.str();
}

double risk(const Hypothesis& f, const Hypothesis& g, const DiscreteDistribution& dist) {
  const Index n = dist.size();
  const ArrayXi ft = f.evaluate(n);
  const ArrayXi gt = g.evaluate(n);
  return ((ft != gt).template cast<double>() * dist.weights()).sum();
}

Mask disagreement(const Hypothesis& f, const Hypothesis& g, Index n) {
  return f.evaluate(n) != g.evaluate(n);
}

Hypothesis xor_region(const Hypothesis& f, const Mask& region) {
  const Index n = region.size();
  const ArrayXi ft = f.evaluate(n);
  return Hypothesis::table(region.select(-ft, ft));
}

std::uint64_t table_fingerprint(const ArrayXi& table) {
  // FNV-1a over the sign bits.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Index i = 0; i < table.size(); ++i) {
    h ^= static_cast<std::uint64_t>(table[i] > 0 ? 1 : 0) + 0x9e;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// --- HypothesisClass --------------------------------------------------------

HypothesisClass HypothesisClass::thresholds() { return HypothesisClass(Kind::Thresholds, 0); }

HypothesisClass HypothesisClass::intervals() { return HypothesisClass(Kind::Intervals, 0); }

HypothesisClass HypothesisClass::union_of_k_intervals(int k) {
  if (k < 1) throw OutOfRangeError("union_of_k_intervals: k must be >= 1");
  return HypothesisClass(Kind::UnionOfKIntervals, k);
}

HypothesisClass HypothesisClass::explicit_finite(std::vector<Hypothesis> members,
                                                 std::optional<int> vc_override) {
  if (members.empty()) throw OutOfRangeError("explicit_finite: class must be non-empty");
  HypothesisClass cls(Kind::ExplicitFinite, 0);
  cls.members_ = std::move(members);
  if (vc_override) {
    if (*vc_override < 0) throw OutOfRangeError("explicit_finite: vc override must be >= 0");
    cls.vc_ = vc_override;
  }
  return cls;
}

std::string HypothesisClass::name() const {
  switch (kind_) {
    case Kind::Thresholds: return "thresholds";
    case Kind::Intervals: return "intervals";
    case Kind::UnionOfKIntervals: return "union-of-" + std::to_string(k_) + "-intervals";
    case Kind::ExplicitFinite: return "explicit-finite-" + std::to_string(members_.size());
  }
  return "unknown";
}

bool HypothesisClass::contains(const Hypothesis& h, Index n) const {
  const ArrayXi table = h.evaluate(n);
  const auto runs = positive_runs(table);
  switch (kind_) {
    case Kind::Thresholds:
      return runs.empty() || (runs.size() == 1 && runs[0].hi == n - 1);
    case Kind::Intervals:
      return runs.size() <= 1;
    case Kind::UnionOfKIntervals:
      return static_cast<int>(runs.size()) <= k_;
    case Kind::ExplicitFinite:
      for (const auto& m : members_)
        if ((m.evaluate(n) == table).all()) return true;
      return false;
  }
  return false;
}

Hypothesis HypothesisClass::canonical(Index n) const {
  switch (kind_) {
    case Kind::Thresholds: return Hypothesis::threshold(0);
    case Kind::Intervals: return Hypothesis::interval(0, n - 1);
    case Kind::UnionOfKIntervals: return Hypothesis::interval_union({{0, n - 1}});
    case Kind::ExplicitFinite: return members_.front();
  }
  throw InternalError("canonical: unknown class kind");
}

Hypothesis HypothesisClass::sample_member(Index n, RandomStream& rng) const {
  switch (kind_) {
    case Kind::Thresholds:
      return Hypothesis::threshold(static_cast<Index>(rng.next_below(n + 1)));
    case Kind::Intervals: {
      const Index a = static_cast<Index>(rng.next_below(n));
      const Index b = static_cast<Index>(rng.next_below(n));
      return Hypothesis::interval(std::min(a, b), std::max(a, b));
    }
    case Kind::UnionOfKIntervals: {
      const int parts = 1 + static_cast<int>(rng.next_below(k_));
      std::vector<Index> cuts(2 * parts);
      for (auto& c : cuts) c = static_cast<Index>(rng.next_below(n));
      std::sort(cuts.begin(), cuts.end());
      std::vector<Hypothesis::Interval> ivals;
      for (int j = 0; j < parts; ++j) {
        const Index lo = cuts[2 * j], hi = cuts[2 * j + 1];
        if (!ivals.empty() && lo <= ivals.back().hi + 1)
          ivals.back().hi = std::max(ivals.back().hi, hi);
        else
          ivals.push_back({lo, hi});
      }
      return Hypothesis::interval_union(std::move(ivals));
    }
    case Kind::ExplicitFinite:
      return members_[rng.next_below(members_.size())];
  }
  throw InternalError("sample_member: unknown class kind");
}

int vc_dim(const HypothesisClass& cls) {
  switch (cls.kind_) {
    case HypothesisClass::Kind::Thresholds: return 1;
    case HypothesisClass::Kind::Intervals: return 2;
    case HypothesisClass::Kind::UnionOfKIntervals: return 2 * cls.k_;
    case HypothesisClass::Kind::ExplicitFinite: {
      if (cls.vc_) return *cls.vc_;
      Index n = 0;
      if (const auto* t = std::get_if<Hypothesis::Table>(&cls.members_.front().repr()))
        n = t->values.size();
      else
        throw TooLargeForExactVcError(
            "vc_dim: explicit class without tables needs a vc override");
      if (n > kExactVcGridLimit)
        throw TooLargeForExactVcError("vc_dim: grid too large for exhaustive shattering (n=" +
                                      std::to_string(n) + "), supply an override");
      std::vector<ArrayXi> tables;
      tables.reserve(cls.members_.size());
      for (const auto& m : cls.members_) tables.push_back(m.evaluate(n));
      return exhaustive_vc(tables, n);
    }
  }
  throw InternalError("vc_dim: unknown class kind");
}

int exhaustive_vc(const std::vector<ArrayXi>& tables, Index n) {
  if (n > kExactVcGridLimit)
    throw TooLargeForExactVcError("exhaustive_vc: grid too large (n=" + std::to_string(n) + ")");
  if (tables.empty()) return 0;

  auto subset_shattered = [&](const std::vector<Index>& pts) {
    const int d = static_cast<int>(pts.size());
    const std::uint32_t want = 1u << d;
    std::vector<bool> seen(want, false);
    std::uint32_t found = 0;
    for (const auto& t : tables) {
      std::uint32_t pattern = 0;
      for (int b = 0; b < d; ++b)
        if (t[pts[b]] > 0) pattern |= 1u << b;
      if (!seen[pattern]) {
        seen[pattern] = true;
        if (++found == want) return true;
      }
    }
    return false;
  };

  int best = 0;
  for (int d = 1; d <= n; ++d) {
    // All size-d subsets of 0..n-1.
    std::vector<Index> pts(d);
    for (int i = 0; i < d; ++i) pts[i] = i;
    bool any = false;
    for (;;) {
      if (subset_shattered(pts)) {
        any = true;
        break;
      }
      int i = d - 1;
      while (i >= 0 && pts[i] == n - d + i) --i;
      if (i < 0) break;
      ++pts[i];
      for (int j = i + 1; j < d; ++j) pts[j] = pts[j - 1] + 1;
    }
    if (!any) break;
    best = d;
  }
  return best;
}

}  // namespace eqboost
