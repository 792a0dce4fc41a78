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

#include "eqboost/voting.hpp"

#include <cmath>

namespace eqboost {

int vote_bound(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw OutOfRangeError("vote_bound: epsilon must be in (0,1)");
  // Smallest L with 2^L >= 1/epsilon, i.e. ceil(log2(1/epsilon)). The float
  // estimate is corrected with exact power-of-two scaling (ldexp is exact).
  int level = static_cast<int>(std::ceil(std::log2(1.0 / epsilon)));
  if (level < 1) level = 1;
  while (level > 1 && std::ldexp(epsilon, level - 1) >= 1.0) --level;
  while (std::ldexp(epsilon, level) < 1.0) ++level;
  return 2 * level + 1;
}

int clip(int v, int bound) {
  if (bound < 1) throw OutOfRangeError("clip: bound must be >= 1");
  return std::min(std::max(-bound, v), bound);
}

VoteParams make_vote_params(double epsilon) {
  return VoteParams{epsilon, vote_bound(epsilon)};
}

VoteState::VoteState(VoteParams params, Index n) : params_(params) {
  if (n < 1) throw OutOfRangeError("VoteState: feature space must be non-empty");
  if (params_.bound != vote_bound(params_.epsilon))
    throw OutOfRangeError("VoteState: bound does not match vote_bound(epsilon)");
  votes_ = ArrayXi::Zero(n);
}

void VoteState::extend(const Hypothesis& h) {
  const ArrayXi ht = h.evaluate(votes_.size());
  if (committee_.empty()) {
    votes_ = ht;
  } else {
    const int b = params_.bound;
    votes_ = (votes_ + 2 * ht).cwiseMax(-b).cwiseMin(b);
  }
  committee_.push_back(h);
}

Hypothesis VoteState::majority() const {
  if (committee_.empty()) throw EmptyCommitteeError("majority: empty committee");
  ArrayXi out(votes_.size());
  for (Index i = 0; i < votes_.size(); ++i) out[i] = votes_[i] >= 0 ? 1 : -1;
  return Hypothesis::table(std::move(out));
}

Mask VoteState::level_set(int v) const {
  if (v < 1 || v > params_.bound || v % 2 == 0)
    throw OutOfRangeError("level_set: v must be odd and in [1, bound]");
  return votes_.abs() == v;
}

VoteState vote_extend(VoteState state, const Hypothesis& h) {
  state.extend(h);
  return state;
}

Hypothesis majority(const VoteState& state) { return state.majority(); }

Mask confidence_level_set(const VoteState& state, int v) { return state.level_set(v); }

ArrayXi vote_g(const VoteState& state, const Hypothesis& g) {
  if (state.committee().empty()) throw EmptyCommitteeError("vote_g: empty committee");
  const Index n = state.space_size();
  const ArrayXi gt = g.evaluate(n);
  const int b = state.bound();

  ArrayXi acc;
  bool first = true;
  for (const auto& h : state.committee()) {
    const ArrayXi ht = h.evaluate(n);
    // (-1)^[h(x) == g(x)]: -1 where the member is correct, +1 where wrong.
    const ArrayXi term = (ht == gt).select(ArrayXi::Constant(n, -1), ArrayXi::Constant(n, 1));
    if (first) {
      acc = term;
      first = false;
    } else {
      acc = (acc + 2 * term).cwiseMax(-b).cwiseMin(b);
    }
  }

  if ((acc != -gt * state.votes()).any())
    throw InternalError("vote_g: identity vote_g == -g*vote violated");
  return acc;
}

}  // namespace eqboost
