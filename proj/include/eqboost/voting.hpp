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

#ifndef EQBOOST_VOTING_HPP_
#define EQBOOST_VOTING_HPP_

#include <vector>

#include "eqboost/model.hpp"

namespace eqboost {

// B = 2*ceil(log2(1/epsilon)) + 1 for epsilon in (0,1). Always odd, >= 3.
// All logs in this codebase are base 2.
int vote_bound(double epsilon);

// min(max(-bound, v), bound).
int clip(int v, int bound);

struct VoteParams {
  double epsilon = 0.25;
  int bound = 5;  // == vote_bound(epsilon)
};

VoteParams make_vote_params(double epsilon);

// Per-point clipped vote tallies over a committee of classifiers,
// maintained incrementally:
//   vote(h1)       = h1(x)
//   vote(h1..hi)   = clip(vote(h1..h_{i-1}) + 2*hi(x))
// Every tally is odd and stays in [-bound, bound].
class VoteState {
 public:
  VoteState(VoteParams params, Index n);

  void extend(const Hypothesis& h);

  Index space_size() const { return votes_.size(); }
  const VoteParams& params() const { return params_; }
  int bound() const { return params_.bound; }
  const ArrayXi& votes() const { return votes_; }
  const std::vector<Hypothesis>& committee() const { return committee_; }

  // Sign classifier: +1 where the tally is >= 0 (tallies are odd, never 0).
  Hypothesis majority() const;
  // {x : |votes[x]| == v} for odd v in [1, bound].
  Mask level_set(int v) const;

 private:
  VoteParams params_;
  ArrayXi votes_;
  std::vector<Hypothesis> committee_;
};

// Value-style wrapper around VoteState::extend.
VoteState vote_extend(VoteState state, const Hypothesis& h);
Hypothesis majority(const VoteState& state);
Mask confidence_level_set(const VoteState& state, int v);

// Signed correctness tally against a ground truth g: positive where the
// committee's running estimate is wrong, negative where it is correct.
// Computed by the recursion with the correctness term inside the clip
// (the variant that keeps |vote_g| == |vote|); the identity
// vote_g(x) == -g(x) * vote(x) is checked and an InternalError is thrown
// on mismatch.
ArrayXi vote_g(const VoteState& state, const Hypothesis& g);

}  // namespace eqboost

#endif  // EQBOOST_VOTING_HPP_
