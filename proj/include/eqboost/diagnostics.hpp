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

#ifndef EQBOOST_DIAGNOSTICS_HPP_
#define EQBOOST_DIAGNOSTICS_HPP_

#include <vector>

#include "eqboost/learners.hpp"
#include "eqboost/process.hpp"

namespace eqboost {

// Omniscient bridge between a learning run and the mass-movement process:
// with the data distribution and ground truth in hand, the per-position
// masses of the correctness tally form a process configuration, and each
// committee extension realizes one move plan (correct votes step down two
// positions, wrong votes step up two, clipped at the ends).

// Exact mass at each tally position: slot k holds D({x : vote_g(x) = 2k-B}).
ArrayXd correctness_level_masses(const VoteState& state, const Hypothesis& g,
                                 const DiscreteDistribution& dist);

// The move plan realized when `next` joins the committee: per position, the
// mass share whose vote steps down (points where `next` agrees with g).
// Positions carrying no mass default to a down share of 1.
MovePlan realized_move_plan(const VoteState& state, const Hypothesis& g,
                            const Hypothesis& next, const DiscreteDistribution& dist);

struct TrajectoryRound {
  long long round = 0;
  ArrayXd masses;        // configuration before the extension
  MovePlan plan;         // realized move plan
  ArrayXd next_masses;   // configuration after the extension
  // Whether the round's chosen hypothesis erred on at most 1/16 of the
  // majority's error set and of every heavy correct level set (the two
  // per-round guarantees the batch sizes are chosen for).
  bool guarantees_hold = false;
};

// Observer that records one TrajectoryRound per committee extension; plug
// `observer()` into EqLearnOptions. The recorded plans replay through the
// process (all_mass semantics match the clipped tally update exactly) and
// feed the trace-replay scheduler.
class TrajectoryRecorder {
 public:
  TrajectoryRecorder(const Hypothesis& g, const DiscreteDistribution& dist)
      : g_(&g), dist_(&dist) {}

  std::function<void(long long, const VoteState&, const Hypothesis&)> observer();

  const std::vector<TrajectoryRound>& rounds() const { return rounds_; }
  std::vector<MovePlan> plans() const;

 private:
  const Hypothesis* g_;
  const DiscreteDistribution* dist_;
  std::vector<TrajectoryRound> rounds_;
};

}  // namespace eqboost

#endif  // EQBOOST_DIAGNOSTICS_HPP_
