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

#include "eqboost/diagnostics.hpp"

#include <cmath>

namespace eqboost {

ArrayXd correctness_level_masses(const VoteState& state, const Hypothesis& g,
                                 const DiscreteDistribution& dist) {
  const Index n = state.space_size();
  if (dist.size() != n)
    throw OutOfRangeError("correctness_level_masses: distribution size mismatch");
  const int b = state.bound();
  const ArrayXi vg = vote_g(state, g);
  ArrayXd masses = ArrayXd::Zero(b + 1);
  for (Index x = 0; x < n; ++x) masses[(vg[x] + b) / 2] += dist.weight(x);
  return masses;
}

MovePlan realized_move_plan(const VoteState& state, const Hypothesis& g,
                            const Hypothesis& next, const DiscreteDistribution& dist) {
  const Index n = state.space_size();
  const int b = state.bound();
  const ArrayXi vg = vote_g(state, g);
  const ArrayXi gt = g.evaluate(n);
  const ArrayXi nt = next.evaluate(n);

  ArrayXd masses = ArrayXd::Zero(b + 1);
  ArrayXd down = ArrayXd::Zero(b + 1);
  for (Index x = 0; x < n; ++x) {
    const Index slot = (vg[x] + b) / 2;
    masses[slot] += dist.weight(x);
    if (nt[x] == gt[x]) down[slot] += dist.weight(x);
  }
  MovePlan plan{ArrayXd::Ones(b + 1)};
  for (Index k = 0; k <= b; ++k)
    if (masses[k] > 0.0) plan.down_fraction[k] = down[k] / masses[k];
  return plan;
}

std::function<void(long long, const VoteState&, const Hypothesis&)>
TrajectoryRecorder::observer() {
  return [this](long long round, const VoteState& state, const Hypothesis& next) {
    const Index n = state.space_size();
    const int b = state.bound();
    const ArrayXi vg = vote_g(state, *g_);
    const ArrayXi gt = g_->evaluate(n);
    const ArrayXi nt = next.evaluate(n);

    TrajectoryRound rec;
    rec.round = round;
    rec.masses = ArrayXd::Zero(b + 1);
    ArrayXd down = ArrayXd::Zero(b + 1);
    rec.next_masses = ArrayXd::Zero(b + 1);

    for (Index x = 0; x < n; ++x) {
      const double w = dist_->weight(x);
      const bool correct = nt[x] == gt[x];
      const Index slot = (vg[x] + b) / 2;
      rec.masses[slot] += w;
      if (correct) down[slot] += w;
      const int stepped = clip(vg[x] + (correct ? -2 : 2), b);
      rec.next_masses[(stepped + b) / 2] += w;
    }
    rec.plan.down_fraction = ArrayXd::Ones(b + 1);
    for (Index k = 0; k <= b; ++k)
      if (rec.masses[k] > 0.0) rec.plan.down_fraction[k] = down[k] / rec.masses[k];

    // The two per-round guarantees, evaluated exactly for the chosen member.
    double wrong = 0, wrong_and_next_wrong = 0;
    for (Index x = 0; x < n; ++x)
      if (vg[x] > 0) {
        wrong += dist_->weight(x);
        if (nt[x] != gt[x]) wrong_and_next_wrong += dist_->weight(x);
      }
    bool ok = wrong_and_next_wrong <= wrong / 16.0 + 1e-12;
    const double b4 = std::pow(static_cast<double>(b), 4.0);
    for (int v = 1; v <= b && ok; v += 2) {
      double region = 0, region_and_wrong = 0;
      for (Index x = 0; x < n; ++x)
        if (vg[x] == -v) {
          region += dist_->weight(x);
          if (nt[x] != gt[x]) region_and_wrong += dist_->weight(x);
        }
      if (region > 0 && region >= wrong / b4)
        ok = region_and_wrong <= region / 16.0 + 1e-12;
    }
    rec.guarantees_hold = ok;
    rounds_.push_back(std::move(rec));
  };
}

std::vector<MovePlan> TrajectoryRecorder::plans() const {
  std::vector<MovePlan> out;
  out.reserve(rounds_.size());
  for (const auto& r : rounds_) out.push_back(r.plan);
  return out;
}

}  // namespace eqboost
