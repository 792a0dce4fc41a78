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

#ifndef EQBOOST_PROCESS_HPP_
#define EQBOOST_PROCESS_HPP_

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqboost/model.hpp"
#include "eqboost/voting.hpp"

namespace eqboost {

// Mass-movement process on the odd positions of [-B, B]. Position i lives in
// slot (i+B)/2, so a state is a vector of B+1 masses. Every step splits each
// slot's mass into a share moving two positions down and the rest moving two
// positions up; mass pushed past an endpoint is reflected back onto it.
class ProcessState {
 public:
  ProcessState(double epsilon, ArrayXd masses);

  static ProcessState all_mass_at(double epsilon, int position);
  static ProcessState uniform_start(double epsilon);

  double epsilon() const { return epsilon_; }
  int bound() const { return bound_; }
  long long step_count() const { return step_; }
  const ArrayXd& masses() const { return masses_; }
  Index slots() const { return masses_.size(); }

  int position(Index slot) const { return static_cast<int>(2 * slot) - bound_; }
  Index slot(int position) const;
  double mass_at(int position) const { return masses_[slot(position)]; }

 private:
  friend void apply_plan_inplace(ProcessState& state, const ArrayXd& down_fraction,
                                 ArrayXd& workspace);
  double epsilon_ = 0;
  int bound_ = 0;
  long long step_ = 0;
  ArrayXd masses_;
};

// Validates the mass vector (non-negative, sums to 1 within 1e-9) and throws
// BadMassVectorError otherwise.
ProcessState init_process(double epsilon, const ArrayXd& initial_masses);

// Moves mass per the down-fraction vector, reflecting at the endpoints, and
// advances the step counter. `workspace` must have one entry per slot.
void apply_plan_inplace(ProcessState& state, const ArrayXd& down_fraction,
                        ArrayXd& workspace);

// Share of each slot's mass moving down (to position-2); the rest moves up.
struct MovePlan {
  ArrayXd down_fraction;
};

// Where the per-position up-movement cap applies. The movement rules bound
// the up-share at sufficiently heavy positions; AllPositions enforces it on
// both sides of zero, the restricted scopes on one side only.
enum class RuleBScope { AllPositions, NegativeOnly, PositiveOnly };

// First violated movement constraint, or nullopt when the plan is admissible:
//  (a) at least 15/16 of the positive-side mass moves down;
//  (b) every in-scope position with mass >= positive_mass/B^4 sends at most
//      1/16 of its mass up.
std::optional<std::string> admissible_check(const ProcessState& state,
                                            const MovePlan& plan,
                                            RuleBScope scope = RuleBScope::AllPositions,
                                            double tol = 1e-12);

struct ProcessMetrics {
  double W = 0;              // sum_{i<0} 2^i p_i + sum_{i>0} p_i
  double M = 0;              // mean positive position (0 when no positive mass)
  double positive_mass = 0;  // sum_{i>0} p_i
};

ProcessMetrics metrics(const ProcessState& state);

class ProcessScheduler {
 public:
  virtual ~ProcessScheduler() = default;
  virtual void make_plan(const ProcessState& state, RandomStream& rng,
                         MovePlan& out) = 0;
  virtual std::string_view name() const = 0;
};

// Maximal allowed up-movement everywhere (the adversarial candidate for the
// convergence bound): light slots send everything up, heavy slots 1/16, and
// the positive-side up budget of positive_mass/16 is handed out from the top
// position downward.
std::unique_ptr<ProcessScheduler> greedy_up_scheduler(
    RuleBScope scope = RuleBScope::AllPositions);
std::unique_ptr<ProcessScheduler> all_down_scheduler();
// Every down-share drawn uniformly from its admissible interval, then the
// positive side is projected onto the aggregate budget.
std::unique_ptr<ProcessScheduler> uniform_random_scheduler(
    RuleBScope scope = RuleBScope::AllPositions);
// Every slot sends exactly 15/16 down and 1/16 up.
std::unique_ptr<ProcessScheduler> proportional_scheduler();
// Replays a recorded plan sequence (e.g. extracted from a learning run).
std::unique_ptr<ProcessScheduler> trace_replay_scheduler(std::vector<MovePlan> plans);

struct StepOptions {
  RuleBScope scope = RuleBScope::AllPositions;
  // Project inadmissible plans onto the constraint set (recording a warning);
  // with clamp off the plan is applied verbatim and only recorded as violating.
  bool clamp = true;
  double tol = 1e-12;
};

struct StepDiagnostics {
  bool clamped = false;
  std::optional<std::string> violation;
};

// One step of the process under the scheduler's plan. Mass is conserved
// exactly up to fp accumulation (asserted by the run loop, never corrected).
ProcessState process_step(const ProcessState& state, ProcessScheduler& scheduler,
                          RandomStream& rng, const StepOptions& options = {},
                          StepDiagnostics* diagnostics = nullptr);

struct RunProcessOptions {
  RuleBScope scope = RuleBScope::AllPositions;
  bool clamp = true;
  std::optional<ArrayXd> initial;  // default: all mass at +B
  double w_recurrence_tol = 1e-9;
  std::ostream* trace = nullptr;  // CSV: step,W,M,positive_mass[,slot masses]
  bool trace_slots = false;
  long long trace_every = 1;
};

struct ProcessRunSummary {
  double epsilon = 0;
  int bound = 0;
  long long steps = 0;
  std::string scheduler;
  ProcessMetrics initial_metrics;
  ProcessMetrics final_metrics;
  double convergence_bound = 0;  // 64 * eps * B^3
  bool converged = false;        // final positive mass <= convergence_bound
  long long w_recurrence_violations = 0;
  double max_w_recurrence_excess = 0;
  long long clamp_events = 0;
  long long inadmissible_steps = 0;  // clamp == false only
  double max_mass_drift = 0;         // max |sum(p) - 1| over the run
};

// Runs t_steps steps and checks the per-step W recurrence
// W_{t+1} <= (1 + 1/B^3) W_t + 2*eps (+tol) along the way. Requires
// epsilon in (0, 1/32), the range of the convergence bound.
ProcessRunSummary run_process(double epsilon, ProcessScheduler& scheduler,
                              long long t_steps, RandomStream& rng,
                              const RunProcessOptions& options = {});

}  // namespace eqboost

#endif  // EQBOOST_PROCESS_HPP_
