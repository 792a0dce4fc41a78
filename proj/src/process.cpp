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

#include "eqboost/process.hpp"

#include <cmath>
#include <ostream>

namespace eqboost {

namespace {

constexpr double kDownShareFloor = 15.0 / 16.0;
constexpr double kUpShareCap = 1.0 / 16.0;

bool scope_covers(RuleBScope scope, bool positive) {
  if (scope == RuleBScope::AllPositions) return true;
  return positive ? scope == RuleBScope::PositiveOnly : scope == RuleBScope::NegativeOnly;
}

double positive_sum(const ProcessState& state) {
  const Index n = state.slots();
  double s = 0.0;
  for (Index k = (n + 1) / 2; k < n; ++k) s += state.masses()[k];
  return s;
}

// Heaviness threshold of movement rule (b): positive_mass / B^4.
double heavy_threshold(const ProcessState& state, double pos_mass) {
  const double b = static_cast<double>(state.bound());
  return pos_mass / (b * b * b * b);
}

void project_to_admissible(const ProcessState& state, RuleBScope scope, MovePlan& plan) {
  const Index n = state.slots();
  const double pos_mass = positive_sum(state);
  const double threshold = heavy_threshold(state, pos_mass);
  const ArrayXd& p = state.masses();

  for (Index k = 0; k < n; ++k) {
    double d = std::clamp(plan.down_fraction[k], 0.0, 1.0);
    const bool positive = state.position(k) > 0;
    if (scope_covers(scope, positive) && p[k] >= threshold && p[k] > 0.0)
      d = std::max(d, kDownShareFloor);
    plan.down_fraction[k] = d;
  }

  const double budget = kUpShareCap * pos_mass;
  double up = 0.0;
  for (Index k = (n + 1) / 2; k < n; ++k)
    up += (1.0 - plan.down_fraction[k]) * p[k];
  if (up > budget && up > 0.0) {
    const double scale = budget / up;
    for (Index k = (n + 1) / 2; k < n; ++k)
      plan.down_fraction[k] = 1.0 - (1.0 - plan.down_fraction[k]) * scale;
  }
}

}  // namespace

ProcessState::ProcessState(double epsilon, ArrayXd masses)
    : epsilon_(epsilon), bound_(vote_bound(epsilon)), masses_(std::move(masses)) {
  if (masses_.size() != bound_ + 1)
    throw BadMassVectorError("ProcessState: expected " + std::to_string(bound_ + 1) +
                             " slots for B=" + std::to_string(bound_));
}

ProcessState ProcessState::all_mass_at(double epsilon, int position) {
  const int b = vote_bound(epsilon);
  ArrayXd m = ArrayXd::Zero(b + 1);
  if (position < -b || position > b || (position + b) % 2 != 0)
    throw BadMassVectorError("all_mass_at: position must be odd and within [-B, B]");
  m[(position + b) / 2] = 1.0;
  return ProcessState(epsilon, std::move(m));
}

ProcessState ProcessState::uniform_start(double epsilon) {
  const int b = vote_bound(epsilon);
  return ProcessState(epsilon, ArrayXd::Constant(b + 1, 1.0 / (b + 1)));
}

Index ProcessState::slot(int position) const {
  if (position < -bound_ || position > bound_ || (position + bound_) % 2 != 0)
    throw OutOfRangeError("slot: position must be odd and within [-B, B]");
  return (position + bound_) / 2;
}

ProcessState init_process(double epsilon, const ArrayXd& initial_masses) {
  for (Index i = 0; i < initial_masses.size(); ++i)
    if (!(initial_masses[i] >= 0.0))
      throw BadMassVectorError("init_process: negative mass at slot " + std::to_string(i));
  if (std::abs(initial_masses.sum() - 1.0) > 1e-9)
    throw BadMassVectorError("init_process: masses must sum to 1");
  return ProcessState(epsilon, initial_masses);
}

std::optional<std::string> admissible_check(const ProcessState& state,
                                            const MovePlan& plan, RuleBScope scope,
                                            double tol) {
  const Index n = state.slots();
  if (plan.down_fraction.size() != n)
    return "plan covers " + std::to_string(plan.down_fraction.size()) + " slots, state has " +
           std::to_string(n);

  const ArrayXd& p = state.masses();
  for (Index k = 0; k < n; ++k) {
    const double d = plan.down_fraction[k];
    if (d < -tol || d > 1.0 + tol)
      return "down fraction " + std::to_string(d) + " outside [0,1] at position " +
             std::to_string(state.position(k));
  }

  const double pos_mass = positive_sum(state);
  const double threshold = heavy_threshold(state, pos_mass);

  // (a): at least 15/16 of the positive-side mass moves down.
  double down_pos = 0.0;
  for (Index k = (n + 1) / 2; k < n; ++k) down_pos += plan.down_fraction[k] * p[k];
  if (down_pos < kDownShareFloor * pos_mass - tol)
    return "rule (a): positive down mass " + std::to_string(down_pos) + " below 15/16 of " +
           std::to_string(pos_mass);

  // (b): heavy in-scope positions send at most 1/16 of their mass up.
  for (Index k = 0; k < n; ++k) {
    const bool positive = state.position(k) > 0;
    if (!scope_covers(scope, positive)) continue;
    if (p[k] < threshold || p[k] <= 0.0) continue;
    const double up = (1.0 - plan.down_fraction[k]) * p[k];
    if (up > kUpShareCap * p[k] + tol)
      return "rule (b): up mass " + std::to_string(up) + " exceeds p/16 at position " +
             std::to_string(state.position(k));
  }

  return std::nullopt;
}

ProcessMetrics metrics(const ProcessState& state) {
  ProcessMetrics m;
  double weighted_pos = 0.0;
  for (Index k = 0; k < state.slots(); ++k) {
    const int pos = state.position(k);
    const double p = state.masses()[k];
    if (pos < 0) {
      m.W += std::exp2(static_cast<double>(pos)) * p;
    } else {
      m.W += p;
      m.positive_mass += p;
      weighted_pos += pos * p;
    }
  }
  m.M = m.positive_mass > 0.0 ? weighted_pos / m.positive_mass : 0.0;
  return m;
}

void apply_plan_inplace(ProcessState& state, const ArrayXd& down_fraction,
                        ArrayXd& workspace) {
  const Index n = state.masses_.size();
  workspace.setZero();
  double* out = workspace.data();
  const double* p = state.masses_.data();
  const double* d = down_fraction.data();

  {  // bottom slot: the down share reflects back
    const double dn = d[0] * p[0];
    out[0] += dn;
    out[1] += p[0] - dn;
  }
  for (Index k = 1; k + 1 < n; ++k) {
    const double dn = d[k] * p[k];
    out[k - 1] += dn;
    out[k + 1] += p[k] - dn;
  }
  {  // top slot: the up share reflects back
    const double dn = d[n - 1] * p[n - 1];
    out[n - 2] += dn;
    out[n - 1] += p[n - 1] - dn;
  }
  state.masses_.swap(workspace);
  ++state.step_;
}

// --- schedulers --------------------------------------------------------------

namespace {

class GreedyUpScheduler final : public ProcessScheduler {
 public:
  explicit GreedyUpScheduler(RuleBScope scope) : scope_(scope) {}
  std::string_view name() const override { return "greedy-up"; }

  void make_plan(const ProcessState& state, RandomStream&, MovePlan& out) override {
    const Index n = state.slots();
    out.down_fraction.resize(n);
    const ArrayXd& p = state.masses();
    const double pos_mass = positive_sum(state);
    const double threshold = heavy_threshold(state, pos_mass);

    const Index first_pos = (n + 1) / 2;
    for (Index k = 0; k < first_pos; ++k) {
      const bool capped =
          scope_covers(scope_, false) && p[k] >= threshold && p[k] > 0.0;
      out.down_fraction[k] = capped ? kDownShareFloor : 0.0;
    }
    // Hand the positive up-budget out from the top position downward.
    double budget = kUpShareCap * pos_mass;
    for (Index k = n - 1; k >= first_pos; --k) {
      if (p[k] <= 0.0) {
        out.down_fraction[k] = 1.0;
        continue;
      }
      const double cap =
          (scope_covers(scope_, true) && p[k] >= threshold) ? kUpShareCap : 1.0;
      const double up_share = std::min(cap, budget / p[k]);
      out.down_fraction[k] = 1.0 - up_share;
      budget -= up_share * p[k];
      if (budget < 0.0) budget = 0.0;
    }
  }

 private:
  RuleBScope scope_;
};

class AllDownScheduler final : public ProcessScheduler {
 public:
  std::string_view name() const override { return "all-down"; }
  void make_plan(const ProcessState& state, RandomStream&, MovePlan& out) override {
    out.down_fraction = ArrayXd::Ones(state.slots());
  }
};

class ProportionalScheduler final : public ProcessScheduler {
 public:
  std::string_view name() const override { return "proportional"; }
  void make_plan(const ProcessState& state, RandomStream&, MovePlan& out) override {
    out.down_fraction = ArrayXd::Constant(state.slots(), kDownShareFloor);
  }
};

class UniformRandomScheduler final : public ProcessScheduler {
 public:
  explicit UniformRandomScheduler(RuleBScope scope) : scope_(scope) {}
  std::string_view name() const override { return "uniform-random"; }

  void make_plan(const ProcessState& state, RandomStream& rng, MovePlan& out) override {
    const Index n = state.slots();
    out.down_fraction.resize(n);
    const ArrayXd& p = state.masses();
    const double pos_mass = positive_sum(state);
    const double threshold = heavy_threshold(state, pos_mass);

    for (Index k = 0; k < n; ++k) {
      const bool capped = scope_covers(scope_, state.position(k) > 0) &&
                          p[k] >= threshold && p[k] > 0.0;
      const double lo = capped ? kDownShareFloor : 0.0;
      out.down_fraction[k] = lo + rng.next_double() * (1.0 - lo);
    }
    // Project the positive side onto the aggregate budget of rule (a).
    const Index first_pos = (n + 1) / 2;
    double up = 0.0;
    for (Index k = first_pos; k < n; ++k) up += (1.0 - out.down_fraction[k]) * p[k];
    const double budget = kUpShareCap * pos_mass;
    if (up > budget && up > 0.0) {
      const double scale = budget / up;
      for (Index k = first_pos; k < n; ++k)
        out.down_fraction[k] = 1.0 - (1.0 - out.down_fraction[k]) * scale;
    }
  }

 private:
  RuleBScope scope_;
};

class TraceReplayScheduler final : public ProcessScheduler {
 public:
  explicit TraceReplayScheduler(std::vector<MovePlan> plans) : plans_(std::move(plans)) {}
  std::string_view name() const override { return "trace-replay"; }
  void make_plan(const ProcessState&, RandomStream&, MovePlan& out) override {
    if (cursor_ >= plans_.size())
      throw OutOfRangeError("trace-replay: plan sequence exhausted");
    out = plans_[cursor_++];
  }

 private:
  std::vector<MovePlan> plans_;
  std::size_t cursor_ = 0;
};

}  // namespace

std::unique_ptr<ProcessScheduler> greedy_up_scheduler(RuleBScope scope) {
  return std::make_unique<GreedyUpScheduler>(scope);
}
std::unique_ptr<ProcessScheduler> all_down_scheduler() {
  return std::make_unique<AllDownScheduler>();
}
std::unique_ptr<ProcessScheduler> uniform_random_scheduler(RuleBScope scope) {
  return std::make_unique<UniformRandomScheduler>(scope);
}
std::unique_ptr<ProcessScheduler> proportional_scheduler() {
  return std::make_unique<ProportionalScheduler>();
}
std::unique_ptr<ProcessScheduler> trace_replay_scheduler(std::vector<MovePlan> plans) {
  return std::make_unique<TraceReplayScheduler>(std::move(plans));
}

ProcessState process_step(const ProcessState& state, ProcessScheduler& scheduler,
                          RandomStream& rng, const StepOptions& options,
                          StepDiagnostics* diagnostics) {
  MovePlan plan;
  scheduler.make_plan(state, rng, plan);
  auto violation = admissible_check(state, plan, options.scope, options.tol);
  if (violation) {
    if (diagnostics) diagnostics->violation = violation;
    if (options.clamp) {
      project_to_admissible(state, options.scope, plan);
      if (diagnostics) diagnostics->clamped = true;
    }
  }
  ProcessState next = state;
  ArrayXd workspace(state.slots());
  apply_plan_inplace(next, plan.down_fraction, workspace);
  return next;
}

ProcessRunSummary run_process(double epsilon, ProcessScheduler& scheduler,
                              long long t_steps, RandomStream& rng,
                              const RunProcessOptions& options) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0 / 32.0))
    throw OutOfRangeError("run_process: epsilon must be in (0, 1/32)");
  if (t_steps < 0) throw OutOfRangeError("run_process: negative step count");

  ProcessState state = options.initial
                           ? init_process(epsilon, *options.initial)
                           : ProcessState::all_mass_at(epsilon, vote_bound(epsilon));
  const int b = state.bound();
  const Index n = state.slots();
  const double b3 = static_cast<double>(b) * b * b;

  ProcessRunSummary summary;
  summary.epsilon = epsilon;
  summary.bound = b;
  summary.scheduler = std::string(scheduler.name());
  summary.steps = t_steps;
  summary.convergence_bound = 64.0 * epsilon * b3;
  summary.initial_metrics = metrics(state);

  // Per-slot W weights: 2^i on the negative side, 1 on the positive side.
  ArrayXd w_weight(n);
  for (Index k = 0; k < n; ++k) {
    const int pos = state.position(k);
    w_weight[k] = pos < 0 ? std::exp2(static_cast<double>(pos)) : 1.0;
  }
  const double growth = 1.0 + 1.0 / b3;

  auto emit_trace = [&](long long step) {
    if (!options.trace) return;
    if (step % options.trace_every != 0 && step != t_steps) return;
    const ProcessMetrics m = metrics(state);
    *options.trace << step << ',' << m.W << ',' << m.M << ',' << m.positive_mass;
    if (options.trace_slots)
      for (Index k = 0; k < n; ++k) *options.trace << ',' << state.masses()[k];
    *options.trace << '\n';
  };

  if (options.trace) {
    *options.trace << "step,W,M,positive_mass";
    if (options.trace_slots)
      for (Index k = 0; k < n; ++k) *options.trace << ",p" << state.position(k);
    *options.trace << '\n';
    emit_trace(0);
  }

  MovePlan plan;
  plan.down_fraction.resize(n);
  ArrayXd workspace(n);
  double w_before = (w_weight * state.masses()).sum();

  for (long long step = 0; step < t_steps; ++step) {
    scheduler.make_plan(state, rng, plan);
    auto violation = admissible_check(state, plan, options.scope, 1e-12);
    if (violation) {
      if (options.clamp) {
        project_to_admissible(state, options.scope, plan);
        ++summary.clamp_events;
      } else {
        ++summary.inadmissible_steps;
      }
    }

    apply_plan_inplace(state, plan.down_fraction, workspace);

    const double w_after = (w_weight * state.masses()).sum();
    const double allowed = growth * w_before + 2.0 * epsilon + options.w_recurrence_tol;
    if (w_after > allowed) {
      ++summary.w_recurrence_violations;
      summary.max_w_recurrence_excess =
          std::max(summary.max_w_recurrence_excess, w_after - allowed);
    }
    w_before = w_after;

    const double drift = std::abs(state.masses().sum() - 1.0);
    summary.max_mass_drift = std::max(summary.max_mass_drift, drift);

    emit_trace(step + 1);
  }

  summary.final_metrics = metrics(state);
  summary.converged = summary.final_metrics.positive_mass <= summary.convergence_bound;
  return summary;
}

}  // namespace eqboost
