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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "eqboost/diagnostics.hpp"
#include "eqboost/learners.hpp"
#include "eqboost/process.hpp"

using namespace eqboost;

TEST_CASE("init_process validates the mass vector") {
  CHECK(init_process(0.25, ArrayXd::Constant(6, 1.0 / 6)).bound() == 5);
  CHECK(ProcessState::all_mass_at(0.25, 5).mass_at(5) == 1.0);
  CHECK_THROWS_AS(init_process(0.25, ArrayXd::Constant(6, 0.15)), BadMassVectorError);
  CHECK_THROWS_AS(init_process(0.25, ArrayXd::Constant(4, 0.25)), BadMassVectorError);
  ArrayXd neg = ArrayXd::Constant(6, 0.4);
  neg[0] = -1.0;
  CHECK_THROWS_AS(init_process(0.25, neg), BadMassVectorError);
  CHECK_THROWS_AS(ProcessState::all_mass_at(0.25, 4), BadMassVectorError);  // even position
}

TEST_CASE("admissibility checks both movement rules") {
  // B = 3; half the mass at -1, half at +1.
  ArrayXd m = ArrayXd::Zero(4);
  m[1] = m[2] = 0.5;
  const ProcessState s = init_process(0.5, m);

  CHECK(!admissible_check(s, MovePlan{ArrayXd::Ones(4)}).has_value());

  MovePlan weak{ArrayXd::Ones(4)};
  weak.down_fraction[2] = 0.8;  // only 0.8 < 15/16 of the positive mass moves down
  const auto va = admissible_check(s, weak);
  REQUIRE(va.has_value());
  CHECK(va->find("rule (a)") != std::string::npos);

  MovePlan up_heavy{ArrayXd::Ones(4)};
  up_heavy.down_fraction[1] = 0.9;  // heavy negative position pushes 0.1 > 1/16 up
  const auto vb = admissible_check(s, up_heavy);
  REQUIRE(vb.has_value());
  CHECK(vb->find("rule (b)") != std::string::npos);

  // With the positive-only scope the same plan passes rule (b)...
  CHECK(!admissible_check(s, up_heavy, RuleBScope::PositiveOnly).has_value());
  // ...and with the negative-only scope it still fails.
  CHECK(admissible_check(s, up_heavy, RuleBScope::NegativeOnly).has_value());
}

TEST_CASE("greedy-up step matches the hand simulation") {
  ArrayXd m = ArrayXd::Zero(4);
  m[1] = m[2] = 0.5;
  const ProcessState s = init_process(0.5, m);
  auto sched = greedy_up_scheduler();
  RandomStream rng(0);
  StepDiagnostics diag;
  const ProcessState next = process_step(s, *sched, rng, {}, &diag);
  CHECK(!diag.violation.has_value());
  CHECK(next.mass_at(-3) == doctest::Approx(0.46875).epsilon(1e-15));
  CHECK(next.mass_at(-1) == doctest::Approx(0.46875).epsilon(1e-15));
  CHECK(next.mass_at(1) == doctest::Approx(0.03125).epsilon(1e-15));
  CHECK(next.mass_at(3) == doctest::Approx(0.03125).epsilon(1e-15));
  CHECK(next.step_count() == 1);
}

TEST_CASE("mass at the bottom reflects and stays") {
  const ProcessState s = ProcessState::all_mass_at(0.5, -3);
  auto sched = all_down_scheduler();
  RandomStream rng(0);
  const ProcessState next = process_step(s, *sched, rng);
  CHECK(next.mass_at(-3) == 1.0);
}

TEST_CASE("mass is conserved across a million random admissible steps") {
  RandomStream rng(7);
  auto sched = uniform_random_scheduler();
  ProcessState s = ProcessState::uniform_start(1.0 / 64);
  ArrayXd ws(s.slots());
  MovePlan plan;
  double max_drift = 0.0;
  const long long steps = 1000000;
  for (long long i = 0; i < steps; ++i) {
    sched->make_plan(s, rng, plan);
    apply_plan_inplace(s, plan.down_fraction, ws);
    if ((i & 1023) == 0) max_drift = std::max(max_drift, std::abs(s.masses().sum() - 1.0));
  }
  max_drift = std::max(max_drift, std::abs(s.masses().sum() - 1.0));
  CHECK(max_drift <= 1e-9);
}

TEST_CASE("metrics follow the definitions") {
  const ProcessState uniform = init_process(0.5, ArrayXd::Constant(4, 0.25));
  const ProcessMetrics m = metrics(uniform);
  CHECK(m.W == doctest::Approx(0.65625).epsilon(1e-15));
  CHECK(m.M == 2.0);
  CHECK(m.positive_mass == 0.5);

  const ProcessMetrics bottom = metrics(ProcessState::all_mass_at(0.5, -3));
  CHECK(bottom.W == std::exp2(-3));
  CHECK(bottom.positive_mass == 0.0);
  CHECK(bottom.M == 0.0);

  const ProcessMetrics one = metrics(ProcessState::all_mass_at(0.5, 1));
  CHECK(one.W == 1.0);
  CHECK(one.M == 1.0);
}

TEST_CASE("sandwich: positive mass <= W <= 1 along runs") {
  RandomStream rng(9);
  auto sched = uniform_random_scheduler();
  ProcessState s = ProcessState::all_mass_at(1.0 / 64, vote_bound(1.0 / 64));
  ArrayXd ws(s.slots());
  MovePlan plan;
  for (int i = 0; i < 5000; ++i) {
    sched->make_plan(s, rng, plan);
    apply_plan_inplace(s, plan.down_fraction, ws);
    const ProcessMetrics m = metrics(s);
    CHECK(m.positive_mass <= m.W + 1e-12);
    CHECK(m.W <= 1.0 + 1e-9);
  }
}

TEST_CASE("all-down drains the positive side and stays below the bound") {
  const double eps = 1.0 / 64;
  const int b = vote_bound(eps);
  auto sched = all_down_scheduler();
  RandomStream rng(0);
  RunProcessOptions ro;
  const ProcessRunSummary s = run_process(eps, *sched, 2 * b, rng, ro);
  CHECK(s.final_metrics.positive_mass == 0.0);
  CHECK(s.converged);
  CHECK(s.w_recurrence_violations == 0);

  // Once the positive side is empty it stays empty (monotone after B steps).
  ProcessState state = ProcessState::all_mass_at(eps, b);
  ArrayXd ws(state.slots());
  MovePlan plan;
  double last = 1.0;
  bool monotone = true;
  for (int i = 0; i < 4 * b; ++i) {
    sched->make_plan(state, rng, plan);
    apply_plan_inplace(state, plan.down_fraction, ws);
    const double pos = metrics(state).positive_mass;
    if (i >= b) monotone = monotone && pos <= last + 1e-15;
    last = pos;
  }
  CHECK(monotone);
}

TEST_CASE("the convergence bound holds for greedy-up and seeded random schedulers") {
  const double eps = 1.0 / 64;
  const int b = vote_bound(eps);
  const long long steps = 10LL * b * b * b;
  RandomStream rng(1);

  auto greedy = greedy_up_scheduler();
  const ProcessRunSummary g = run_process(eps, *greedy, steps, rng);
  CHECK(g.converged);
  CHECK(g.w_recurrence_violations == 0);
  CHECK(g.clamp_events == 0);
  CHECK(g.max_mass_drift <= 1e-9);

  for (int seed = 0; seed < 20; ++seed) {
    RandomStream srng = RandomStream(100 + seed);
    auto sched = uniform_random_scheduler();
    const ProcessRunSummary u = run_process(eps, *sched, steps, srng);
    CHECK(u.converged);
    CHECK(u.w_recurrence_violations == 0);
  }
}

TEST_CASE("proportional scheduler is admissible and convergent") {
  const double eps = 1.0 / 64;
  const int b = vote_bound(eps);
  auto sched = proportional_scheduler();
  RandomStream rng(2);
  const ProcessRunSummary s = run_process(eps, *sched, 10LL * b * b * b, rng);
  CHECK(s.clamp_events == 0);
  CHECK(s.converged);
  CHECK(s.w_recurrence_violations == 0);
}

TEST_CASE("inadmissible plans are clamped (with a warning) or recorded") {
  class TooGreedy final : public ProcessScheduler {
   public:
    std::string_view name() const override { return "too-greedy"; }
    void make_plan(const ProcessState& state, RandomStream&, MovePlan& out) override {
      out.down_fraction = ArrayXd::Zero(state.slots());  // everything up: inadmissible
    }
  };
  TooGreedy sched;
  RandomStream rng(3);

  RunProcessOptions clamped;
  const ProcessRunSummary a = run_process(1.0 / 64, sched, 50, rng, clamped);
  CHECK(a.clamp_events == 50);
  CHECK(a.w_recurrence_violations == 0);  // projection restores admissibility

  RunProcessOptions verbatim;
  verbatim.clamp = false;
  const ProcessRunSummary b = run_process(1.0 / 64, sched, 50, rng, verbatim);
  CHECK(b.inadmissible_steps == 50);
}

TEST_CASE("trace output is flag-gated CSV") {
  const double eps = 1.0 / 64;
  auto sched = all_down_scheduler();
  RandomStream rng(4);
  std::ostringstream trace;
  RunProcessOptions ro;
  ro.trace = &trace;
  ro.trace_slots = true;
  run_process(eps, *sched, 3, rng, ro);
  const std::string text = trace.str();
  CHECK(text.rfind("step,W,M,positive_mass,p-13", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);  // header + steps 0..3
}

// Bridge between the learner and the abstract process: per-round level-set
// masses of vote_g evolve by moves the process allows, whenever the round's
// chosen hypothesis errs on at most 1/16 of the majority's error set and of
// every heavy correct level set.
TEST_CASE("learner trajectories replay as admissible process steps") {
  const Index n = 1024;
  const auto cls = HypothesisClass::thresholds();
  const auto dist = uniform_distribution(n);
  RandomStream master(31);

  int admissible_rounds = 0, events_rounds = 0, checked_rounds = 0, replayed = 0;
  for (int trial = 0; trial < 5; ++trial) {
    RandomStream g_rng = master.substream(trial, 0);
    const Hypothesis g = cls.sample_member(n, g_rng);
    const ArrayXi gt = g.evaluate(n);
    const double eps = 1.0 / 8;
    const Schedule sch = schedule_params(eps, 1.0 / 3, 1, ScheduleMode::Practical);
    const int b = sch.bound;
    const double b4 = std::pow(b, 4.0);

    struct Round {
      ArrayXd masses;
      MovePlan plan;
      bool events_hold;
      ArrayXd next_masses;
    };
    std::vector<Round> rounds;

    EqLearnOptions opts;
    opts.observer = [&](long long, const VoteState& state, const Hypothesis& next) {
      const ArrayXi vg = -gt * state.votes();  // tested identity
      const ArrayXi nt = next.evaluate(n);

      Round r;
      r.masses = ArrayXd::Zero(b + 1);
      ArrayXd down = ArrayXd::Zero(b + 1);
      for (Index x = 0; x < n; ++x) {
        const Index slot = (vg[x] + b) / 2;
        r.masses[slot] += dist.weight(x);
        if (nt[x] == gt[x]) down[slot] += dist.weight(x);  // correct vote moves down
      }
      r.plan.down_fraction = ArrayXd::Ones(b + 1);
      for (Index k = 0; k <= b; ++k)
        if (r.masses[k] > 0) r.plan.down_fraction[k] = down[k] / r.masses[k];

      // Did this round's hypothesis satisfy both per-round error bounds?
      double wrong_mass = 0, wrong_and_next_wrong = 0;
      for (Index x = 0; x < n; ++x)
        if (vg[x] > 0) {
          wrong_mass += dist.weight(x);
          if (nt[x] != gt[x]) wrong_and_next_wrong += dist.weight(x);
        }
      bool events = wrong_and_next_wrong <= wrong_mass / 16.0 + 1e-12;
      for (int v = 1; v <= b && events; v += 2) {
        double region = 0, region_and_wrong = 0;
        for (Index x = 0; x < n; ++x)
          if (vg[x] == -v) {
            region += dist.weight(x);
            if (nt[x] != gt[x]) region_and_wrong += dist.weight(x);
          }
        if (region >= wrong_mass / b4 && region > 0)
          events = region_and_wrong <= region / 16.0 + 1e-12;
      }
      r.events_hold = events;

      // Exact next-round masses, for the replay comparison.
      ArrayXi vg_next(n);
      for (Index x = 0; x < n; ++x) {
        const int term = nt[x] == gt[x] ? -1 : 1;
        vg_next[x] = clip(vg[x] + 2 * term, b);
      }
      r.next_masses = ArrayXd::Zero(b + 1);
      for (Index x = 0; x < n; ++x) r.next_masses[(vg_next[x] + b) / 2] += dist.weight(x);

      rounds.push_back(std::move(r));
    };

    ExactEqSource source(dist, g, master.substream(trial, 1));
    eq_learn(cls, n, source, sch, opts);

    for (const auto& r : rounds) {
      if (r.masses.sum() <= 0) continue;
      ProcessState state(eps, r.masses / r.masses.sum());
      MovePlan plan = r.plan;
      ++checked_rounds;
      // The per-round guarantees control the aggregate positive up-flow and
      // the per-position up-flow at heavy negative positions.
      const auto violation =
          admissible_check(state, plan, RuleBScope::NegativeOnly, 1e-9);
      if (r.events_hold) {
        ++events_rounds;
        admissible_rounds += !violation.has_value();
      }

      // Replaying the extracted plan reproduces the next level-set masses.
      ArrayXd ws(state.slots());
      apply_plan_inplace(state, plan.down_fraction, ws);
      const ArrayXd replayed_masses = state.masses() * r.masses.sum();
      if (((replayed_masses - r.next_masses).abs() < 1e-12).all()) ++replayed;
    }

    // Every checked round (events or not) must replay exactly.
    CHECK(replayed == checked_rounds);
  }

  CHECK(checked_rounds > 0);
  CHECK(events_rounds > 0);
  // Every round where both events held is admissible under the proof's scope.
  CHECK(admissible_rounds == events_rounds);
}

TEST_CASE("the trajectory recorder extracts masses and plans exactly") {
  RandomStream rng(77);
  const Index n = 256;
  const auto dist = eqboost::uniform_distribution(n);
  const auto cls = HypothesisClass::intervals();
  const Hypothesis g = cls.sample_member(n, rng);
  const ArrayXi gt = g.evaluate(n);

  VoteState state(make_vote_params(0.25), n);
  for (int j = 0; j < 4; ++j) state.extend(cls.sample_member(n, rng));
  const Hypothesis next = cls.sample_member(n, rng);
  const ArrayXi nt = next.evaluate(n);
  const int b = state.bound();

  // Independent recomputation of the level masses and realized plan.
  const ArrayXi vg = -gt * state.votes();
  ArrayXd masses = ArrayXd::Zero(b + 1), down = ArrayXd::Zero(b + 1);
  for (Index x = 0; x < n; ++x) {
    masses[(vg[x] + b) / 2] += dist.weight(x);
    if (nt[x] == gt[x]) down[(vg[x] + b) / 2] += dist.weight(x);
  }

  CHECK(((correctness_level_masses(state, g, dist) - masses).abs() < 1e-15).all());
  const MovePlan plan = realized_move_plan(state, g, next, dist);
  for (Index k = 0; k <= b; ++k) {
    if (masses[k] > 0)
      CHECK(plan.down_fraction[k] == doctest::Approx(down[k] / masses[k]).epsilon(1e-12));
    else
      CHECK(plan.down_fraction[k] == 1.0);
  }
}

TEST_CASE("recorded learner trajectories chain and replay through the process") {
  const Index n = 8192;
  const auto cls = HypothesisClass::thresholds();
  const auto dist = uniform_distribution(n);
  RandomStream master(41);
  const Hypothesis g = cls.sample_member(n, master);
  const double eps = 1.0 / 8;
  ScheduleOverrides ov;
  ov.c_m = 4;  // small batches so the run takes several rounds
  const Schedule sch = schedule_params(eps, 1.0 / 3, 1, ScheduleMode::Practical, ov);

  TrajectoryRecorder recorder(g, dist);
  EqLearnOptions opts;
  opts.observer = recorder.observer();
  ExactEqSource source(dist, g, master.substream(0, 1));
  eq_learn(cls, n, source, sch, opts);

  const auto& rounds = recorder.rounds();
  REQUIRE(rounds.size() > 1);
  for (std::size_t r = 0; r + 1 < rounds.size(); ++r)
    CHECK(((rounds[r].next_masses - rounds[r + 1].masses).abs() < 1e-15).all());

  // Replay the whole trajectory through the process machinery.
  auto replay = trace_replay_scheduler(recorder.plans());
  ProcessState state(eps, rounds.front().masses);
  RandomStream rng(0);
  StepOptions step_opts;
  step_opts.clamp = false;  // replay verbatim; admissibility is recorded, not forced
  for (const auto& round : rounds) {
    state = process_step(state, *replay, rng, step_opts);
    CHECK(((state.masses() - round.next_masses).abs() < 1e-12).all());
  }

  // Rounds satisfying both per-round guarantees are admissible moves.
  int guaranteed = 0;
  for (const auto& round : rounds) {
    if (!round.guarantees_hold) continue;
    ++guaranteed;
    ProcessState before(eps, round.masses);
    CHECK(!admissible_check(before, round.plan, RuleBScope::NegativeOnly, 1e-9)
               .has_value());
  }
  CHECK(guaranteed > 0);
}

TEST_CASE("trace replay scheduler replays plans verbatim and then runs out") {
  std::vector<MovePlan> plans;
  plans.push_back(MovePlan{ArrayXd::Ones(4)});
  plans.push_back(MovePlan{ArrayXd::Constant(4, 15.0 / 16.0)});
  auto sched = trace_replay_scheduler(plans);
  RandomStream rng(0);
  ProcessState s = ProcessState::all_mass_at(0.5, 3);
  MovePlan out;
  sched->make_plan(s, rng, out);
  CHECK((out.down_fraction == 1.0).all());
  sched->make_plan(s, rng, out);
  CHECK((out.down_fraction == 15.0 / 16.0).all());
  CHECK_THROWS_AS(sched->make_plan(s, rng, out), OutOfRangeError);
}

TEST_CASE("run_process rejects epsilon outside the convergence range") {
  auto sched = all_down_scheduler();
  RandomStream rng(0);
  CHECK_THROWS_AS(run_process(0.25, *sched, 10, rng), OutOfRangeError);
}
