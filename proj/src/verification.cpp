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

#include "eqboost/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "eqboost/csv.hpp"
#include "eqboost/experiments.hpp"
#include "eqboost/game.hpp"
#include "eqboost/learners.hpp"
#include "eqboost/oracles.hpp"
#include "eqboost/process.hpp"

namespace eqboost {

namespace {

class Checker {
 public:
  void require(bool cond, const std::string& what) {
    ++total_;
    if (cond) return;
    ++failures_;
    if (detail_.empty()) detail_ = what;
  }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    std::ostringstream out;
    out << (total_ - failures_) << "/" << total_ << " checks";
    if (!detail_.empty()) out << "; first failure: " << detail_;
    return out.str();
  }

 private:
  long long total_ = 0;
  long long failures_ = 0;
  std::string detail_;
};

Hypothesis random_table(Index n, RandomStream& rng) {
  ArrayXi t(n);
  for (Index i = 0; i < n; ++i) t[i] = rng.next_below(2) ? 1 : -1;
  return Hypothesis::table(std::move(t));
}

Mask random_mask(Index n, RandomStream& rng) {
  Mask m(n);
  for (Index i = 0; i < n; ++i) m[i] = rng.next_below(2) != 0;
  return m;
}

SuiteResult suite_model(std::uint64_t seed) {
  Checker c;
  RandomStream rng(seed);

  {
    const auto u = make_distribution(ArrayXd::Ones(4));
    c.require((u.weights() == 0.25).all(), "uniform(4) weights");
    ArrayXd w(4);
    w << 0, 2, 0, 2;
    const auto d = make_distribution(w);
    c.require(d.weight(1) == 0.5 && d.weight(0) == 0.0, "normalization of [0,2,0,2]");
    bool threw = false;
    try {
      ArrayXd bad(2);
      bad << 1, -1;
      make_distribution(bad);
    } catch (const NegativeWeightError&) {
      threw = true;
    }
    c.require(threw, "negative weight rejected");
  }

  {  // restriction
    const auto u = make_distribution(ArrayXd::Ones(4));
    Mask region = Mask::Constant(4, false);
    region[1] = region[3] = true;
    const auto r = restrict(u, region);
    c.require(r.weight(1) == 0.5 && r.weight(3) == 0.5 && r.weight(0) == 0.0,
              "restrict uniform(4) to {1,3}");
    c.require(std::abs(r.weights().sum() - 1.0) <= 1e-9, "restricted mass is 1");
    bool threw = false;
    try {
      restrict(u, Mask::Constant(4, false));
    } catch (const ZeroMassRegionError&) {
      threw = true;
    }
    c.require(threw, "zero-mass region rejected");
  }

  for (int round = 0; round < 50; ++round) {  // risk identities
    const Index n = 8 + rng.next_below(32);
    ArrayXd w(n);
    for (Index i = 0; i < n; ++i) w[i] = rng.next_double();
    const auto dist = make_distribution(w);
    const auto f = random_table(n, rng);
    const auto g = random_table(n, rng);
    c.require(risk(f, g, dist) == risk(g, f, dist), "risk symmetry");
    const Mask region = random_mask(n, rng);
    c.require(std::abs(risk(f, xor_region(f, region), dist) - dist.mass(region)) <= 1e-12,
              "risk(f, f^region) == mass(region)");
  }

  {  // sampler
    RandomStream a(seed + 1), b(seed + 1);
    const auto d = make_distribution((ArrayXd(2) << 0.25, 0.75).finished());
    bool same = true;
    for (int i = 0; i < 1000; ++i) same = same && sample(d, a) == sample(d, b);
    c.require(same, "identical streams sample identically");

    const auto pm = point_mass(3, 1);
    bool always = true;
    for (int i = 0; i < 100; ++i) always = always && sample(pm, a) == 1;
    c.require(always, "point mass sampling");

    const auto u2 = uniform_distribution(2);
    long long zeros = 0;
    const long long draws = 100000;
    for (long long i = 0; i < draws; ++i) zeros += sample(u2, a) == 0;
    const double freq = static_cast<double>(zeros) / draws;
    c.require(std::abs(freq - 0.5) <= 0.01, "uniform(2) frequency within 0.5 +- 0.01");
  }

  {  // vc dimensions
    c.require(vc_dim(HypothesisClass::thresholds()) == 1, "vc(thresholds)");
    c.require(vc_dim(HypothesisClass::intervals()) == 2, "vc(intervals)");
    c.require(vc_dim(HypothesisClass::union_of_k_intervals(3)) == 6, "vc(union-3)");
    std::vector<Hypothesis> single{Hypothesis::table(ArrayXi::Constant(6, 1))};
    c.require(vc_dim(HypothesisClass::explicit_finite(single)) == 0,
              "vc of a one-member class");
  }

  return SuiteResult{"model", c.ok(), c.summary()};
}

SuiteResult suite_voting(std::uint64_t seed) {
  Checker c;
  RandomStream rng(seed);

  c.require(vote_bound(0.25) == 5, "vote_bound(1/4)");
  c.require(vote_bound(1.0 / 32.0) == 11, "vote_bound(1/32)");
  c.require(vote_bound(0.03) == 13, "vote_bound(0.03)");
  c.require(clip(7, 5) == 5 && clip(-9, 5) == -5 && clip(3, 5) == 3, "clip");

  const double eps_choices[] = {0.25, 0.125, 1.0 / 32.0};
  for (int round = 0; round < 400; ++round) {
    const double eps = eps_choices[rng.next_below(3)];
    const VoteParams params = make_vote_params(eps);
    const Index n = 8 + rng.next_below(24);
    const int len = 1 + static_cast<int>(rng.next_below(10));
    const Hypothesis g = random_table(n, rng);
    const ArrayXi gt = g.evaluate(n);

    VoteState state(params, n);
    ArrayXi scratch;
    for (int j = 0; j < len; ++j) {
      const Hypothesis h = random_table(n, rng);
      const ArrayXi ht = h.evaluate(n);
      state.extend(h);
      if (j == 0)
        scratch = ht;
      else
        scratch = (scratch + 2 * ht).cwiseMax(-params.bound).cwiseMin(params.bound);
    }
    c.require((state.votes() == scratch).all(), "incremental == from-scratch recursion");
    bool odd_in_range = true;
    for (Index x = 0; x < n; ++x)
      odd_in_range = odd_in_range && state.votes()[x] % 2 != 0 &&
                     std::abs(state.votes()[x]) <= params.bound;
    c.require(odd_in_range, "votes odd and in [-B,B]");

    const ArrayXi vg = vote_g(state, g);
    c.require((vg == -gt * state.votes()).all(), "vote_g identity");
    const ArrayXi maj = state.majority().evaluate(n);
    bool maj_iff = true;
    for (Index x = 0; x < n; ++x) maj_iff = maj_iff && ((maj[x] == gt[x]) == (vg[x] < 0));
    c.require(maj_iff, "majority correct iff vote_g < 0");

    // Level sets partition the space.
    ArrayXi covered = ArrayXi::Zero(n);
    for (int v = 1; v <= params.bound; v += 2)
      covered += state.level_set(v).cast<int>();
    c.require((covered == 1).all(), "level sets partition X");

    // risk(Maj, g, D) equals the positive vote_g mass.
    ArrayXd w(n);
    for (Index i = 0; i < n; ++i) w[i] = rng.next_double();
    const auto dist = make_distribution(w);
    double pos_mass = 0;
    for (Index x = 0; x < n; ++x)
      if (vg[x] > 0) pos_mass += dist.weight(x);
    c.require(std::abs(risk(state.majority(), g, dist) - pos_mass) <= 1e-12,
              "risk(Maj) equals positive vote_g mass");
  }

  {  // clipping sequence 1, 3, 3 for an all-agreeing committee at B = 3
    const Hypothesis plus = Hypothesis::constant(1);
    const VoteParams p3 = make_vote_params(0.5);
    VoteState s3(p3, 1);
    c.require(p3.bound == 3, "B(1/2) == 3");
    s3.extend(plus);
    c.require(s3.votes()[0] == 1, "first vote is h1 itself");
    s3.extend(plus);
    c.require(s3.votes()[0] == 3, "vote sequence hits the bound");
    s3.extend(plus);
    c.require(s3.votes()[0] == 3, "vote stays clipped at B");
  }

  return SuiteResult{"voting", c.ok(), c.summary()};
}

SuiteResult suite_oracles(std::uint64_t seed) {
  Checker c;
  RandomStream rng(seed);

  const Index n = 24;
  ArrayXd w(n);
  for (Index i = 0; i < n; ++i) w[i] = 0.2 + rng.next_double();
  const auto dist = make_distribution(w);
  const Hypothesis g = Hypothesis::threshold(10);
  const Hypothesis f = Hypothesis::threshold(15);
  const Mask wrong = disagreement(f, g, n);

  {  // support and labels
    RandomStream qrng = rng.substream(1);
    bool support_ok = true, labels_ok = true;
    for (int i = 0; i < 2000; ++i) {
      const EqResponse r = eq_query(f, g, dist, qrng);
      support_ok = support_ok && !r.yes && wrong[r.counterexample.point];
      labels_ok = labels_ok && r.counterexample.label == g(r.counterexample.point) &&
                  r.counterexample.label == -f(r.counterexample.point);
    }
    c.require(support_ok, "counterexamples land in the disagreement set");
    c.require(labels_ok, "inferred labels match the ground truth");
    c.require(eq_query(g, g, dist, qrng).yes, "YES for equivalent classifiers");
  }

  {  // exact conditional at N = 1e5
    RandomStream qrng = rng.substream(2);
    const auto batch = eq_batch(f, g, dist, 100000, qrng);
    c.require(batch.has_value(), "non-trivial batch");
    ArrayXd counts = ArrayXd::Zero(n);
    for (const auto& s : *batch) counts[s.point] += 1.0;
    const double tv = total_variation(counts / 1e5, restrict(dist, wrong).weights());
    c.require(tv <= 0.01, "empirical conditional within TV 0.01");
  }

  {  // batch draws exactly as repeated queries
    RandomStream a = rng.substream(3), b = rng.substream(3);
    const auto batch = eq_batch(f, g, dist, 64, a);
    bool same = true;
    for (const auto& s : *batch) {
      const EqResponse r = eq_query(f, g, dist, b);
      same = same && r.counterexample.point == s.point && r.counterexample.label == s.label;
    }
    c.require(same, "eq_batch matches repeated eq_query on the same stream");
  }

  {  // ex_query
    RandomStream qrng = rng.substream(4);
    bool labels = true;
    for (int i = 0; i < 500; ++i) {
      const LabeledExample e = ex_query(dist, g, qrng);
      labels = labels && e.label == g(e.point);
    }
    c.require(labels, "ex_query labels by the ground truth");
  }

  return SuiteResult{"oracles", c.ok(), c.summary()};
}

SuiteResult suite_learners(std::uint64_t seed) {
  Checker c;
  RandomStream rng(seed);

  {  // find_consistent canonical picks
    const auto cls = HypothesisClass::thresholds();
    const std::vector<LabeledExample> s1{{3, -1}, {7, 1}};
    const auto h1 = find_consistent(cls, s1, 16);
    c.require(h1 && std::get<Hypothesis::Threshold>(h1->repr()).theta == 4,
              "leftmost consistent threshold");
    const std::vector<LabeledExample> s2{{3, 1}, {7, -1}};
    c.require(!find_consistent(cls, s2, 16), "contradictory thresholds rejected");

    const auto u2 = HypothesisClass::union_of_k_intervals(2);
    const std::vector<LabeledExample> s3{{0, 1}, {2, -1}, {4, 1}, {6, -1}, {8, 1}};
    c.require(!find_consistent(u2, s3, 16), "three clusters exceed two intervals");
    const auto u3 = HypothesisClass::union_of_k_intervals(3);
    c.require(find_consistent(u3, s3, 16).has_value(), "three intervals fit");
  }

  c.require(pac_sample_size(2, 1.0 / 16, 1.0 / 16) == 192, "pac_sample_size(2,1/16,1/16)");
  c.require(pac_sample_size(1, 0.5, 0.5) == 4, "pac_sample_size(1,1/2,1/2)");

  {  // schedules
    const Schedule th = schedule_params(1.0 / 32, 1.0 / 3, 1, ScheduleMode::Theory);
    c.require(std::abs(th.eps_prime - 5e-10) <= 1e-19, "theory eps' = 5e-10");
    c.require(th.bound == 63, "theory B = 63");
    const Schedule pr = schedule_params(1.0 / 16, 1.0 / 3, 1, ScheduleMode::Practical);
    c.require(pr.bound == 9, "practical B(1/16) = 9");
    c.require(pr.eps_prime == 1.0 / 16, "practical eps' = eps");
  }

  {  // a small end-to-end run against the exact oracle
    const Index n = 4096;
    const auto cls = HypothesisClass::thresholds();
    const auto dist = uniform_distribution(n);
    const Hypothesis g = Hypothesis::threshold(1234);
    const Schedule sch = schedule_params(1.0 / 16, 1.0 / 3, 1, ScheduleMode::Practical);
    ExactEqSource source(dist, g, rng.substream(9));
    const EqLearnResult r = eq_learn(cls, n, source, sch);
    c.require(risk(r.hypothesis, g, dist) <= 1.0 / 16, "eq_learn reaches target risk");
    c.require(r.stats.distinct_functions <= sch.distinct_function_bound(),
              "distinct functions within t*(B+1)");
    c.require(r.stats.eq_queries % sch.batch_size == 0, "queries are whole batches");
  }

  return SuiteResult{"learners", c.ok(), c.summary()};
}

SuiteResult suite_process(std::uint64_t seed) {
  Checker c;
  RandomStream rng(seed);

  {  // hand-simulated greedy-up step at B = 3 (epsilon = 1/2)
    ArrayXd m = ArrayXd::Zero(4);
    m[1] = 0.5;  // position -1
    m[2] = 0.5;  // position +1
    ProcessState state = init_process(0.5, m);
    c.require(state.bound() == 3, "B(1/2) == 3");
    auto sched = greedy_up_scheduler();
    StepDiagnostics diag;
    RandomStream r0(0);
    const ProcessState next = process_step(state, *sched, r0, {}, &diag);
    c.require(!diag.violation.has_value(), "greedy-up plan admissible");
    c.require(std::abs(next.mass_at(-3) - 0.46875) <= 1e-15 &&
                  std::abs(next.mass_at(-1) - 0.46875) <= 1e-15 &&
                  std::abs(next.mass_at(1) - 0.03125) <= 1e-15 &&
                  std::abs(next.mass_at(3) - 0.03125) <= 1e-15,
              "hand-simulated step");
  }

  {  // metrics
    ProcessState s = init_process(0.5, ArrayXd::Constant(4, 0.25));
    const ProcessMetrics m = metrics(s);
    c.require(std::abs(m.W - 0.65625) <= 1e-15, "W on the uniform state");
    c.require(m.M == 2.0 && m.positive_mass == 0.5, "M and positive mass");
    const ProcessMetrics edge = metrics(ProcessState::all_mass_at(0.5, -3));
    c.require(edge.W == std::exp2(-3) && edge.positive_mass == 0.0, "W at -B");
  }

  {  // admissibility
    ArrayXd m = ArrayXd::Zero(4);
    m[2] = 0.5;
    m[1] = 0.5;
    ProcessState s = init_process(0.5, m);
    MovePlan all_down{ArrayXd::Ones(4)};
    c.require(!admissible_check(s, all_down).has_value(), "all-down admissible");
    MovePlan weak{ArrayXd::Ones(4)};
    weak.down_fraction[2] = 0.8;
    c.require(admissible_check(s, weak).has_value(), "rule (a) violation detected");
    MovePlan up_heavy{ArrayXd::Ones(4)};
    up_heavy.down_fraction[1] = 0.9;
    c.require(admissible_check(s, up_heavy).has_value(), "rule (b) violation detected");
  }

  {  // conservation under random admissible plans
    RandomStream prng = rng.substream(1);
    auto sched = uniform_random_scheduler();
    ProcessState s = ProcessState::uniform_start(1.0 / 64);
    ArrayXd ws(s.slots());
    MovePlan plan;
    double max_drift = 0;
    for (int i = 0; i < 20000; ++i) {
      sched->make_plan(s, prng, plan);
      if (admissible_check(s, plan)) {
        c.require(false, "uniform-random produced an inadmissible plan");
        break;
      }
      apply_plan_inplace(s, plan.down_fraction, ws);
      max_drift = std::max(max_drift, std::abs(s.masses().sum() - 1.0));
    }
    c.require(max_drift <= 1e-12, "mass conserved across 2e4 steps");
  }

  {  // small-scale convergence run
    const double eps = 1.0 / 64;
    const int b = vote_bound(eps);
    const long long steps = 10LL * b * b * b;
    RandomStream prng = rng.substream(2);
    auto greedy = greedy_up_scheduler();
    const ProcessRunSummary g = run_process(eps, *greedy, steps, prng);
    c.require(g.converged, "greedy-up converges below 64*eps*B^3");
    c.require(g.w_recurrence_violations == 0, "W recurrence holds (greedy-up)");
    auto rand_sched = uniform_random_scheduler();
    const ProcessRunSummary u = run_process(eps, *rand_sched, steps, prng);
    c.require(u.converged, "uniform-random converges below 64*eps*B^3");
    c.require(u.w_recurrence_violations == 0, "W recurrence holds (uniform-random)");
    auto down = all_down_scheduler();
    const ProcessRunSummary a = run_process(eps, *down, 2LL * b, prng);
    c.require(a.final_metrics.positive_mass == 0.0, "all-down empties the positive side");
  }

  return SuiteResult{"process", c.ok(), c.summary()};
}

SuiteResult suite_game(std::uint64_t seed) {
  Checker c;
  RandomStream rng(seed);

  const Index n = 256;
  const auto cls = HypothesisClass::thresholds();
  const auto dist = uniform_distribution(n);
  const Hypothesis g = Hypothesis::threshold(99);
  const GameContext ctx{&dist, &g};
  ScheduleOverrides ov;
  ov.c_t = 0.05;
  const Schedule sch = schedule_params(0.125, 1.0 / 3.0, 1, ScheduleMode::Practical, ov);

  {  // strength tests
    auto strong = make_adversary(AdversaryKind::Strong, ctx);
    const Hypothesis f = Hypothesis::threshold(150);
    const auto st = strength_test(*strong, f, g, dist);
    c.require(st.tv == 0.0 && st.is_strong, "strong adversary has exact tv 0");

    auto fixed = make_adversary(AdversaryKind::FixedError, ctx);
    const Hypothesis f2 = Hypothesis::threshold(101);  // two equal-mass errors
    const auto st2 = strength_test(*fixed, f2, g, dist);
    c.require(std::abs(st2.tv - 0.5) <= 1e-12 && !st2.is_strong,
              "fixed-error tv on two equal errors");

    auto lazy = make_adversary(AdversaryKind::Lazy, ctx);
    const auto st3 = strength_test(*lazy, f, g, dist);
    const Mask wrong = disagreement(f, g, n);
    c.require(st3.tv >= 1.0 - dist.mass(wrong) - 1e-12 && !st3.is_strong,
              "lazy adversary tv >= correct mass");

    RandomStream ern = rng.substream(5);
    const auto emp = strength_test_empirical(*strong, f, g, dist, 1000, 0.1, ern);
    c.require(emp.is_strong, "empirical test accepts the strong adversary");
  }

  for (const AdversaryKind kind :
       {AdversaryKind::Strong, AdversaryKind::FixedError, AdversaryKind::Lazy}) {
    RandomStream grng = rng.substream(10 + static_cast<int>(kind));
    auto adv = make_adversary(kind, ctx, 2.0);
    const GameTranscript t = run_game(cls, dist, g, *adv, sch, grng);
    c.require(t.verdict.kind != GameVerdictKind::Failure,
              std::string("verdict not Failure for ") + std::string(adversary_kind_name(kind)));
    if (kind == AdversaryKind::Strong)
      c.require(t.verdict.kind == GameVerdictKind::RiskAchieved, "strong game reaches risk");
    c.require(t.stats.distinct_functions <= sch.distinct_function_bound(),
              "distinct functions bounded");
  }

  return SuiteResult{"game", c.ok(), c.summary()};
}

SuiteResult suite_csv(std::uint64_t seed) {
  Checker c;
  RandomStream rng(seed);

  CsvTable empty;
  empty.header = {"a", "b"};
  c.require(to_csv_string(empty) == "a,b\n", "header-only table");
  empty.rows.push_back({"1", "x,y"});
  c.require(to_csv_string(empty) == "a,b\n1,\"x,y\"\n", "escaped field");

  bool round_trip = true;
  for (int i = 0; i < 1000; ++i) {
    double x = (rng.next_double() - 0.5) * std::exp2(static_cast<int>(rng.next_below(64)) - 32);
    if (i % 7 == 0) x = -x;
    const double back = std::strtod(format_double(x).c_str(), nullptr);
    round_trip = round_trip && back == x;
  }
  c.require(round_trip, "doubles round-trip through 17 significant digits");

  return SuiteResult{"csv", c.ok(), c.summary()};
}

}  // namespace

std::vector<std::string> verification_suite_names() {
  return {"model", "voting", "oracles", "learners", "process", "game", "csv"};
}

std::vector<SuiteResult> run_verification_suites(std::uint64_t seed,
                                                 const std::vector<std::string>& which) {
  using SuiteFn = std::function<SuiteResult(std::uint64_t)>;
  const std::vector<std::pair<std::string, SuiteFn>> all = {
      {"model", suite_model},     {"voting", suite_voting},
      {"oracles", suite_oracles}, {"learners", suite_learners},
      {"process", suite_process}, {"game", suite_game},
      {"csv", suite_csv},
  };
  std::vector<SuiteResult> results;
  for (const auto& [name, fn] : all) {
    if (!which.empty() &&
        std::find(which.begin(), which.end(), name) == which.end())
      continue;
    results.push_back(fn(seed));
  }
  if (!which.empty() && results.size() != which.size())
    throw UsageError("verify: unknown suite name requested");
  return results;
}

}  // namespace eqboost
