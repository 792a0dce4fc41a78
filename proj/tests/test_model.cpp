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

#include "eqboost/model.hpp"

using namespace eqboost;

namespace {

Hypothesis random_table(Index n, RandomStream& rng) {
  ArrayXi t(n);
  for (Index i = 0; i < n; ++i) t[i] = rng.next_below(2) ? 1 : -1;
  return Hypothesis::table(std::move(t));
}

DiscreteDistribution random_dist(Index n, RandomStream& rng) {
  ArrayXd w(n);
  for (Index i = 0; i < n; ++i) w[i] = rng.next_double();
  return make_distribution(w);
}

int count_positive_runs(const ArrayXi& t) {
  int runs = 0;
  for (Index i = 0; i < t.size(); ++i)
    if (t[i] > 0 && (i == 0 || t[i - 1] < 0)) ++runs;
  return runs;
}

// Enumerates every classifier on 0..n-1 whose positive set has at most
// max_runs runs (and, when suffix_only, is a suffix). This is the whole
// Thresholds / Intervals / UnionOfK class as explicit tables.
std::vector<ArrayXi> enumerate_tables(Index n, int max_runs, bool suffix_only) {
  std::vector<ArrayXi> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    ArrayXi t(n);
    for (Index i = 0; i < n; ++i) t[i] = (mask >> i) & 1 ? 1 : -1;
    const int runs = count_positive_runs(t);
    if (runs > max_runs) continue;
    if (suffix_only && runs == 1 && t[n - 1] < 0) continue;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST_CASE("feature spaces must be non-empty") {
  CHECK(FeatureSpace(1).size == 1);
  CHECK(FeatureSpace(65536).size == 65536);
  CHECK_THROWS_AS(FeatureSpace(0), OutOfRangeError);
}

TEST_CASE("make_distribution normalizes and validates") {
  const auto u = make_distribution(ArrayXd::Ones(4));
  CHECK((u.weights() == 0.25).all());
  CHECK(u.normalization() == 4.0);

  ArrayXd w(4);
  w << 0, 2, 0, 2;
  const auto d = make_distribution(w);
  CHECK(d.weight(0) == 0.0);
  CHECK(d.weight(1) == 0.5);
  CHECK(d.weight(3) == 0.5);

  ArrayXd bad(2);
  bad << 1, -1;
  CHECK_THROWS_AS(make_distribution(bad), NegativeWeightError);
  CHECK_THROWS_AS(make_distribution(ArrayXd::Zero(3)), AllZeroError);
}

TEST_CASE("sampling a point mass always returns the point") {
  RandomStream rng(1);
  const auto d = make_distribution((ArrayXd(3) << 0, 1, 0).finished());
  for (int i = 0; i < 200; ++i) CHECK(sample(d, rng) == 1);
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  const auto d = make_distribution((ArrayXd(2) << 0.25, 0.75).finished());
  RandomStream a(123), b(123);
  for (int i = 0; i < 2000; ++i) CHECK(sample(d, a) == sample(d, b));
}

TEST_CASE("uniform(2) frequencies converge (3-sigma binomial bound)") {
  RandomStream rng(5);
  const auto d = uniform_distribution(2);
  const long long n = 100000;
  long long zeros = 0;
  for (long long i = 0; i < n; ++i) zeros += sample(d, rng) == 0;
  CHECK(std::abs(zeros / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("per-point frequencies stay within 3 sigma in >= 99% of trials") {
  RandomStream master(17);
  RandomStream gen(18);
  const Index n = 5;
  const auto d = random_dist(n, gen);
  const long long draws = 100000;
  const int trials = 100;
  int ok = 0;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng = master.substream(t, 0);
    ArrayXd counts = ArrayXd::Zero(n);
    for (long long i = 0; i < draws; ++i) counts[sample(d, rng)] += 1.0;
    bool within = true;
    for (Index i = 0; i < n; ++i) {
      const double p = d.weight(i);
      const double sigma = std::sqrt(p * (1 - p) / draws);
      within = within && std::abs(counts[i] / draws - p) <= 3 * sigma;
    }
    ok += within;
  }
  CHECK(ok >= 99);
}

TEST_CASE("restrict matches the spec examples") {
  const auto u = make_distribution(ArrayXd::Ones(4));
  Mask a = Mask::Constant(4, false);
  a[1] = a[3] = true;
  const auto r = restrict(u, a);
  CHECK(r.weight(0) == 0.0);
  CHECK(r.weight(1) == 0.5);
  CHECK(r.weight(3) == 0.5);

  const auto d = make_distribution((ArrayXd(4) << 0.1, 0.2, 0.3, 0.4).finished());
  Mask single = Mask::Constant(4, false);
  single[3] = true;
  const auto p = restrict(d, single);
  CHECK(p.weight(3) == 1.0);

  CHECK_THROWS_AS(restrict(u, Mask::Constant(4, false)), ZeroMassRegionError);
}

TEST_CASE("restriction is a normalized sub-distribution") {
  RandomStream rng(7);
  for (int round = 0; round < 100; ++round) {
    const Index n = 4 + rng.next_below(28);
    const auto d = random_dist(n, rng);
    Mask a(n);
    bool any = false;
    for (Index i = 0; i < n; ++i) {
      a[i] = rng.next_below(2) != 0;
      any = any || a[i];
    }
    if (!any) a[0] = true;
    const auto r = restrict(d, a);
    CHECK(std::abs(r.weights().sum() - 1.0) <= 1e-9);
    for (Index i = 0; i < n; ++i)
      if (!a[i]) CHECK(r.weight(i) == 0.0);
  }
}

TEST_CASE("risk is the exact disagreement mass") {
  const auto u = uniform_distribution(10);
  const Hypothesis g = Hypothesis::threshold(5);
  const Hypothesis f = Hypothesis::threshold(7);
  CHECK(risk(f, f, u) == 0.0);
  CHECK(risk(f, g, u) == doctest::Approx(0.2).epsilon(1e-12));  // points {5,6}
  CHECK(risk(f, g, u) == risk(g, f, u));
}

TEST_CASE("risk agrees with a Monte-Carlo estimate within 3 sigma") {
  RandomStream rng(31);
  for (int round = 0; round < 10; ++round) {
    const Index n = 16 + rng.next_below(48);
    const auto d = random_dist(n, rng);
    const auto f = random_table(n, rng);
    const auto g = random_table(n, rng);
    const double exact = risk(f, g, d);

    const long long draws = 100000;
    long long wrong = 0;
    RandomStream mc = rng.substream(round, 9);
    for (long long i = 0; i < draws; ++i) {
      const Index x = sample(d, mc);
      wrong += f(x) != g(x);
    }
    const double estimate = wrong / static_cast<double>(draws);
    const double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-12) / draws);
    CHECK(std::abs(estimate - exact) <= 3 * sigma + 1e-9);
  }
}

TEST_CASE("xor_region flips exactly the region") {
  const Index n = 10;
  const Hypothesis f = Hypothesis::threshold(5);

  const Hypothesis same = xor_region(f, Mask::Constant(n, false));
  CHECK((same.evaluate(n) == f.evaluate(n)).all());

  const Hypothesis negated = xor_region(f, Mask::Constant(n, true));
  CHECK((negated.evaluate(n) == -f.evaluate(n)).all());

  Mask a = Mask::Constant(n, false);
  a[5] = a[6] = true;
  const Hypothesis shifted = xor_region(f, a);
  CHECK((shifted.evaluate(n) == Hypothesis::threshold(7).evaluate(n)).all());
}

TEST_CASE("risk of a region flip equals the region mass") {
  RandomStream rng(41);
  for (int round = 0; round < 100; ++round) {
    const Index n = 4 + rng.next_below(28);
    const auto d = random_dist(n, rng);
    const auto f = random_table(n, rng);
    Mask a(n);
    for (Index i = 0; i < n; ++i) a[i] = rng.next_below(2) != 0;
    CHECK(risk(f, xor_region(f, a), d) == doctest::Approx(d.mass(a)).epsilon(1e-12));
  }
}

TEST_CASE("vc dimensions match the exhaustive shattering oracle on small grids") {
  const Index n = 12;
  CHECK(vc_dim(HypothesisClass::thresholds()) ==
        exhaustive_vc(enumerate_tables(n, 1, true), n));
  CHECK(vc_dim(HypothesisClass::intervals()) ==
        exhaustive_vc(enumerate_tables(n, 1, false), n));
  CHECK(vc_dim(HypothesisClass::union_of_k_intervals(3)) ==
        exhaustive_vc(enumerate_tables(n, 3, false), n));
  CHECK(vc_dim(HypothesisClass::union_of_k_intervals(2)) == 4);
}

TEST_CASE("explicit classes are shattering-searched or overridden") {
  std::vector<Hypothesis> single{Hypothesis::table(ArrayXi::Constant(6, 1))};
  CHECK(vc_dim(HypothesisClass::explicit_finite(single)) == 0);

  std::vector<Hypothesis> pair{Hypothesis::table(ArrayXi::Constant(6, 1)),
                               Hypothesis::table(ArrayXi::Constant(6, -1))};
  CHECK(vc_dim(HypothesisClass::explicit_finite(pair)) == 1);

  std::vector<Hypothesis> big{Hypothesis::table(ArrayXi::Constant(30, 1))};
  CHECK_THROWS_AS(vc_dim(HypothesisClass::explicit_finite(big)), TooLargeForExactVcError);
  CHECK(vc_dim(HypothesisClass::explicit_finite(big, 1)) == 1);
}

TEST_CASE("class membership and canonical elements") {
  const Index n = 16;
  const auto thr = HypothesisClass::thresholds();
  CHECK(thr.contains(Hypothesis::threshold(3), n));
  CHECK(thr.contains(Hypothesis::constant(-1), n));
  CHECK(!thr.contains(Hypothesis::interval(2, 5), n));
  CHECK((thr.canonical(n).evaluate(n) == 1).all());

  const auto ints = HypothesisClass::intervals();
  CHECK(ints.contains(Hypothesis::interval(2, 5), n));
  CHECK(ints.contains(Hypothesis::threshold(3), n));  // a suffix is an interval
  CHECK(!ints.contains(Hypothesis::interval_union({{0, 1}, {4, 5}}), n));

  const auto u2 = HypothesisClass::union_of_k_intervals(2);
  CHECK(u2.contains(Hypothesis::interval_union({{0, 1}, {4, 5}}), n));
  CHECK(!u2.contains(Hypothesis::interval_union({{0, 0}, {4, 4}, {8, 8}}), n));
}

TEST_CASE("sampled members stay inside their class") {
  RandomStream rng(53);
  const Index n = 40;
  for (const auto& cls :
       {HypothesisClass::thresholds(), HypothesisClass::intervals(),
        HypothesisClass::union_of_k_intervals(3)}) {
    for (int i = 0; i < 200; ++i) CHECK(cls.contains(cls.sample_member(n, rng), n));
  }
}
