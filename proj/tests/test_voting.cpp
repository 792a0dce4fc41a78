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

#include "eqboost/voting.hpp"

using namespace eqboost;

namespace {

Hypothesis random_table(Index n, RandomStream& rng) {
  ArrayXi t(n);
  for (Index i = 0; i < n; ++i) t[i] = rng.next_below(2) ? 1 : -1;
  return Hypothesis::table(std::move(t));
}

// Definition-style recursion, recomputed from scratch.
ArrayXi recompute_votes(const std::vector<Hypothesis>& committee, Index n, int bound) {
  ArrayXi acc;
  for (std::size_t j = 0; j < committee.size(); ++j) {
    const ArrayXi ht = committee[j].evaluate(n);
    if (j == 0)
      acc = ht;
    else
      acc = (acc + 2 * ht).cwiseMax(-bound).cwiseMin(bound);
  }
  return acc;
}

ArrayXi recompute_vote_g(const std::vector<Hypothesis>& committee, const Hypothesis& g,
                         Index n, int bound) {
  const ArrayXi gt = g.evaluate(n);
  ArrayXi acc;
  for (std::size_t j = 0; j < committee.size(); ++j) {
    const ArrayXi ht = committee[j].evaluate(n);
    const ArrayXi term =
        (ht == gt).select(ArrayXi::Constant(n, -1), ArrayXi::Constant(n, 1));
    if (j == 0)
      acc = term;
    else
      acc = (acc + 2 * term).cwiseMax(-bound).cwiseMin(bound);
  }
  return acc;
}

}  // namespace

TEST_CASE("vote_bound formula") {
  CHECK(vote_bound(0.25) == 5);
  CHECK(vote_bound(1.0 / 32.0) == 11);
  CHECK(vote_bound(0.03) == 13);
  CHECK(vote_bound(0.5) == 3);
  CHECK(vote_bound(0.75) == 3);
  CHECK(vote_bound(5e-10) == 63);
  CHECK_THROWS_AS(vote_bound(0.0), OutOfRangeError);
  CHECK_THROWS_AS(vote_bound(1.0), OutOfRangeError);
}

TEST_CASE("clip clamps symmetrically") {
  CHECK(clip(7, 5) == 5);
  CHECK(clip(-9, 5) == -5);
  CHECK(clip(3, 5) == 3);
  for (int v = -12; v <= 12; ++v) CHECK(clip(-v, 5) == -clip(v, 5));
}

TEST_CASE("vote sequences clip at the bound") {
  const Hypothesis plus = Hypothesis::constant(1);
  VoteState s(make_vote_params(0.5), 4);  // B = 3
  s.extend(plus);
  CHECK((s.votes() == 1).all());
  s.extend(plus);
  CHECK((s.votes() == 3).all());
  s.extend(plus);
  CHECK((s.votes() == 3).all());
}

TEST_CASE("alternating committee oscillates between 1 and -1") {
  VoteState s(make_vote_params(0.25), 1);  // B = 5
  const Hypothesis plus = Hypothesis::constant(1);
  const Hypothesis minus = Hypothesis::constant(-1);
  int expected[] = {1, -1, 1, -1};
  const Hypothesis* seq[] = {&plus, &minus, &plus, &minus};
  for (int i = 0; i < 4; ++i) {
    s.extend(*seq[i]);
    CHECK(s.votes()[0] == expected[i]);
  }
}

TEST_CASE("incremental tallies equal the from-scratch recursion (committees up to 100)") {
  RandomStream rng(3);
  for (int round = 0; round < 60; ++round) {
    const double eps = round % 2 ? 0.25 : 1.0 / 32.0;
    const VoteParams params = make_vote_params(eps);
    const Index n = 8 + rng.next_below(40);
    const int len = 1 + static_cast<int>(rng.next_below(100));
    VoteState state(params, n);
    for (int j = 0; j < len; ++j) state.extend(random_table(n, rng));
    CHECK((state.votes() ==
           recompute_votes(state.committee(), n, params.bound)).all());
  }
}

TEST_CASE("vote_g base cases match the definition") {
  const Index n = 1;
  const Hypothesis gp = Hypothesis::constant(1);
  VoteState agree(make_vote_params(0.25), n);
  agree.extend(Hypothesis::constant(1));
  CHECK(vote_g(agree, gp)[0] == -1);  // correct member votes negative

  VoteState differ(make_vote_params(0.25), n);
  differ.extend(Hypothesis::constant(-1));
  CHECK(vote_g(differ, gp)[0] == 1);
}

TEST_CASE("vote_g identity, majority rule, and level-set partition") {
  RandomStream rng(11);
  for (int round = 0; round < 200; ++round) {
    const VoteParams params = make_vote_params(round % 2 ? 0.125 : 0.25);
    const Index n = 4 + rng.next_below(28);
    const int len = 1 + static_cast<int>(rng.next_below(12));
    VoteState state(params, n);
    for (int j = 0; j < len; ++j) state.extend(random_table(n, rng));
    const Hypothesis g = random_table(n, rng);
    const ArrayXi gt = g.evaluate(n);

    const ArrayXi vg = vote_g(state, g);
    CHECK((vg == recompute_vote_g(state.committee(), g, n, params.bound)).all());
    CHECK((vg == -gt * state.votes()).all());
    CHECK((vg.abs() == state.votes().abs()).all());

    const ArrayXi maj = state.majority().evaluate(n);
    for (Index x = 0; x < n; ++x) {
      CHECK(state.votes()[x] % 2 != 0);
      CHECK(std::abs(state.votes()[x]) <= params.bound);
      CHECK((maj[x] == gt[x]) == (vg[x] < 0));
    }

    ArrayXi covered = ArrayXi::Zero(n);
    for (int v = 1; v <= params.bound; v += 2) covered += state.level_set(v).cast<int>();
    CHECK((covered == 1).all());
  }
}

TEST_CASE("level sets for a single-member committee") {
  VoteState s(make_vote_params(0.25), 8);
  s.extend(Hypothesis::threshold(4));
  CHECK(s.level_set(1).all());
  CHECK(!s.level_set(3).any());
  CHECK_THROWS_AS(s.level_set(2), OutOfRangeError);
  CHECK_THROWS_AS(s.level_set(7), OutOfRangeError);  // above B = 5
}

TEST_CASE("majority of a single member is the member; empty committee throws") {
  VoteState s(make_vote_params(0.25), 8);
  CHECK_THROWS_AS(s.majority(), EmptyCommitteeError);
  const Hypothesis h = Hypothesis::threshold(3);
  s.extend(h);
  CHECK((s.majority().evaluate(8) == h.evaluate(8)).all());
}

TEST_CASE("value-style wrappers mirror the member functions") {
  VoteState base(make_vote_params(0.25), 8);
  const VoteState extended = vote_extend(base, Hypothesis::threshold(4));
  CHECK(base.committee().empty());
  CHECK(extended.committee().size() == 1);
  CHECK((majority(extended).evaluate(8) == Hypothesis::threshold(4).evaluate(8)).all());
  CHECK(confidence_level_set(extended, 1).all());
}

TEST_CASE("majority follows the sign of the tally") {
  VoteState s(make_vote_params(0.25), 2);
  ArrayXi t(2);
  t << 1, -1;
  s.extend(Hypothesis::table(t));
  const ArrayXi maj = s.majority().evaluate(2);
  CHECK(maj[0] == 1);
  CHECK(maj[1] == -1);
}
