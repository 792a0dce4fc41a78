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

#ifndef EQBOOST_GAME_HPP_
#define EQBOOST_GAME_HPP_

#include <optional>
#include <vector>

#include "eqboost/adversary.hpp"
#include "eqboost/learners.hpp"

namespace eqboost {

enum class GameVerdictKind { RiskAchieved, NonStrongRoundFound, Failure };

std::string_view verdict_name(GameVerdictKind kind);

struct GameVerdict {
  GameVerdictKind kind = GameVerdictKind::Failure;
  double final_risk = 1.0;
  // NonStrongRoundFound only: the game round at which the flagged function
  // was first shown, and its exact TV to the true EQ conditional.
  long long round = -1;
  double tv = 0.0;
};

struct ShownFunctionRecord {
  long long id = 0;           // order of first appearance
  long long first_round = 0;  // game round (reply counter) at first show
  std::uint64_t fingerprint = 0;
  double exact_tv = 0.0;  // 0 for zero-risk functions (no conditional to match)
  bool zero_risk = false;
  long long batches = 0;
  long long replies = 0;
  long long genuine_replies = 0;
};

struct ReplyRecord {
  long long round = 0;  // global reply counter; one reply per Definition-2 round
  long long function_id = 0;
  Index point = 0;
  bool genuine = false;  // f(point) != g(point)
};

struct GameTranscript {
  std::vector<ShownFunctionRecord> functions;
  std::vector<ReplyRecord> replies;  // capped; aggregates in `functions` are exact
  bool replies_truncated = false;
  QueryStats stats;
  std::optional<Hypothesis> declared;  // the learner's final function
  double final_risk = 1.0;
  bool adversary_inconsistent = false;
  GameVerdict verdict;
  // The function behind a NonStrongRoundFound verdict, kept so its TV can be
  // recomputed independently.
  std::optional<Hypothesis> flagged_function;
};

struct GameOptions {
  long long max_recorded_replies = 1 << 18;
  // Reply-distribution mismatches below this are fp noise, not evidence.
  double tv_evidence_threshold = 1e-12;
};

// Runs the adversarial learning game: the boosting learner with the adversary
// as its counterexample source (one example-oracle draw plus one adversary
// reply per requested counterexample; labels inferred as -f(reply)). The
// verdict is RiskAchieved when the declared function has exact risk <= eps,
// else NonStrongRoundFound at the first shown function whose ideal reply
// distribution differs from the true EQ conditional, else Failure.
GameTranscript run_game(const HypothesisClass& cls, const DiscreteDistribution& dist,
                        const Hypothesis& g, Adversary& adversary,
                        const Schedule& schedule, RandomStream& rng,
                        const GameOptions& options = {});

}  // namespace eqboost

#endif  // EQBOOST_GAME_HPP_
