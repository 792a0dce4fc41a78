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

#include "eqboost/game.hpp"

#include <unordered_map>

namespace eqboost {

std::string_view verdict_name(GameVerdictKind kind) {
  switch (kind) {
    case GameVerdictKind::RiskAchieved: return "RiskAchieved";
    case GameVerdictKind::NonStrongRoundFound: return "NonStrongRoundFound";
    case GameVerdictKind::Failure: return "Failure";
  }
  return "unknown";
}

namespace {

// Adapts an adversary to the learner's counterexample interface while
// recording the transcript.
class GameSource final : public CounterexampleSource {
 public:
  GameSource(const DiscreteDistribution& dist, const Hypothesis& g, Adversary& adv,
             RandomStream ex_rng, RandomStream adv_rng, GameTranscript& transcript,
             const GameOptions& options)
      : dist_(&dist),
        g_table_(g.evaluate(dist.size())),
        g_(&g),
        adv_(&adv),
        ex_rng_(ex_rng),
        adv_rng_(adv_rng),
        transcript_(&transcript),
        options_(options) {}

  std::optional<std::vector<LabeledExample>> request(const Hypothesis& f,
                                                     long long m) override {
    const ArrayXi ft = f.evaluate(g_table_.size());
    ShownFunctionRecord& rec = record_for(f, ft);
    ++rec.batches;
    if (rec.zero_risk) return std::nullopt;  // NoErrorExists, surfaced as YES

    std::vector<LabeledExample> batch;
    batch.reserve(static_cast<std::size_t>(m));
    for (long long j = 0; j < m; ++j) {
      const Index x = sample(*dist_, ex_rng_);  // the adversary's one EX draw
      const Index reply = adv_->respond(f, x, adv_rng_);
      ++reply_counter_;
      const bool genuine = ft[reply] != g_table_[reply];
      ++rec.replies;
      if (genuine) ++rec.genuine_replies;
      if (static_cast<long long>(transcript_->replies.size()) <
          options_.max_recorded_replies) {
        transcript_->replies.push_back(ReplyRecord{reply_counter_, rec.id, reply, genuine});
      } else {
        transcript_->replies_truncated = true;
      }
      batch.push_back(LabeledExample{reply, -ft[reply]});
    }
    return batch;
  }

  long long reply_counter() const { return reply_counter_; }
  const std::optional<Hypothesis>& flagged_function() const { return flagged_; }

 private:
  ShownFunctionRecord& record_for(const Hypothesis& f, const ArrayXi& ft) {
    const std::uint64_t fp = table_fingerprint(ft);
    auto it = index_.find(fp);
    if (it != index_.end()) return transcript_->functions[it->second];

    ShownFunctionRecord rec;
    rec.id = static_cast<long long>(transcript_->functions.size());
    rec.first_round = reply_counter_ + 1;
    rec.fingerprint = fp;
    const Mask wrong = ft != g_table_;
    if (dist_->mass(wrong) <= 0.0) {
      rec.zero_risk = true;
    } else {
      rec.exact_tv = total_variation(adv_->reply_distribution(f),
                                     restrict(*dist_, wrong).weights());
      if (!flagged_ && rec.exact_tv > options_.tv_evidence_threshold)
        flagged_ = f;
    }
    index_.emplace(fp, transcript_->functions.size());
    transcript_->functions.push_back(rec);
    return transcript_->functions.back();
  }

  const DiscreteDistribution* dist_;
  ArrayXi g_table_;
  const Hypothesis* g_;
  Adversary* adv_;
  RandomStream ex_rng_;
  RandomStream adv_rng_;
  GameTranscript* transcript_;
  GameOptions options_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  long long reply_counter_ = 0;
  std::optional<Hypothesis> flagged_;
};

}  // namespace

GameTranscript run_game(const HypothesisClass& cls, const DiscreteDistribution& dist,
                        const Hypothesis& g, Adversary& adversary,
                        const Schedule& schedule, RandomStream& rng,
                        const GameOptions& options) {
  GameTranscript transcript;
  GameSource source(dist, g, adversary, rng.substream(0, 1), rng.substream(0, 2),
                    transcript, options);

  std::optional<Hypothesis> last_majority;
  long long rounds_started = 0;
  EqLearnOptions learn_options;
  learn_options.round_begin = [&](long long round, const Hypothesis& maj) {
    last_majority = maj;
    rounds_started = round - 1;  // iterations entered, matching QueryStats::rounds
  };

  try {
    EqLearnResult result = eq_learn(cls, dist.size(), source, schedule, learn_options);
    transcript.declared = std::move(result.hypothesis);
    transcript.stats = result.stats;
  } catch (const AdversaryInconsistentError&) {
    // The training set had no consistent member: only non-genuine replies can
    // cause this in the realizable setting. The learner aborts and declares
    // its current best estimate.
    transcript.adversary_inconsistent = true;
    transcript.declared =
        last_majority ? *last_majority : cls.canonical(dist.size());
    transcript.stats.eq_queries = source.reply_counter();
    transcript.stats.distinct_functions =
        static_cast<long long>(transcript.functions.size());
    transcript.stats.rounds = rounds_started;
  }

  transcript.final_risk = risk(*transcript.declared, g, dist);
  transcript.flagged_function = source.flagged_function();

  GameVerdict verdict;
  verdict.final_risk = transcript.final_risk;
  if (transcript.final_risk <= schedule.epsilon) {
    verdict.kind = GameVerdictKind::RiskAchieved;
  } else {
    verdict.kind = GameVerdictKind::Failure;
    for (const auto& rec : transcript.functions) {
      if (!rec.zero_risk && rec.exact_tv > options.tv_evidence_threshold) {
        verdict.kind = GameVerdictKind::NonStrongRoundFound;
        verdict.round = rec.first_round;
        verdict.tv = rec.exact_tv;
        break;
      }
    }
  }
  transcript.verdict = verdict;
  return transcript;
}

}  // namespace eqboost
