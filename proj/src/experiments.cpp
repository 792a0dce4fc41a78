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

#include "eqboost/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <thread>

namespace eqboost {

namespace {

long long parse_ll(std::string_view text, const std::string& what) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("cannot parse integer in " + what + ": '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

HypothesisClass parse_class_spec(const std::string& spec) {
  if (spec == "thresholds") return HypothesisClass::thresholds();
  if (spec == "intervals") return HypothesisClass::intervals();
  if (spec.rfind("union:", 0) == 0)
    return HypothesisClass::union_of_k_intervals(
        static_cast<int>(parse_ll(std::string_view(spec).substr(6), "--class")));
  throw UsageError("--class: expected thresholds | intervals | union:<k>, got '" + spec +
                   "'");
}

DiscreteDistribution make_dist(const std::string& spec, Index n, RandomStream& rng) {
  if (spec == "uniform") return uniform_distribution(n);
  if (spec == "random") {
    ArrayXd w(n);
    for (Index i = 0; i < n; ++i) w[i] = rng.next_double();
    return make_distribution(w);
  }
  if (spec.rfind("point:", 0) == 0)
    return point_mass(n, parse_ll(std::string_view(spec).substr(6), "--dist"));
  if (spec.rfind("weights:", 0) == 0) {
    const auto parts = split(std::string_view(spec).substr(8), ',');
    if (static_cast<Index>(parts.size()) != n)
      throw UsageError("--dist weights: expected " + std::to_string(n) + " values");
    ArrayXd w(n);
    for (Index i = 0; i < n; ++i) {
      char* end = nullptr;
      const std::string field(parts[i]);
      w[i] = std::strtod(field.c_str(), &end);
      if (end != field.c_str() + field.size())
        throw UsageError("--dist weights: cannot parse '" + field + "'");
    }
    return make_distribution(w);
  }
  throw UsageError("--dist: expected uniform | random | point:<i> | weights:..., got '" +
                   spec + "'");
}

Hypothesis make_ground_truth(const std::string& spec, const HypothesisClass& cls,
                             Index n, RandomStream& rng) {
  if (spec == "random") return cls.sample_member(n, rng);
  if (spec.rfind("threshold:", 0) == 0)
    return Hypothesis::threshold(parse_ll(std::string_view(spec).substr(10), "--g"));
  if (spec.rfind("interval:", 0) == 0) {
    const auto ab = split(std::string_view(spec).substr(9), '-');
    if (ab.size() != 2) throw UsageError("--g interval: expected interval:<a>-<b>");
    return Hypothesis::interval(parse_ll(ab[0], "--g"), parse_ll(ab[1], "--g"));
  }
  if (spec.rfind("union:", 0) == 0) {
    std::vector<Hypothesis::Interval> parts;
    for (const auto& piece : split(std::string_view(spec).substr(6), ';')) {
      const auto ab = split(piece, '-');
      if (ab.size() != 2) throw UsageError("--g union: expected union:<a>-<b>;...");
      parts.push_back({parse_ll(ab[0], "--g"), parse_ll(ab[1], "--g")});
    }
    return Hypothesis::interval_union(std::move(parts));
  }
  throw UsageError("--g: expected random | threshold:<t> | interval:<a>-<b> | union:..., "
                   "got '" + spec + "'");
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

CompareReport run_compare_sweep(const CompareConfig& config) {
  if (config.eps_list.empty()) throw UsageError("--eps: at least one value required");
  if (config.trials < 1) throw UsageError("--trials: must be >= 1");

  const HypothesisClass cls = parse_class_spec(config.class_spec);
  const int d = vc_dim(cls);
  RandomStream master(config.seed);

  struct Job {
    double epsilon;
    int trial;
    std::uint64_t stream_index;
  };
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < config.eps_list.size(); ++e)
    for (int t = 0; t < config.trials; ++t)
      jobs.push_back(Job{config.eps_list[e],
                         t,
                         static_cast<std::uint64_t>(e) * config.trials + t});

  std::vector<CompareTrial> trials(jobs.size());
  auto run_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    CompareTrial row;
    row.epsilon = job.epsilon;
    row.trial = job.trial;
    row.d = d;

    RandomStream dist_rng = master.substream(job.stream_index, 1);
    RandomStream g_rng = master.substream(job.stream_index, 2);
    RandomStream eq_rng = master.substream(job.stream_index, 3);
    RandomStream pac_rng = master.substream(job.stream_index, 4);

    const DiscreteDistribution dist = make_dist(config.dist_spec, config.n, dist_rng);
    const Hypothesis g = make_ground_truth(config.g_spec, cls, config.n, g_rng);
    const Schedule schedule =
        schedule_params(job.epsilon, config.delta, d, config.mode, config.overrides);

    ExactEqSource source(dist, g, eq_rng);
    const EqLearnResult eq = eq_learn(cls, config.n, source, schedule);
    row.eq_queries = eq.stats.eq_queries;
    row.eq_distinct_functions = eq.stats.distinct_functions;
    row.final_risk_eq = risk(eq.hypothesis, g, dist);
    row.eq_success = row.final_risk_eq <= job.epsilon;

    const PacResult pac = pac_learn(cls, dist, g, job.epsilon, config.delta, pac_rng);
    row.pac_samples = pac.samples_used;
    row.final_risk_pac = risk(pac.hypothesis, g, dist);
    row.pac_success = row.final_risk_pac <= job.epsilon;

    trials[j] = row;
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t j = next.fetch_add(1);
          if (j >= jobs.size()) return;
          run_job(j);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  CompareReport report;
  report.trials = trials;

  report.table.header = {"kind",       "trial",      "epsilon",
                         "d",          "class",      "mode",
                         "eq_queries", "eq_distinct_functions", "pac_samples",
                         "pac_success", "eq_success", "final_risk_eq",
                         "final_risk_pac", "seed"};
  const std::string mode_name =
      config.mode == ScheduleMode::Theory ? "theory" : "practical";
  const std::string seed_text = std::to_string(config.seed);
  for (const auto& row : trials) {
    report.table.rows.push_back({"trial",
                                 std::to_string(row.trial),
                                 format_double(row.epsilon),
                                 std::to_string(row.d),
                                 cls.name(),
                                 mode_name,
                                 std::to_string(row.eq_queries),
                                 std::to_string(row.eq_distinct_functions),
                                 std::to_string(row.pac_samples),
                                 row.pac_success ? "1" : "0",
                                 row.eq_success ? "1" : "0",
                                 format_double(row.final_risk_eq),
                                 format_double(row.final_risk_pac),
                                 seed_text});
  }

  for (const double eps : config.eps_list) {
    CompareEpsilonSummary s;
    s.epsilon = eps;
    std::vector<double> eqq, eqd, risks;
    int eq_ok = 0, pac_ok = 0;
    for (const auto& row : trials) {
      if (row.epsilon != eps) continue;
      ++s.trials;
      eqq.push_back(static_cast<double>(row.eq_queries));
      eqd.push_back(static_cast<double>(row.eq_distinct_functions));
      risks.push_back(row.final_risk_eq);
      eq_ok += row.eq_success;
      pac_ok += row.pac_success;
      s.pac_samples = row.pac_samples;
    }
    s.eq_success_rate = static_cast<double>(eq_ok) / s.trials;
    s.pac_success_rate = static_cast<double>(pac_ok) / s.trials;
    s.median_eq_queries = median(eqq);
    s.median_eq_distinct = median(eqd);
    s.median_final_risk_eq = median(risks);
    report.summaries.push_back(s);

    report.table.rows.push_back({"summary",
                                 "",
                                 format_double(eps),
                                 std::to_string(d),
                                 cls.name(),
                                 mode_name,
                                 format_double(s.median_eq_queries),
                                 format_double(s.median_eq_distinct),
                                 std::to_string(s.pac_samples),
                                 format_double(s.pac_success_rate),
                                 format_double(s.eq_success_rate),
                                 format_double(s.median_final_risk_eq),
                                 "",
                                 seed_text});
  }
  return report;
}

}  // namespace eqboost
