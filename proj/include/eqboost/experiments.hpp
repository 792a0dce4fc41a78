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

#ifndef EQBOOST_EXPERIMENTS_HPP_
#define EQBOOST_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "eqboost/csv.hpp"
#include "eqboost/game.hpp"
#include "eqboost/learners.hpp"

namespace eqboost {

// "thresholds" | "intervals" | "union:<k>"
HypothesisClass parse_class_spec(const std::string& spec);
// "uniform" | "random" | "point:<i>" | "weights:w0,w1,..."
DiscreteDistribution make_dist(const std::string& spec, Index n, RandomStream& rng);
// "random" | "threshold:<t>" | "interval:<a>-<b>" | "union:<a>-<b>;<c>-<d>;..."
Hypothesis make_ground_truth(const std::string& spec, const HypothesisClass& cls,
                             Index n, RandomStream& rng);

struct CompareConfig {
  std::string class_spec = "thresholds";
  Index n = 65536;
  std::string dist_spec = "uniform";
  std::string g_spec = "random";
  std::vector<double> eps_list;
  double delta = 1.0 / 3.0;
  ScheduleMode mode = ScheduleMode::Practical;
  ScheduleOverrides overrides;
  int trials = 20;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct CompareTrial {
  double epsilon = 0;
  int trial = 0;
  int d = 0;
  long long eq_queries = 0;
  long long eq_distinct_functions = 0;
  long long pac_samples = 0;
  bool pac_success = false;
  bool eq_success = false;
  double final_risk_eq = 1.0;
  double final_risk_pac = 1.0;
};

struct CompareEpsilonSummary {
  double epsilon = 0;
  int trials = 0;
  long long pac_samples = 0;  // exact formula value, identical across trials
  double eq_success_rate = 0;
  double pac_success_rate = 0;
  double median_eq_queries = 0;
  double median_eq_distinct = 0;
  double median_final_risk_eq = 0;
};

struct CompareReport {
  std::vector<CompareTrial> trials;
  std::vector<CompareEpsilonSummary> summaries;
  CsvTable table;
};

// The PAC-versus-EQ sweep: per epsilon and trial, one EQ-learning run against
// the exact oracle and one PAC run on the same instance, judged by exact risk.
CompareReport run_compare_sweep(const CompareConfig& config);

double median(std::vector<double> values);

}  // namespace eqboost

#endif  // EQBOOST_EXPERIMENTS_HPP_
