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

#ifndef EQBOOST_VERIFICATION_HPP_
#define EQBOOST_VERIFICATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace eqboost {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<std::string> verification_suite_names();

// Runs the named invariant suites (all of them when `which` is empty).
// Deterministic for a fixed seed.
std::vector<SuiteResult> run_verification_suites(std::uint64_t seed,
                                                 const std::vector<std::string>& which = {});

}  // namespace eqboost

#endif  // EQBOOST_VERIFICATION_HPP_
