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

#ifndef EQBOOST_CSV_HPP_
#define EQBOOST_CSV_HPP_

#include <string>
#include <vector>

namespace eqboost {

// 17 significant digits: parse(format_double(x)) == x for every finite x.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180-style text: comma separated, quoted when needed, LF line endings,
// header first.
std::string to_csv_string(const CsvTable& table);

// Writes the table to a file; throws IoError on failure.
void emit_csv(const CsvTable& table, const std::string& path);

}  // namespace eqboost

#endif  // EQBOOST_CSV_HPP_
