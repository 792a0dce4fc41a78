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

#ifndef EQBOOST_ERRORS_HPP_
#define EQBOOST_ERRORS_HPP_

#include <stdexcept>

namespace eqboost {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define EQBOOST_ERROR_TYPE(Name) \
  class Name : public Error {    \
   public:                       \
    using Error::Error;          \
  };

EQBOOST_ERROR_TYPE(NegativeWeightError)
EQBOOST_ERROR_TYPE(AllZeroError)
EQBOOST_ERROR_TYPE(ZeroMassRegionError)
EQBOOST_ERROR_TYPE(OutOfRangeError)
EQBOOST_ERROR_TYPE(EmptyCommitteeError)
EQBOOST_ERROR_TYPE(TooLargeForExactVcError)
EQBOOST_ERROR_TYPE(NoErrorExistsError)
EQBOOST_ERROR_TYPE(ZeroRiskFunctionError)
EQBOOST_ERROR_TYPE(BadMassVectorError)
EQBOOST_ERROR_TYPE(ScheduleInfeasibleError)
EQBOOST_ERROR_TYPE(AdversaryInconsistentError)
EQBOOST_ERROR_TYPE(UsageError)
EQBOOST_ERROR_TYPE(IoError)

// Internal consistency failure (a checked identity did not hold).
EQBOOST_ERROR_TYPE(InternalError)

#undef EQBOOST_ERROR_TYPE

}  // namespace eqboost

#endif  // EQBOOST_ERRORS_HPP_
