// Copyright 2026 The smatch Authors.
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

#include "smatch/error.h"

#include <string>

namespace smatch {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kCapacityMismatch:
      return "CapacityMismatch";
    case ErrorCode::kNonFinite:
      return "NonFinite";
    case ErrorCode::kEmptyMarket:
      return "EmptyMarket";
    case ErrorCode::kConvergenceFailure:
      return "ConvergenceFailure";
    case ErrorCode::kDegenerateSpectrum:
      return "DegenerateSpectrum";
    case ErrorCode::kAllZeroSpectrum:
      return "AllZeroSpectrum";
    case ErrorCode::kEmptySample:
      return "EmptySample";
    case ErrorCode::kDegenerateAllTies:
      return "DegenerateAllTies";
    case ErrorCode::kTooLarge:
      return "TooLarge";
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kParseError:
      return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace smatch
