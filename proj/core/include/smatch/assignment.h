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

#ifndef SMATCH_ASSIGNMENT_H_
#define SMATCH_ASSIGNMENT_H_

#include <vector>

#include "smatch/market.h"

namespace smatch {

// Maximum-weight perfect matching on a square profit matrix using the
// shortest augmenting path (Hungarian) method with potentials, O(n^3).
// Returns row -> column.
std::vector<int> SolveMaxAssignment(const Matrix& profit);

}  // namespace smatch

#endif  // SMATCH_ASSIGNMENT_H_
