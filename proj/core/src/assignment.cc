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

#include "smatch/assignment.h"

#include <limits>
#include <vector>

#include "smatch/error.h"

namespace smatch {

std::vector<int> SolveMaxAssignment(const Matrix& profit) {
  if (profit.rows() != profit.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "profit matrix must be square");
  }
  const int n = static_cast<int>(profit.rows());
  if (n == 0) return {};
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based arrays; index 0 is the virtual root of each augmenting search.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<int> match_of_col(n + 1, 0), way(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    match_of_col[0] = row;
    int col0 = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const int r = match_of_col[col0];
      double delta = kInf;
      int col1 = 0;
      for (int col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cost = -profit(r - 1, col - 1);
        const double slack = cost - row_pot[r] - col_pot[col];
        if (slack < min_slack[col]) {
          min_slack[col] = slack;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= n; ++col) {
        if (used[col]) {
          row_pot[match_of_col[col]] += delta;
          col_pot[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (match_of_col[col0] != 0);
    do {
      const int col1 = way[col0];
      match_of_col[col0] = match_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int col = 1; col <= n; ++col) {
    row_to_col[match_of_col[col] - 1] = col - 1;
  }
  return row_to_col;
}

}  // namespace smatch
