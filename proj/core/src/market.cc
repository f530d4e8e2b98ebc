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

#include "smatch/market.h"

#include <numeric>
#include <string>
#include <utility>

#include "smatch/error.h"

namespace smatch {

Market ValidateMarket(Matrix features, Matrix preferences,
                      std::vector<int> capacities) {
  if (features.rows() == 0 || preferences.rows() == 0 ||
      features.cols() == 0) {
    throw Error(ErrorCode::kEmptyMarket,
                "market needs at least one agent, object and feature");
  }
  if (features.cols() != preferences.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "features have " + std::to_string(features.cols()) +
                    " columns but preferences have " +
                    std::to_string(preferences.cols()));
  }
  if (static_cast<Eigen::Index>(capacities.size()) != features.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(features.rows()) +
                    " capacities, got " + std::to_string(capacities.size()));
  }
  if (!features.allFinite() || !preferences.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "feature or preference entry is NaN/inf");
  }
  long long total = 0;
  for (int c : capacities) {
    if (c < 0) {
      throw Error(ErrorCode::kCapacityMismatch, "negative capacity");
    }
    total += c;
  }
  if (total != preferences.rows()) {
    throw Error(ErrorCode::kCapacityMismatch,
                "capacities sum to " + std::to_string(total) + " but there are " +
                    std::to_string(preferences.rows()) + " agents");
  }
  return Market(std::move(features), std::move(preferences),
                std::move(capacities));
}

UtilityMatrix ComputeUtilityMatrix(const Market& market) {
  return UtilityMatrix{market.preferences() * market.features().transpose()};
}

Allocation::Allocation(std::vector<int> assignment, std::vector<int> capacities)
    : assignment_(std::move(assignment)), capacities_(std::move(capacities)) {
  std::vector<int> counts(capacities_.size(), 0);
  for (int object : assignment_) {
    if (object < 0 || object >= static_cast<int>(capacities_.size())) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "object index " + std::to_string(object) + " out of range");
    }
    ++counts[object];
  }
  if (counts != capacities_) {
    throw Error(ErrorCode::kCapacityMismatch,
                "allocation column sums differ from capacities");
  }
}

Eigen::MatrixXi Allocation::ToMatrix() const {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(num_agents(), num_objects());
  for (int i = 0; i < num_agents(); ++i) m(i, assignment_[i]) = 1;
  return m;
}

Vector DisagreementPoints(const UtilityMatrix& utilities) {
  return utilities.values.rowwise().mean();
}

Vector RealizedUtilities(const Allocation& allocation,
                         const UtilityMatrix& utilities) {
  Vector realized(allocation.num_agents());
  for (int i = 0; i < allocation.num_agents(); ++i) {
    realized(i) = utilities(i, allocation.object_of(i));
  }
  return realized;
}

}  // namespace smatch
