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

#ifndef SMATCH_MARKET_H_
#define SMATCH_MARKET_H_

#include <span>
#include <vector>

#include <Eigen/Core>

namespace smatch {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A one-sided market: J objects described by X features, I agents reporting
// weights over the same X features, and per-object capacities summing to I.
//
// Instances are only produced by ValidateMarket() and are immutable.
class Market {
 public:
  const Matrix& features() const { return features_; }
  const Matrix& preferences() const { return preferences_; }
  std::span<const int> capacities() const { return capacities_; }

  int num_agents() const { return static_cast<int>(preferences_.rows()); }
  int num_objects() const { return static_cast<int>(features_.rows()); }
  int num_features() const { return static_cast<int>(features_.cols()); }

 private:
  friend Market ValidateMarket(Matrix features, Matrix preferences,
                               std::vector<int> capacities);
  Market(Matrix features, Matrix preferences, std::vector<int> capacities)
      : features_(std::move(features)),
        preferences_(std::move(preferences)),
        capacities_(std::move(capacities)) {}

  Matrix features_;
  Matrix preferences_;
  std::vector<int> capacities_;
};

// Checks shapes, finiteness and capacity bookkeeping. Zero-capacity objects
// are accepted; they are never assigned. Throws smatch::Error with
// kEmptyMarket, kDimensionMismatch, kNonFinite or kCapacityMismatch.
Market ValidateMarket(Matrix features, Matrix preferences,
                      std::vector<int> capacities);

// I x J matrix of agent utilities, entry (i, j) = w_i . f_j.
struct UtilityMatrix {
  Matrix values;

  int num_agents() const { return static_cast<int>(values.rows()); }
  int num_objects() const { return static_cast<int>(values.cols()); }
  double operator()(int agent, int object) const {
    return values(agent, object);
  }
};

UtilityMatrix ComputeUtilityMatrix(const Market& market);

// Deterministic allocation of agents to objects. The agent -> object index
// vector is the canonical representation; the 0/1 matrix is derived on
// demand. Row sums are 1 by construction and column sums are checked against
// the capacities at construction time.
class Allocation {
 public:
  // Throws kDimensionMismatch for out-of-range object indices and
  // kCapacityMismatch if the per-object counts differ from `capacities`.
  Allocation(std::vector<int> assignment, std::vector<int> capacities);

  int num_agents() const { return static_cast<int>(assignment_.size()); }
  int num_objects() const { return static_cast<int>(capacities_.size()); }
  int object_of(int agent) const { return assignment_[agent]; }
  std::span<const int> assignment() const { return assignment_; }
  std::span<const int> capacities() const { return capacities_; }

  Eigen::MatrixXi ToMatrix() const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<int> assignment_;
  std::vector<int> capacities_;
};

// o_i: unweighted mean of row i over all J objects. Capacities are ignored,
// so with unequal capacities this is not the expectation under a uniformly
// random feasible assignment.
Vector DisagreementPoints(const UtilityMatrix& utilities);

// Utility each agent obtains from its assigned object.
Vector RealizedUtilities(const Allocation& allocation,
                         const UtilityMatrix& utilities);

}  // namespace smatch

#endif  // SMATCH_MARKET_H_
