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

#ifndef SMATCH_SPECTRAL_H_
#define SMATCH_SPECTRAL_H_

#include <string>
#include <string_view>

#include "smatch/market.h"

namespace smatch {

// Thin SVD of a J x X feature matrix, F = left * diag(singular_values) *
// right^T.
//
// Singular values are sorted in descending order. Every right singular vector
// is sign-normalized so that its largest-magnitude entry is positive (lowest
// index wins on exact ties); the matching left vector is flipped with it.
// Left vectors belonging to zero singular values are completed to an
// orthonormal set when J >= X and left as zero columns otherwise.
struct SpectralSummary {
  Vector singular_values;  // length X
  Matrix right_vectors;    // X x X, columns v_1..v_X
  Matrix left_vectors;     // J x X
};

// One-sided (Hestenes) Jacobi SVD with cyclic sweeps. A pair of columns is
// considered orthogonal once |a_p . a_q| <= 1e-12 * |a_p| |a_q|; throws
// kConvergenceFailure after 60 sweeps and kNonFinite on NaN/inf input.
SpectralSummary ComputeSvd(const Matrix& features);

inline constexpr int kMaxJacobiSweeps = 60;
inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr double kTieTolerance = 1e-9;

struct PrincipalDirection {
  Vector direction;
  // sigma_1 - sigma_2 < 1e-9 * sigma_1: the leading direction is not
  // well determined even though it is still returned.
  bool tie_warning = false;
};

// v_1 under the sign convention above. Throws kDegenerateSpectrum if
// sigma_1 == 0.
PrincipalDirection ExtractPrincipalDirection(const SpectralSummary& summary);

// Inner product of every row with `direction`. Throws kDimensionMismatch.
Vector Project(const Matrix& rows, const Vector& direction);

// (sum_{l<=k} sigma_l^2) / (sum_l sigma_l^2). Throws kAllZeroSpectrum when
// every value is zero and kInvalidArgument when k is outside [1, X].
double ExplainedVarianceRatio(const Vector& singular_values, int k);

// (sum sigma)^2 / sum sigma^2, always in [1, X].
double EffectiveRank(const Vector& singular_values);

enum class DeploymentBand {
  kProceed,         // rho_1 >= 0.5
  kCompare2D,       // 0.3 <= rho_1 < 0.5
  kUseAlternative,  // rho_1 < 0.3
};

std::string_view DeploymentBandName(DeploymentBand band);
DeploymentBand BandForRho1(double rho1);

struct DiagnosticReport {
  double rho1 = 0.0;
  double effective_rank = 0.0;
  DeploymentBand band = DeploymentBand::kUseAlternative;
  std::string approx_ratio_note;
  bool tie_warning = false;
  Vector singular_values;
  // rho_k = sigma_k^2 / sum_l sigma_l^2 for every component k.
  Vector component_ratios;
};

DiagnosticReport DiagnoseSpectrum(const SpectralSummary& summary);
DiagnosticReport Diagnose(const Matrix& features);

}  // namespace smatch

#endif  // SMATCH_SPECTRAL_H_
