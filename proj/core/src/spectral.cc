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

#include "smatch/spectral.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "smatch/error.h"

namespace smatch {
namespace {

// Index of the largest |entry|; lowest index on exact ties.
Eigen::Index DominantIndex(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    if (std::abs(v(k)) > std::abs(v(best))) best = k;
  }
  return best;
}

void CompleteLeftVectors(Matrix& left, std::vector<bool> filled) {
  const Eigen::Index rows = left.rows();
  Eigen::Index candidate = 0;
  for (Eigen::Index col = 0; col < left.cols(); ++col) {
    if (filled[col]) continue;
    left.col(col).setZero();
    // Gram-Schmidt (applied twice) on standard basis vectors until one
    // survives; when J < X the basis runs out and the column stays zero.
    while (candidate < rows) {
      Vector e = Vector::Unit(rows, candidate++);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index other = 0; other < left.cols(); ++other) {
          if (filled[other]) e -= left.col(other).dot(e) * left.col(other);
        }
      }
      const double norm = e.norm();
      if (norm > 1e-8) {
        left.col(col) = e / norm;
        filled[col] = true;
        break;
      }
    }
  }
}

}  // namespace

SpectralSummary ComputeSvd(const Matrix& features) {
  if (features.rows() == 0 || features.cols() == 0) {
    throw Error(ErrorCode::kEmptyMarket, "empty feature matrix");
  }
  if (!features.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "feature matrix has NaN/inf entries");
  }
  const Eigen::Index n = features.cols();
  Matrix a = features;
  Matrix v = Matrix::Identity(n, n);
  // Pairs whose inner product is at rounding level of the whole matrix are
  // treated as orthogonal; otherwise columns that have collapsed to noise
  // (J < X or rank-deficient F) keep rotating forever.
  const double eps = std::numeric_limits<double>::epsilon();
  const double negligible =
      eps * eps * features.squaredNorm() * static_cast<double>(n);

  bool converged = (n == 1);
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (std::abs(gamma) <= negligible ||
            std::abs(gamma) <=
                kJacobiTolerance * std::sqrt(alpha) * std::sqrt(beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
          const double ap = a(r, p);
          const double aq = a(r, q);
          a(r, p) = c * ap - s * aq;
          a(r, q) = s * ap + c * aq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const double vp = v(r, p);
          const double vq = v(r, q);
          v(r, p) = c * vp - s * vq;
          v(r, q) = s * vp + c * vq;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw Error(ErrorCode::kConvergenceFailure,
                "Jacobi SVD did not converge in " +
                    std::to_string(kMaxJacobiSweeps) + " sweeps");
  }

  Vector norms = a.colwise().norm().transpose();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) {
                     return norms(x) > norms(y);
                   });

  SpectralSummary out;
  out.singular_values.resize(n);
  out.right_vectors.resize(n, n);
  out.left_vectors = Matrix::Zero(features.rows(), n);
  const double sigma_max = norms(order[0]);
  // Columns below this are rounding residue of a rank-deficient input.
  const double floor = sigma_max * 1e-13 *
                       static_cast<double>(std::max(features.rows(), n));
  std::vector<bool> filled(n, false);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[k];
    out.singular_values(k) = norms(src);
    out.right_vectors.col(k) = v.col(src);
    if (norms(src) > floor && norms(src) > 0.0) {
      out.left_vectors.col(k) = a.col(src) / norms(src);
      filled[k] = true;
    }
  }
  CompleteLeftVectors(out.left_vectors, filled);

  for (Eigen::Index k = 0; k < n; ++k) {
    const Vector col = out.right_vectors.col(k);
    if (col(DominantIndex(col)) < 0.0) {
      out.right_vectors.col(k) *= -1.0;
      out.left_vectors.col(k) *= -1.0;
    }
  }
  return out;
}

PrincipalDirection ExtractPrincipalDirection(const SpectralSummary& summary) {
  const Vector& sigma = summary.singular_values;
  if (sigma.size() == 0 || !(sigma(0) > 0.0)) {
    throw Error(ErrorCode::kDegenerateSpectrum,
                "sigma_1 is zero; the feature matrix carries no direction");
  }
  PrincipalDirection out;
  out.direction = summary.right_vectors.col(0);
  out.direction.normalize();
  if (out.direction(DominantIndex(out.direction)) < 0.0) out.direction *= -1.0;
  out.tie_warning =
      sigma.size() > 1 && (sigma(0) - sigma(1)) < kTieTolerance * sigma(0);
  return out;
}

Vector Project(const Matrix& rows, const Vector& direction) {
  if (rows.cols() != direction.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "rows have " + std::to_string(rows.cols()) +
                    " columns but direction has length " +
                    std::to_string(direction.size()));
  }
  return rows * direction;
}

double ExplainedVarianceRatio(const Vector& singular_values, int k) {
  if (k < 1 || k > singular_values.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "k must lie in [1, " + std::to_string(singular_values.size()) +
                    "]");
  }
  const double total = singular_values.squaredNorm();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kAllZeroSpectrum, "all singular values are zero");
  }
  if (k == singular_values.size()) return 1.0;
  return singular_values.head(k).squaredNorm() / total;
}

double EffectiveRank(const Vector& singular_values) {
  const double total = singular_values.squaredNorm();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kAllZeroSpectrum, "all singular values are zero");
  }
  const double sum = singular_values.sum();
  const double r = sum * sum / total;
  return std::clamp(r, 1.0, static_cast<double>(singular_values.size()));
}

std::string_view DeploymentBandName(DeploymentBand band) {
  switch (band) {
    case DeploymentBand::kProceed:
      return "Proceed";
    case DeploymentBand::kCompare2D:
      return "Compare2D";
    case DeploymentBand::kUseAlternative:
      return "UseAlternative";
  }
  return "Unknown";
}

DeploymentBand BandForRho1(double rho1) {
  if (rho1 >= 0.5) return DeploymentBand::kProceed;
  if (rho1 >= 0.3) return DeploymentBand::kCompare2D;
  return DeploymentBand::kUseAlternative;
}

DiagnosticReport DiagnoseSpectrum(const SpectralSummary& summary) {
  DiagnosticReport report;
  report.singular_values = summary.singular_values;
  report.rho1 = ExplainedVarianceRatio(summary.singular_values, 1);
  report.effective_rank = EffectiveRank(summary.singular_values);
  report.band = BandForRho1(report.rho1);
  report.component_ratios = summary.singular_values.array().square() /
                            summary.singular_values.squaredNorm();
  const Vector& s = summary.singular_values;
  report.tie_warning = s.size() > 1 && (s(0) - s(1)) < kTieTolerance * s(0);
  switch (report.band) {
    case DeploymentBand::kProceed:
      report.approx_ratio_note =
          "rho1 >= 0.5, r_eff <~ 2: >= 50% guaranteed, typically > 95%; "
          "run the rank-1 mechanism";
      break;
    case DeploymentBand::kCompare2D:
      report.approx_ratio_note =
          "0.3 <= rho1 < 0.5, r_eff 2-3: 40-50% worst case; run the rank-1 "
          "and two-dimensional variants and compare";
      break;
    case DeploymentBand::kUseAlternative:
      report.approx_ratio_note =
          "rho1 < 0.3, r_eff > 3: below 40%, not reliable; use a "
          "pseudo-market or direct NSW solver";
      break;
  }
  return report;
}

DiagnosticReport Diagnose(const Matrix& features) {
  return DiagnoseSpectrum(ComputeSvd(features));
}

}  // namespace smatch
