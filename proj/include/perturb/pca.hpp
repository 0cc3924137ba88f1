#pragma once

#include <vector>

#include "perturb/linmodel.hpp"
#include "perturb/numerics.hpp"

namespace perturb {

// Sigma-hat(eps) = Y^T P(eps) Y = S_0 + eps S_1 + ...
struct CovarianceSeries {
  std::vector<Matrix> coefficients;
};

CovarianceSeries covariance_series(const PerturbedDesign& design, const Matrix& y, int order,
                                   const InvertOptions& options = {});

struct EigenGap {
  double gap0 = 0.0;  // sqrt((s0_11 - s0_22)^2 + 4 s0_12^2)
  double gap1 = 0.0;  // first-order coefficient of lambda_1 - lambda_2
};

// Closed-form first-order eigenvalue gap for 2x2 symmetric S0 + eps S1.
// Throws DegenerateEigenvalue when gap0 <= 1e-8 * max_abs(S0).
EigenGap eigen_gap_2x2(const Matrix& s0, const Matrix& s1);

struct EigenExpansion {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  Vector d0;  // unit norm, largest-magnitude entry positive
  Vector d1;  // d0^T d1 = 0
};

// First-order expansion of the eigenpair at `index` (0 = largest) of
// S0 + eps S1. Throws DegenerateEigenvalue if that eigenvalue of S0 is not
// simple.
EigenExpansion eigen_pair_series(const Matrix& s0, const Matrix& s1, Eigen::Index index);

}  // namespace perturb
