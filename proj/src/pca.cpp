#include "perturb/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perturb/errors.hpp"

namespace perturb {

namespace {

double degeneracy_tol(const Matrix& s0) { return 1e-8 * std::max(max_abs(s0), 1e-300); }

void require_symmetric(const Matrix& s, const char* who) {
  if (s.rows() != s.cols()) throw DimensionError(std::string(who) + ": matrix is not square");
  if (max_abs(s - s.transpose()) > 1e-10 * std::max(1.0, max_abs(s))) {
    throw AsymmetricMatrix(std::string(who) + ": matrix is not symmetric");
  }
}

}  // namespace

CovarianceSeries covariance_series(const PerturbedDesign& design, const Matrix& y, int order,
                                   const InvertOptions& options) {
  if (y.rows() != design.n()) {
    throw DimensionError("covariance_series: Y has " + std::to_string(y.rows()) + " rows, design has " +
                         std::to_string(design.n()) + " observations");
  }
  require_finite(y, "covariance_series");
  CovarianceSeries out;
  for (const auto& p : projection_series(design, order, options)) {
    const Matrix s = y.transpose() * p * y;
    out.coefficients.push_back(0.5 * (s + s.transpose()));
  }
  return out;
}

EigenGap eigen_gap_2x2(const Matrix& s0, const Matrix& s1) {
  if (s0.rows() != 2 || s0.cols() != 2 || s1.rows() != 2 || s1.cols() != 2) {
    throw DimensionError("eigen_gap_2x2: both matrices must be 2x2");
  }
  require_symmetric(s0, "eigen_gap_2x2");
  require_symmetric(s1, "eigen_gap_2x2");
  const double diff0 = s0(0, 0) - s0(1, 1);
  const double diff1 = s1(0, 0) - s1(1, 1);
  EigenGap out;
  out.gap0 = std::sqrt(diff0 * diff0 + 4.0 * s0(0, 1) * s0(0, 1));
  if (out.gap0 <= degeneracy_tol(s0)) {
    throw DegenerateEigenvalue("eigen_gap_2x2: S0 has a repeated eigenvalue");
  }
  out.gap1 = (diff1 * diff0 + 4.0 * s0(0, 1) * s1(0, 1)) / out.gap0;
  return out;
}

EigenExpansion eigen_pair_series(const Matrix& s0, const Matrix& s1, Eigen::Index index) {
  require_symmetric(s0, "eigen_pair_series");
  require_symmetric(s1, "eigen_pair_series");
  if (s1.rows() != s0.rows()) throw DimensionError("eigen_pair_series: S0 and S1 differ in size");
  if (index < 0 || index >= s0.rows()) throw InputError("eigen_pair_series: eigenpair index out of range");

  const SymEigen eig = sym_eigen(s0);
  const double tol = degeneracy_tol(s0);
  EigenExpansion out;
  out.lambda0 = eig.values(index);
  out.d0 = eig.vectors.col(index);
  const Vector s1d0 = s1 * out.d0;
  out.lambda1 = out.d0.dot(s1d0);

  // (S0 - lambda0 I) d1 = (lambda1 I - S1) d0, solved on the complement of d0.
  out.d1 = Vector::Zero(s0.rows());
  for (Eigen::Index j = 0; j < s0.rows(); ++j) {
    if (j == index) continue;
    const double gap = out.lambda0 - eig.values(j);
    if (std::abs(gap) <= tol) {
      throw DegenerateEigenvalue("eigen_pair_series: eigenvalue " + std::to_string(out.lambda0) +
                                 " of S0 is not simple");
    }
    out.d1 += (eig.vectors.col(j).dot(s1d0) / gap) * eig.vectors.col(j);
  }
  return out;
}

}  // namespace perturb
