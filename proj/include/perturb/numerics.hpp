#pragma once

#include <Eigen/Dense>
#include <string_view>

namespace perturb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Largest absolute entry. This is the "max-abs" norm used for every
// tolerance in the library.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

// Throws InputError when m is empty or has a non-finite entry.
void require_finite(const Matrix& m, std::string_view what);

// Checked product; throws DimensionError on a.cols() != b.rows().
Matrix matmul(const Matrix& a, const Matrix& b);

// max(rows, cols) * machine epsilon * largest singular value.
double default_rank_tolerance(const Matrix& m);

// Moore-Penrose inverse from a Jacobi SVD. Singular values <= tol are
// treated as zero; tol == 0 selects default_rank_tolerance.
Matrix pinv(const Matrix& m, double tol = 0.0);

// Number of singular values strictly above tol (tol == 0: default).
Eigen::Index numeric_rank(const Matrix& m, double tol = 0.0);

// Cholesky solve. Throws NotPositiveDefinite if a pivot is not positive.
Matrix solve_spd(const Matrix& m, const Matrix& rhs);

// log det of a symmetric positive definite matrix.
double logdet_spd(const Matrix& m);

struct SymEigen {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns, largest-magnitude entry positive
};

// Throws AsymmetricMatrix when max|m - m^T| > 1e-12 * max(1, max_abs(m)).
SymEigen sym_eigen(const Matrix& m);

// Flip the sign of v so its largest-magnitude entry is positive.
void fix_sign(Eigen::Ref<Vector> v);

}  // namespace perturb
