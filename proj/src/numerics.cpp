#include "perturb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perturb/errors.hpp"

namespace perturb {

void require_finite(const Matrix& m, std::string_view what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw InputError(std::string(what) + ": matrix must be at least 1x1");
  }
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return a * b;
}

namespace {

using Svd = Eigen::JacobiSVD<Matrix>;

double resolve_tolerance(const Matrix& m, const Vector& singular_values, double tol) {
  if (tol > 0.0) return tol;
  const double largest = singular_values.size() > 0 ? singular_values(0) : 0.0;
  return static_cast<double>(std::max(m.rows(), m.cols())) *
         std::numeric_limits<double>::epsilon() * largest;
}

}  // namespace

double default_rank_tolerance(const Matrix& m) {
  Svd svd(m);
  return resolve_tolerance(m, svd.singularValues(), 0.0);
}

Matrix pinv(const Matrix& m, double tol) {
  if (tol < 0.0) throw DomainError("pinv: negative tolerance");
  Svd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cut = resolve_tolerance(m, sv, tol);
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::Index numeric_rank(const Matrix& m, double tol) {
  if (tol < 0.0) throw DomainError("numeric_rank: negative tolerance");
  Svd svd(m);
  const Vector& sv = svd.singularValues();
  const double cut = resolve_tolerance(m, sv, tol);
  return (sv.array() > cut).count();
}

Matrix solve_spd(const Matrix& m, const Matrix& rhs) {
  if (m.rows() != m.cols() || m.rows() != rhs.rows()) {
    throw DimensionError("solve_spd: incompatible shapes");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("solve_spd: matrix is not positive definite");
  }
  return llt.solve(rhs);
}

double logdet_spd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("logdet_spd: matrix is not positive definite");
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

void fix_sign(Eigen::Ref<Vector> v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    // strict comparison with a small margin keeps the first of near-ties
    if (std::abs(v(i)) > std::abs(v(arg)) * (1.0 + 1e-12)) arg = i;
  }
  if (v.size() > 0 && v(arg) < 0.0) v = -v;
}

SymEigen sym_eigen(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("sym_eigen: matrix is not square");
  const double asym = max_abs(m - m.transpose());
  if (asym > 1e-12 * std::max(1.0, max_abs(m))) {
    throw AsymmetricMatrix("sym_eigen: asymmetry " + std::to_string(asym));
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Eigen::Index n = m.rows();
  SymEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    fix_sign(out.vectors.col(i));
  }
  return out;
}

}  // namespace perturb
