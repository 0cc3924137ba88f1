#pragma once

// Independent verification engines. Nothing here is used on production
// paths: exact rational Laurent inversion through det/adjugate, pointwise
// residual sampling, and a golden-section minimizer of the exact SSE(eps).

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <vector>

#include "perturb/laurent.hpp"
#include "perturb/linmodel.hpp"
#include "perturb/series.hpp"

namespace perturb::oracle {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;
using RationalMatrix = MatrixX<Rational>;
using RationalSeries = MatrixSeries<Rational>;
using RationalLaurent = LaurentSeries<Rational>;

// Dense polynomial in eps with exact rational coefficients; index = power.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);
  static Polynomial constant(const Rational& c) { return Polynomial({c}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  // Lowest power with a nonzero coefficient; -1 for the zero polynomial.
  int valuation() const;
  Rational coefficient(int k) const;
  const std::vector<Rational>& coefficients() const { return c_; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  Polynomial operator-() const;

  // Exact division; throws MathError if `divisor` does not divide *this.
  Polynomial exact_div(const Polynomial& divisor) const;

  // First `terms` power-series coefficients of 1 / (*this); constant term
  // must be nonzero.
  std::vector<Rational> reciprocal_series(int terms) const;

 private:
  void trim();
  std::vector<Rational> c_;
};

// Square matrix of polynomials, row-major.
class RationalPolyMatrix {
 public:
  RationalPolyMatrix(Eigen::Index rows, Eigen::Index cols);
  explicit RationalPolyMatrix(const RationalSeries& series);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Polynomial& operator()(Eigen::Index i, Eigen::Index j) { return e_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Polynomial& operator()(Eigen::Index i, Eigen::Index j) const {
    return e_[static_cast<std::size_t>(i * cols_ + j)];
  }

  RationalPolyMatrix minor(Eigen::Index row, Eigen::Index col) const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  std::vector<Polynomial> e_;
};

// Fraction-free (Bareiss) determinant over Q[eps].
Polynomial determinant(const RationalPolyMatrix& a);
RationalPolyMatrix adjugate(const RationalPolyMatrix& a);

// Exact Laurent coefficients of A(eps)^{-1} through eps^order via
// det / adjugate. Throws IdenticallySingular when det A(eps) == 0.
// Restricted to n <= 6 and order <= 6.
RationalLaurent adjugate_laurent(const RationalSeries& series, int order);

// Valuation of det A(eps): the pole-order structure seen by the oracle.
int determinant_valuation(const RationalSeries& series);

RationalSeries to_rational(const AnalyticMatrixSeries& series);  // exact binary-to-rational
Laurent to_double(const RationalLaurent& series);

// max over eps in grid of max_abs(A(eps) candidate(eps) - I).
double pointwise_residual(const AnalyticMatrixSeries& series, const Laurent& candidate,
                          const std::vector<double>& eps_grid);

// Golden-section minimizer of the exact SSE(eps) (least squares via
// pseudoinverse at each eps) to `width` bracket width. Throws
// NoInteriorMinimum if SSE is flat on the bracket or the minimum sits on an
// endpoint.
double minimize_sse(const PerturbedDesign& design, const Vector& y, double lo, double hi, double width = 1e-6);

// Exact SSE(eps) from the pseudoinverse least-squares solution.
double sse_direct(const PerturbedDesign& design, const Vector& y, double eps);

}  // namespace perturb::oracle
