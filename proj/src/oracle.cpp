#include "perturb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "perturb/errors.hpp"

namespace perturb::oracle {

Polynomial::Polynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int Polynomial::valuation() const {
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] != 0) return static_cast<int>(k);
  }
  return -1;
}

Rational Polynomial::coefficient(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
  return c_[static_cast<std::size_t>(k)];
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = a.coefficient(static_cast<int>(k)) + b.coefficient(static_cast<int>(k));
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const {
  std::vector<Rational> c(c_);
  for (auto& v : c) v = -v;
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::exact_div(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw MathError("Polynomial::exact_div: division by zero");
  if (is_zero()) return Polynomial();
  std::vector<Rational> rem(c_);
  const int dd = divisor.degree();
  const int qd = degree() - dd;
  if (qd < 0) throw MathError("Polynomial::exact_div: divisor does not divide");
  std::vector<Rational> q(static_cast<std::size_t>(qd + 1));
  const Rational& lead = divisor.c_.back();
  for (int k = qd; k >= 0; --k) {
    const Rational coef = rem[static_cast<std::size_t>(k + dd)] / lead;
    q[static_cast<std::size_t>(k)] = coef;
    if (coef == 0) continue;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= coef * divisor.c_[static_cast<std::size_t>(j)];
  }
  for (const auto& r : rem) {
    if (r != 0) throw MathError("Polynomial::exact_div: nonzero remainder");
  }
  return Polynomial(std::move(q));
}

std::vector<Rational> Polynomial::reciprocal_series(int terms) const {
  if (coefficient(0) == 0) throw MathError("Polynomial::reciprocal_series: zero constant term");
  std::vector<Rational> r(static_cast<std::size_t>(std::max(terms, 0)));
  const Rational c0 = c_[0];
  for (int k = 0; k < terms; ++k) {
    Rational acc = k == 0 ? Rational(1) : Rational(0);
    for (int i = 1; i <= k && i <= degree(); ++i) {
      acc -= c_[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(k - i)];
    }
    r[static_cast<std::size_t>(k)] = acc / c0;
  }
  return r;
}

RationalPolyMatrix::RationalPolyMatrix(Eigen::Index rows, Eigen::Index cols)
    : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows * cols)) {}

RationalPolyMatrix::RationalPolyMatrix(const RationalSeries& series)
    : RationalPolyMatrix(series.rows(), series.cols()) {
  for (Eigen::Index i = 0; i < rows_; ++i) {
    for (Eigen::Index j = 0; j < cols_; ++j) {
      std::vector<Rational> c;
      for (const auto& a : series.coefficients()) c.push_back(a(i, j));
      (*this)(i, j) = Polynomial(std::move(c));
    }
  }
}

RationalPolyMatrix RationalPolyMatrix::minor(Eigen::Index row, Eigen::Index col) const {
  RationalPolyMatrix out(rows_ - 1, cols_ - 1);
  for (Eigen::Index i = 0, oi = 0; i < rows_; ++i) {
    if (i == row) continue;
    for (Eigen::Index j = 0, oj = 0; j < cols_; ++j) {
      if (j == col) continue;
      out(oi, oj++) = (*this)(i, j);
    }
    ++oi;
  }
  return out;
}

Polynomial determinant(const RationalPolyMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant: matrix is not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return Polynomial::constant(Rational(1));
  RationalPolyMatrix m = a;
  bool negate = false;
  Polynomial previous = Polynomial::constant(Rational(1));
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (!m(i, k).is_zero()) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return Polynomial();
      for (Eigen::Index j = 0; j < n; ++j) std::swap(m(k, j), m(swap, j));
      negate = !negate;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)).exact_div(previous);
      }
      m(i, k) = Polynomial();
    }
    previous = m(k, k);
  }
  const Polynomial& det = m(n - 1, n - 1);
  return negate ? -det : det;
}

RationalPolyMatrix adjugate(const RationalPolyMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("adjugate: matrix is not square");
  const Eigen::Index n = a.rows();
  RationalPolyMatrix out(n, n);
  if (n == 1) {
    out(0, 0) = Polynomial::constant(Rational(1));
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Polynomial cof = determinant(a.minor(j, i));
      out(i, j) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  }
  return out;
}

int determinant_valuation(const RationalSeries& series) {
  const Polynomial det = determinant(RationalPolyMatrix(series));
  if (det.is_zero()) throw IdenticallySingular("determinant_valuation: det A(eps) is identically zero");
  return det.valuation();
}

RationalLaurent adjugate_laurent(const RationalSeries& series, int order) {
  if (!series.is_square()) throw DimensionError("adjugate_laurent: series is not square");
  const Eigen::Index n = series.rows();
  if (n > 6 || order > 6) throw InputError("adjugate_laurent: limited to n <= 6 and order <= 6");
  if (order < 0) throw InputError("adjugate_laurent: order must be non-negative");

  const RationalPolyMatrix a(series);
  const Polynomial det = determinant(a);
  if (det.is_zero()) throw IdenticallySingular("adjugate_laurent: det A(eps) is identically zero");
  const int v = det.valuation();
  std::vector<Rational> shifted(det.coefficients().begin() + v, det.coefficients().end());
  const std::vector<Rational> recip = Polynomial(std::move(shifted)).reciprocal_series(order + v + 1);
  const RationalPolyMatrix adj = adjugate(a);

  // A^{-1}(eps) = eps^{-v} adj(eps) / q(eps), q(0) != 0.
  std::vector<RationalMatrix> coeffs;
  for (int p = -v; p <= order; ++p) {
    RationalMatrix z = RationalMatrix::Zero(n, n);
    const int total = p + v;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        Rational acc(0);
        const Polynomial& e = adj(i, j);
        for (int d = 0; d <= std::min(total, e.degree()); ++d) {
          acc += e.coefficient(d) * recip[static_cast<std::size_t>(total - d)];
        }
        z(i, j) = acc;
      }
    }
    coeffs.push_back(std::move(z));
  }
  return RationalLaurent(v, std::move(coeffs), order).without_vanishing_poles(Rational(0));
}

namespace {

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw InputError("to_rational: non-finite entry");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant * 2^53 is an integer for every double.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  Rational two(2);
  for (int i = 0; i < std::abs(exp); ++i) {
    if (exp > 0) {
      r *= two;
    } else {
      r /= two;
    }
  }
  return r;
}

}  // namespace

RationalSeries to_rational(const AnalyticMatrixSeries& series) {
  std::vector<RationalMatrix> out;
  for (const auto& a : series.coefficients()) {
    RationalMatrix r(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = exact_rational(a(i, j));
    }
    out.push_back(std::move(r));
  }
  return RationalSeries(std::move(out));
}

Laurent to_double(const RationalLaurent& series) {
  std::vector<Matrix> out;
  for (const auto& c : series.coefficients()) {
    Matrix d(c.rows(), c.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.cols(); ++j) d(i, j) = c(i, j).convert_to<double>();
    }
    out.push_back(std::move(d));
  }
  return Laurent(series.pole_order(), std::move(out), series.valid_order());
}

double pointwise_residual(const AnalyticMatrixSeries& series, const Laurent& candidate,
                          const std::vector<double>& eps_grid) {
  if (series.cols() != candidate.rows()) throw DimensionError("pointwise_residual: shapes differ");
  double worst = 0.0;
  const Matrix identity = Matrix::Identity(series.rows(), candidate.cols());
  for (double eps : eps_grid) {
    worst = std::max(worst, max_abs(series.evaluate(eps) * candidate.evaluate(eps) - identity));
  }
  return worst;
}

double sse_direct(const PerturbedDesign& design, const Vector& y, double eps) {
  const Matrix xt = design.at(eps).transpose();
  const Vector residual = y - xt * (pinv(xt) * y);
  return residual.squaredNorm();
}

double minimize_sse(const PerturbedDesign& design, const Vector& y, double lo, double hi, double width) {
  if (!(hi > lo)) throw InputError("minimize_sse: empty bracket");
  if (y.size() != design.n()) throw DimensionError("minimize_sse: response length mismatch");
  constexpr int kGrid = 40;
  std::vector<double> xs(kGrid + 1);
  std::vector<double> fs(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / kGrid;
    fs[static_cast<std::size_t>(i)] = sse_direct(design, y, xs[static_cast<std::size_t>(i)]);
  }
  const auto [fmin_it, fmax_it] = std::minmax_element(fs.begin(), fs.end());
  if (*fmax_it - *fmin_it <= 1e-10 * std::max(1.0, std::abs(*fmax_it))) {
    throw NoInteriorMinimum("minimize_sse: SSE(eps) is flat on the bracket");
  }
  const auto best = static_cast<int>(fmin_it - fs.begin());
  if (best == 0 || best == kGrid) throw NoInteriorMinimum("minimize_sse: minimum lies on the bracket boundary");

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = xs[static_cast<std::size_t>(best - 1)];
  double b = xs[static_cast<std::size_t>(best + 1)];
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = sse_direct(design, y, c);
  double fd = sse_direct(design, y, d);
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = sse_direct(design, y, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = sse_direct(design, y, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace perturb::oracle
