#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "perturb/errors.hpp"

namespace perturb {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// valid_order() of a series whose unstored coefficients are exactly zero.
inline constexpr int kExactOrder = std::numeric_limits<int>::max();

namespace detail {

template <typename Scalar>
Scalar scalar_power(const Scalar& x, int p) {
  Scalar out(1);
  if (p >= 0) {
    for (int i = 0; i < p; ++i) out *= x;
  } else {
    for (int i = 0; i < -p; ++i) out /= x;
  }
  return out;
}

}  // namespace detail

/// Matrix polynomial A(eps) = A_0 + eps A_1 + ... + eps^T A_T.
///
/// Coefficients past the truncation order T are zero; evaluate() is exact
/// up to floating-point rounding.
template <typename Scalar>
class MatrixSeries {
 public:
  using MatrixType = MatrixX<Scalar>;

  explicit MatrixSeries(std::vector<MatrixType> coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw InputError("MatrixSeries: at least one coefficient required");
    const auto r = coefficients_.front().rows();
    const auto c = coefficients_.front().cols();
    if (r < 1 || c < 1) throw InputError("MatrixSeries: coefficients must be at least 1x1");
    for (const auto& m : coefficients_) {
      if (m.rows() != r || m.cols() != c) {
        throw DimensionError("MatrixSeries: coefficients differ in shape");
      }
    }
  }

  Eigen::Index rows() const { return coefficients_.front().rows(); }
  Eigen::Index cols() const { return coefficients_.front().cols(); }
  bool is_square() const { return rows() == cols(); }
  int truncation_order() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<MatrixType>& coefficients() const { return coefficients_; }

  MatrixType coefficient(int k) const {
    if (k < 0 || k > truncation_order()) return MatrixType::Zero(rows(), cols());
    return coefficients_[static_cast<std::size_t>(k)];
  }

  MatrixType evaluate(const Scalar& eps) const {
    MatrixType out = coefficients_.back();
    for (int k = truncation_order() - 1; k >= 0; --k) {
      out = (out * eps).eval();
      out += coefficients_[static_cast<std::size_t>(k)];
    }
    return out;
  }

  MatrixSeries transpose() const {
    std::vector<MatrixType> t;
    t.reserve(coefficients_.size());
    for (const auto& m : coefficients_) t.push_back(m.transpose());
    return MatrixSeries(std::move(t));
  }

 private:
  std::vector<MatrixType> coefficients_;
};

/// Truncated Laurent series  sum_{p = -s}^{h} eps^p Y_p.
///
/// valid_order() is the highest power whose coefficient is known to be
/// exact: coefficients above it are unknown, not zero. A series built from
/// a polynomial has valid_order() == kExactOrder and zero coefficients
/// beyond highest_power().
template <typename Scalar>
class LaurentSeries {
 public:
  using MatrixType = MatrixX<Scalar>;

  LaurentSeries(int pole_order, std::vector<MatrixType> coefficients, int valid_order)
      : pole_order_(pole_order), coefficients_(std::move(coefficients)), valid_order_(valid_order) {
    if (pole_order_ < 0) throw InputError("LaurentSeries: negative pole order");
    if (coefficients_.empty()) throw InputError("LaurentSeries: no coefficients");
    for (const auto& m : coefficients_) {
      if (m.rows() != rows() || m.cols() != cols()) {
        throw DimensionError("LaurentSeries: coefficients differ in shape");
      }
    }
    if (valid_order_ != kExactOrder && valid_order_ < highest_power()) {
      throw InputError("LaurentSeries: stored coefficients beyond the valid order");
    }
  }

  static LaurentSeries from_polynomial(const MatrixSeries<Scalar>& a) {
    return LaurentSeries(0, a.coefficients(), kExactOrder);
  }

  Eigen::Index rows() const { return coefficients_.front().rows(); }
  Eigen::Index cols() const { return coefficients_.front().cols(); }
  int pole_order() const { return pole_order_; }
  int lowest_power() const { return -pole_order_; }
  int highest_power() const { return lowest_power() + static_cast<int>(coefficients_.size()) - 1; }
  int valid_order() const { return valid_order_; }
  bool exact() const { return valid_order_ == kExactOrder; }
  const std::vector<MatrixType>& coefficients() const { return coefficients_; }

  // Coefficient of eps^power. Zero below the pole and, for exact series,
  // above the stored range.
  MatrixType coefficient(int power) const {
    if (power < lowest_power()) return MatrixType::Zero(rows(), cols());
    if (power > highest_power()) {
      if (exact() || power <= valid_order_) return MatrixType::Zero(rows(), cols());
      throw InputError("LaurentSeries: coefficient of eps^" + std::to_string(power) +
                       " beyond valid order " + std::to_string(valid_order_));
    }
    return coefficients_[static_cast<std::size_t>(power - lowest_power())];
  }

  // Sum of the stored terms at eps (eps != 0 when a pole is present).
  MatrixType evaluate(const Scalar& eps) const {
    MatrixType out = MatrixType::Zero(rows(), cols());
    for (int p = lowest_power(); p <= highest_power(); ++p) {
      out += coefficients_[static_cast<std::size_t>(p - lowest_power())] * detail::scalar_power(eps, p);
    }
    return out;
  }

  // Drop every stored term above `order`.
  LaurentSeries truncated(int order) const {
    if (order < lowest_power()) throw InputError("LaurentSeries: truncation below the pole");
    const int top = std::min(order, highest_power());
    std::vector<MatrixType> kept(coefficients_.begin(), coefficients_.begin() + (top - lowest_power() + 1));
    const int valid = exact() ? order : std::min(order, valid_order_);
    return LaurentSeries(pole_order_, std::move(kept), valid);
  }

  // Remove leading negative-power terms whose max-abs entry is <= tol,
  // stopping at the eps^0 term. The removed coefficients are returned
  // through `residue` (largest max-abs among them).
  template <typename Tol>
  LaurentSeries without_vanishing_poles(const Tol& tol, Scalar* residue = nullptr) const {
    int drop = 0;
    Scalar worst(0);
    while (drop < pole_order_) {
      const Scalar m = max_abs_entry(coefficients_[static_cast<std::size_t>(drop)]);
      if (m > tol) break;
      if (m > worst) worst = m;
      ++drop;
    }
    if (residue != nullptr) *residue = worst;
    if (drop == 0) return *this;
    std::vector<MatrixType> kept(coefficients_.begin() + drop, coefficients_.end());
    return LaurentSeries(pole_order_ - drop, std::move(kept), valid_order_);
  }

  static Scalar max_abs_entry(const MatrixType& m) {
    using std::abs;
    Scalar best(0);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Scalar a = abs(m(i, j));
        if (a > best) best = a;
      }
    }
    return best;
  }

 private:
  int pole_order_;
  std::vector<MatrixType> coefficients_;
  int valid_order_;
};

/// Cauchy product of two Laurent series.
///
/// The result is valid through min(va - sb, vb - sa) (exact if both inputs
/// are exact); nothing above that is stored.
template <typename Scalar>
LaurentSeries<Scalar> series_multiply(const LaurentSeries<Scalar>& a, const LaurentSeries<Scalar>& b) {
  using MatrixType = MatrixX<Scalar>;
  if (a.cols() != b.rows()) {
    throw DimensionError("series_multiply: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const int low = a.lowest_power() + b.lowest_power();
  int valid = kExactOrder;
  if (!a.exact()) valid = a.valid_order() + b.lowest_power();
  if (!b.exact()) valid = std::min(valid, b.valid_order() + a.lowest_power());
  const int natural_top = a.highest_power() + b.highest_power();
  const int top = std::min(valid, natural_top);
  if (top < low) throw InputError("series_multiply: no valid coefficients in the product");

  std::vector<MatrixType> out;
  out.reserve(static_cast<std::size_t>(top - low + 1));
  for (int p = low; p <= top; ++p) {
    MatrixType acc = MatrixType::Zero(a.rows(), b.cols());
    const int i_lo = std::max(a.lowest_power(), p - b.highest_power());
    const int i_hi = std::min(a.highest_power(), p - b.lowest_power());
    for (int i = i_lo; i <= i_hi; ++i) {
      acc += a.coefficients()[static_cast<std::size_t>(i - a.lowest_power())] *
             b.coefficients()[static_cast<std::size_t>(p - i - b.lowest_power())];
    }
    out.push_back(std::move(acc));
  }
  return LaurentSeries<Scalar>(-low, std::move(out), valid);
}

template <typename Scalar>
LaurentSeries<Scalar> series_multiply(const MatrixSeries<Scalar>& a, const LaurentSeries<Scalar>& b) {
  return series_multiply(LaurentSeries<Scalar>::from_polynomial(a), b);
}

template <typename Scalar>
LaurentSeries<Scalar> series_multiply(const LaurentSeries<Scalar>& a, const MatrixSeries<Scalar>& b) {
  return series_multiply(a, LaurentSeries<Scalar>::from_polynomial(b));
}

template <typename Scalar>
LaurentSeries<Scalar> series_multiply(const MatrixSeries<Scalar>& a, const MatrixSeries<Scalar>& b) {
  return series_multiply(LaurentSeries<Scalar>::from_polynomial(a), LaurentSeries<Scalar>::from_polynomial(b));
}

// Scalar power series c_0 + c_1 eps + ..., used for SSE and F assemblies.
using ScalarSeries = std::vector<double>;

inline double evaluate(const ScalarSeries& c, double eps) {
  double out = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) out = out * eps + *it;
  return out;
}

// First `terms` coefficients of a * b (missing inputs count as zero).
inline ScalarSeries cauchy_product(const ScalarSeries& a, const ScalarSeries& b, std::size_t terms) {
  ScalarSeries out(terms, 0.0);
  for (std::size_t k = 0; k < terms; ++k) {
    for (std::size_t i = 0; i <= k && i < a.size(); ++i) {
      if (k - i < b.size()) out[k] += a[i] * b[k - i];
    }
  }
  return out;
}

// First `terms` coefficients of num / den; den[0] must be nonzero.
inline ScalarSeries series_divide(const ScalarSeries& num, const ScalarSeries& den, std::size_t terms) {
  if (den.empty() || den[0] == 0.0) throw DomainError("series_divide: zero constant term in denominator");
  ScalarSeries out(terms, 0.0);
  for (std::size_t k = 0; k < terms; ++k) {
    double v = k < num.size() ? num[k] : 0.0;
    for (std::size_t i = 1; i <= k && i < den.size(); ++i) v -= den[i] * out[k - i];
    out[k] = v / den[0];
  }
  return out;
}

}  // namespace perturb
