#include "perturb/linmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perturb/errors.hpp"
#include "perturb/f_distribution.hpp"

namespace perturb {

namespace {

// Relative threshold for negative powers that must cancel.
constexpr double kCancelTol = 1e-8;

Matrix component_or_zero(const PerturbedDesign& design, int k) {
  if (k < 0 || k >= static_cast<int>(design.components().size())) {
    return Matrix::Zero(design.m(), design.n());
  }
  return design.component(static_cast<std::size_t>(k));
}

void check_response(const PerturbedDesign& design, const Vector& y, const char* who) {
  if (y.size() != design.n()) {
    throw DimensionError(std::string(who) + ": response has " + std::to_string(y.size()) +
                         " entries, design has " + std::to_string(design.n()) + " observations");
  }
  if (!y.allFinite()) throw InputError(std::string(who) + ": response has non-finite entries");
}

void check_beta(const PerturbedDesign& design, const Vector& beta, const char* who) {
  if (beta.size() != design.m()) {
    throw DimensionError(std::string(who) + ": beta has " + std::to_string(beta.size()) + " entries, expected " +
                         std::to_string(design.m()));
  }
}

double dof_ratio(const PerturbedDesign& design) {
  return static_cast<double>(design.n() - design.m()) / static_cast<double>(design.m());
}

template <typename Coeffs>
Matrix partial_sum(const Coeffs& c, double eps, int order) {
  Matrix out = Matrix::Zero(c.front().rows(), c.front().cols());
  double power = 1.0;
  for (int k = 0; k <= order && k < static_cast<int>(c.size()); ++k) {
    out += power * c[static_cast<std::size_t>(k)];
    power *= eps;
  }
  return out;
}

double partial_sum(const ScalarSeries& c, double eps, int order) {
  ScalarSeries head(c.begin(), c.begin() + std::min<std::size_t>(c.size(), static_cast<std::size_t>(order + 1)));
  return evaluate(head, eps);
}

// Taylor coefficients of F(eps) = ((n-m)/m) N(eps) / SSE(eps) with
// N = (beta(eps) - beta0)^T B(eps) (beta(eps) - beta0).
ScalarSeries f_taylor(const std::vector<Vector>& beta, const std::vector<Matrix>& gram, const ScalarSeries& sse,
                      const Vector& beta0, double dof, int order) {
  const auto terms = static_cast<std::size_t>(order + 1);
  std::vector<Vector> d(beta.begin(), beta.begin() + static_cast<long>(std::min(terms, beta.size())));
  d[0] = beta[0] - beta0;
  ScalarSeries numerator(terms, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < gram.size() && i + j < terms; ++j) {
      const Vector bd = gram[j] * d[i];
      for (std::size_t l = 0; l < d.size() && i + j + l < terms; ++l) {
        numerator[i + j + l] += d[l].dot(bd);
      }
    }
  }
  if (sse.empty() || sse[0] <= 0.0) throw NonPositiveSse("F statistic: SSE at eps = 0 is not positive");
  ScalarSeries f = series_divide(numerator, sse, terms);
  for (double& v : f) v *= dof;
  return f;
}

struct DirectFit {
  Matrix gram;
  Vector beta;
  double sse = 0.0;
};

DirectFit direct_fit(const PerturbedDesign& design, const Vector& y, double eps) {
  const Matrix x = design.at(eps);
  DirectFit out;
  out.gram = x * x.transpose();
  Eigen::JacobiSVD<Matrix> svd(out.gram);
  const Vector& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > kMaxGramCondition) {
    throw OutsideValidityDisc("eps = " + std::to_string(eps) + ": Gram matrix condition number exceeds 1e12");
  }
  out.beta = out.gram.ldlt().solve(x * y);
  const Vector residual = y - x.transpose() * out.beta;
  out.sse = residual.squaredNorm();
  return out;
}

double f_from_parts(const Matrix& gram, const Vector& beta, double sse, const Vector& beta0, double dof) {
  if (!(sse > 0.0)) throw NonPositiveSse("F statistic: SSE(eps) is not positive");
  const Vector d = beta - beta0;
  return dof * d.dot(gram * d) / sse;
}

std::vector<Matrix> gram_coefficients(const RegressionExpansion& e, int order) {
  std::vector<Matrix> out;
  for (int k = 0; k <= order; ++k) out.push_back(e.gram.coefficient(k));
  return out;
}

}  // namespace

PerturbedDesign::PerturbedDesign(std::vector<Matrix> components) : components_(std::move(components)) {
  if (components_.empty()) throw InputError("PerturbedDesign: at least one component required");
  const auto m = components_.front().rows();
  const auto n = components_.front().cols();
  for (const auto& c : components_) {
    require_finite(c, "PerturbedDesign");
    if (c.rows() != m || c.cols() != n) throw DimensionError("PerturbedDesign: components differ in shape");
  }
  if (!(m >= 1 && n > m)) {
    throw DimensionError("PerturbedDesign: need n > m >= 1, got m = " + std::to_string(m) +
                         ", n = " + std::to_string(n));
  }
}

RegressionExpansion expand_gram(const PerturbedDesign& design, int order, const InvertOptions& options) {
  if (order < 0) throw InputError("expand_gram: order must be non-negative");
  const int t = static_cast<int>(design.components().size()) - 1;
  std::vector<Matrix> b;
  for (int k = 0; k <= 2 * t; ++k) {
    Matrix bk = Matrix::Zero(design.m(), design.m());
    for (int i = std::max(0, k - t); i <= std::min(k, t); ++i) {
      bk += design.component(static_cast<std::size_t>(i)) * design.component(static_cast<std::size_t>(k - i)).transpose();
    }
    b.push_back(std::move(bk));
  }
  AnalyticMatrixSeries gram(std::move(b));
  Laurent inverse = invert_series(gram, order, options);
  const int pole = inverse.pole_order();
  return RegressionExpansion{std::move(gram), std::move(inverse), pole};
}

std::vector<Vector> beta_series(const PerturbedDesign& design, const Vector& y, int order,
                                const InvertOptions& options) {
  check_response(design, y, "beta_series");
  const RegressionExpansion e = expand_gram(design, order, options);
  if (e.pole_order > 0) {
    throw SingularPerturbation("beta_series: X_0 X_0^T is singular (pole order " + std::to_string(e.pole_order) +
                               "); use fit_singular");
  }
  std::vector<Vector> xy;
  for (int j = 0; j <= order; ++j) xy.push_back(component_or_zero(design, j) * y);
  std::vector<Vector> out;
  for (int k = 0; k <= order; ++k) {
    Vector bk = Vector::Zero(design.m());
    for (int i = 0; i <= k; ++i) bk += e.inverse.coefficient(i) * xy[static_cast<std::size_t>(k - i)];
    out.push_back(std::move(bk));
  }
  return out;
}

std::vector<Matrix> projection_series(const PerturbedDesign& design, int order, const InvertOptions& options) {
  const RegressionExpansion e = expand_gram(design, order, options);
  const AnalyticMatrixSeries x = design.series();
  const Laurent hat = series_multiply(series_multiply(x.transpose(), e.inverse), x);

  double scale = 1.0;
  for (const auto& c : hat.coefficients()) scale = std::max(scale, max_abs(c));
  for (int p = hat.lowest_power(); p < 0; ++p) {
    const double residue = max_abs(hat.coefficient(p));
    if (residue > kCancelTol * scale) {
      throw NumericalBreakdown("projection_series: coefficient of eps^" + std::to_string(p) + " is " +
                               std::to_string(residue) + ", expected cancellation");
    }
  }
  std::vector<Matrix> out;
  for (int k = 0; k <= order; ++k) {
    Matrix pk = -hat.coefficient(k);
    if (k == 0) pk.diagonal().array() += 1.0;
    out.push_back(std::move(pk));
  }
  return out;
}

ScalarSeries sse_series(const PerturbedDesign& design, const Vector& y, int order, const InvertOptions& options) {
  check_response(design, y, "sse_series");
  ScalarSeries out;
  for (const auto& p : projection_series(design, order, options)) out.push_back(y.dot(p * y));
  return out;
}

EpsilonEstimate epsilon_hat(const PerturbedDesign& design, const Vector& y, const InvertOptions& options) {
  const ScalarSeries sse = sse_series(design, y, 2, options);
  const double quad = sse[2];
  if (std::abs(quad) < 1e-12 * std::max(1.0, y.squaredNorm())) {
    throw DegenerateEpsilon("epsilon_hat: quadratic SSE coefficient vanishes; eps is not identifiable");
  }
  EpsilonEstimate out;
  out.linear_coefficient = sse[1];
  out.quadratic_coefficient = quad;
  out.stationary_point = -sse[1] / (2.0 * quad);
  // a / (2b) with a = -sse_1, b = -sse_2
  out.value = sse[1] / (2.0 * quad);
  return out;
}

Vector exact_beta(const PerturbedDesign& design, const Vector& y, double eps) {
  check_response(design, y, "exact_beta");
  return direct_fit(design, y, eps).beta;
}

double exact_sse(const PerturbedDesign& design, const Vector& y, double eps) {
  check_response(design, y, "exact_sse");
  return direct_fit(design, y, eps).sse;
}

Matrix exact_projection(const PerturbedDesign& design, double eps) {
  const Matrix x = design.at(eps);
  const Matrix gram = x * x.transpose();
  Eigen::JacobiSVD<Matrix> svd(gram);
  const Vector& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || sv(0) / smin > kMaxGramCondition) {
    throw OutsideValidityDisc("eps = " + std::to_string(eps) + ": Gram matrix condition number exceeds 1e12");
  }
  Matrix p = -x.transpose() * gram.ldlt().solve(x);
  p.diagonal().array() += 1.0;
  return p;
}

ScalarSeries f_series(const PerturbedDesign& design, const Vector& y, const Vector& beta0, int order,
                      const InvertOptions& options) {
  check_response(design, y, "f_series");
  check_beta(design, beta0, "f_series");
  const RegressionExpansion e = expand_gram(design, order, options);
  return f_taylor(beta_series(design, y, order, options), gram_coefficients(e, order),
                  sse_series(design, y, order, options), beta0, dof_ratio(design), order);
}

double f_statistic(const PerturbedDesign& design, const Vector& y, const Vector& beta0, double eps,
                   std::optional<int> order, const InvertOptions& options) {
  check_response(design, y, "f_statistic");
  check_beta(design, beta0, "f_statistic");
  if (!order) {
    const DirectFit d = direct_fit(design, y, eps);
    return f_from_parts(d.gram, d.beta, d.sse, beta0, dof_ratio(design));
  }
  if (partial_sum(sse_series(design, y, *order, options), eps, *order) <= 0.0) {
    throw NonPositiveSse("f_statistic: truncated SSE(eps) is not positive at eps = " + std::to_string(eps));
  }
  return evaluate(f_series(design, y, beta0, *order, options), eps);
}

Vector standard_errors(const PerturbedDesign& design, const Vector& y, double eps, std::optional<int> order,
                       const InvertOptions& options) {
  check_response(design, y, "standard_errors");
  const double dof = static_cast<double>(design.n() - design.m());
  double sse = 0.0;
  Matrix cov;
  if (!order) {
    const DirectFit d = direct_fit(design, y, eps);
    sse = d.sse;
    cov = d.gram.inverse();
  } else {
    const RegressionExpansion e = expand_gram(design, *order, options);
    if (e.pole_order > 0) throw SingularPerturbation("standard_errors: singular Gram series; use fit_singular");
    std::vector<Matrix> c;
    for (int k = 0; k <= *order; ++k) c.push_back(e.inverse.coefficient(k));
    cov = partial_sum(c, eps, *order);
    sse = partial_sum(sse_series(design, y, *order, options), eps, *order);
  }
  if (std::abs(sse) <= 1e-12 * std::max(1.0, y.squaredNorm())) return Vector::Zero(design.m());
  if (sse < 0.0) throw NonPositiveSse("standard_errors: SSE(eps) is negative at eps = " + std::to_string(eps));
  const Vector var = (sse / dof) * cov.diagonal();
  if ((var.array() < 0.0).any()) {
    throw OutsideValidityDisc("standard_errors: negative variance at eps = " + std::to_string(eps));
  }
  return var.array().sqrt();
}

ConfidenceSet::ConfidenceSet(const PerturbedDesign& design, const Vector& y, double alpha, double eps,
                             std::optional<int> order, const InvertOptions& options)
    : alpha_(alpha),
      threshold_(f_quantile(alpha, static_cast<double>(design.m()), static_cast<double>(design.n() - design.m()))),
      eps_(eps),
      order_(order),
      dof_ratio_(dof_ratio(design)) {
  check_response(design, y, "confidence_set");
  if (!order) {
    const DirectFit d = direct_fit(design, y, eps);
    beta_exact_ = d.beta;
    gram_exact_ = d.gram;
    sse_exact_ = d.sse;
    return;
  }
  const RegressionExpansion e = expand_gram(design, *order, options);
  beta_ = beta_series(design, y, *order, options);
  gram_ = gram_coefficients(e, *order);
  sse_ = sse_series(design, y, *order, options);
  if (partial_sum(sse_, eps, *order) <= 0.0) {
    throw NonPositiveSse("confidence_set: truncated SSE(eps) is not positive at eps = " + std::to_string(eps));
  }
}

double ConfidenceSet::f_value_at(const Vector& beta) const {
  if (!order_) return f_from_parts(gram_exact_, beta_exact_, sse_exact_, beta, dof_ratio_);
  if (beta.size() != beta_.front().size()) throw DimensionError("confidence_set: beta has wrong length");
  return perturb::evaluate(f_taylor(beta_, gram_, sse_, beta, dof_ratio_, *order_), eps_);
}

ConfidenceSetEval ConfidenceSet::evaluate(const Vector& beta) const {
  ConfidenceSetEval out;
  out.alpha = alpha_;
  out.threshold = threshold_;
  out.f_value = f_value_at(beta);
  out.contained = out.f_value <= threshold_;
  return out;
}

ConfidenceSet confidence_set(const PerturbedDesign& design, const Vector& y, double alpha, double eps,
                             std::optional<int> order, const InvertOptions& options) {
  return ConfidenceSet(design, y, alpha, eps, order, options);
}

SingularFit fit_singular(const PerturbedDesign& design, const Vector& y, const std::optional<Vector>& beta0,
                         const InvertOptions& options) {
  check_response(design, y, "fit_singular");
  if (beta0) check_beta(design, *beta0, "fit_singular");
  const RegressionExpansion e = expand_gram(design, 0, options);
  if (e.pole_order == 0) {
    throw InputError("fit_singular: X_0 X_0^T is nonsingular; use the regular fit");
  }
  const Matrix& x0 = design.component(0);
  const Matrix b0 = e.gram.coefficient(0);
  const double n = static_cast<double>(design.n());
  const double m = static_cast<double>(design.m());

  SingularFit out;
  out.pole_order = e.pole_order;
  out.b0_ginv = pinv(b0, options.rank_tol);
  out.beta_tilde = out.b0_ginv * (x0 * y);
  out.rank = numeric_rank(x0, options.rank_tol);
  out.nu = design.n() - out.rank;
  out.d0_star = -x0.transpose() * out.b0_ginv * x0;
  out.d0_star.diagonal().array() += 1.0;
  out.sse_d0_star = y.dot(out.d0_star * y);
  out.sse_limit = y.dot(projection_series(design, 0, options).front() * y);

  const Laurent cx = series_multiply(e.inverse, design.series());
  double scale = 1.0;
  for (const auto& c : cx.coefficients()) scale = std::max(scale, max_abs(c));
  out.maclaurin_representation = true;
  for (int p = cx.lowest_power(); p < 0; ++p) {
    if (max_abs(cx.coefficient(p)) > kCancelTol * scale) out.maclaurin_representation = false;
  }

  const double r = static_cast<double>(out.rank);
  out.f_scale = r * (n - m) / (m * (n - r));
  if (beta0) {
    const Vector d = out.beta_tilde - *beta0;
    const double q = d.dot(b0 * d);
    if (out.sse_limit > 0.0) out.f_tilde = (q / m) / (out.sse_limit / (n - m));
    if (out.sse_d0_star > 0.0 && r > 0.0) out.f0_rank_based = (q / r) / (out.sse_d0_star / (n - r));
  }
  return out;
}

FitResult fit(const PerturbedDesign& design, const Vector& y, const FitOptions& options) {
  check_response(design, y, "fit");
  if (options.beta0) check_beta(design, *options.beta0, "fit");
  const int order = std::max(options.order, options.eval_order.value_or(0));
  std::optional<EpsilonEstimate> estimate;
  if (options.estimate_eps) estimate = epsilon_hat(design, y, options.invert);
  const RegressionExpansion e = expand_gram(design, order, options.invert);
  if (e.pole_order > 0) {
    throw SingularPerturbation("fit: X_0 X_0^T is singular (pole order " + std::to_string(e.pole_order) +
                               "); use the singular fit");
  }

  FitResult out;
  out.pole_order = 0;
  out.beta_series = beta_series(design, y, order, options.invert);
  out.sse_series = sse_series(design, y, std::max(order, 2), options.invert);
  if (estimate) {
    out.epsilon_hat = estimate;
    out.eps = estimate->value;
  } else {
    out.eps = options.eps.value_or(0.0);
  }
  const double dof = static_cast<double>(design.n() - design.m());

  if (options.eval_order) {
    const int k = *options.eval_order;
    out.beta_at_eps = partial_sum(out.beta_series, out.eps, k);
    out.sse_at_eps = partial_sum(out.sse_series, out.eps, k);
  } else {
    const DirectFit d = direct_fit(design, y, out.eps);
    out.beta_at_eps = d.beta;
    out.sse_at_eps = d.sse;
  }
  out.sigma2_hat = out.sse_at_eps / dof;
  out.stderr_at_eps = standard_errors(design, y, out.eps, options.eval_order, options.invert);
  out.f_threshold = f_quantile(options.alpha, static_cast<double>(design.m()), dof);

  if (options.beta0) {
    out.f_series = f_taylor(out.beta_series, gram_coefficients(e, order), out.sse_series, *options.beta0,
                            dof_ratio(design), order);
    out.f_at_eps = f_statistic(design, y, *options.beta0, out.eps, options.eval_order, options.invert);
    out.beta0_in_confidence_set = *out.f_at_eps <= out.f_threshold;
  }
  return out;
}

}  // namespace perturb
