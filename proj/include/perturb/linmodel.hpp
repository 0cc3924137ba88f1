#pragma once

#include <optional>
#include <vector>

#include "perturb/laurent.hpp"
#include "perturb/numerics.hpp"
#include "perturb/series.hpp"

namespace perturb {

/// Design X(eps) = X_0 + eps X_1 + ... with every component m x n
/// (parameters x observations). The model is Y = X(eps)^T beta + noise.
class PerturbedDesign {
 public:
  explicit PerturbedDesign(std::vector<Matrix> components);

  Eigen::Index m() const { return components_.front().rows(); }
  Eigen::Index n() const { return components_.front().cols(); }
  const std::vector<Matrix>& components() const { return components_; }
  const Matrix& component(std::size_t k) const { return components_[k]; }

  AnalyticMatrixSeries series() const { return AnalyticMatrixSeries(components_); }
  Matrix at(double eps) const { return series().evaluate(eps); }

 private:
  std::vector<Matrix> components_;
};

// Gram series B(eps) = X(eps) X(eps)^T and its Laurent inverse C(eps).
struct RegressionExpansion {
  AnalyticMatrixSeries gram;
  Laurent inverse;
  int pole_order = 0;
};

RegressionExpansion expand_gram(const PerturbedDesign& design, int order, const InvertOptions& options = {});

// beta-hat(eps) coefficients 0..order. Throws SingularPerturbation when the
// Gram series has a pole.
std::vector<Vector> beta_series(const PerturbedDesign& design, const Vector& y, int order,
                                const InvertOptions& options = {});

// P(eps) = I - X^T(eps) B^{-1}(eps) X(eps) as a Maclaurin series P_0..P_order.
// Works for regular and singular designs; throws NumericalBreakdown if the
// negative powers of the product fail to cancel.
std::vector<Matrix> projection_series(const PerturbedDesign& design, int order,
                                      const InvertOptions& options = {});

// SSE(eps) = sum eps^k y^T P_k y.
ScalarSeries sse_series(const PerturbedDesign& design, const Vector& y, int order,
                        const InvertOptions& options = {});

struct EpsilonEstimate {
  // Ratio a / (2b) with a = -sse_1, b = -sse_2: the closed-form estimate as
  // tabulated in the reference analysis of the Gallant data.
  double value = 0.0;
  // -sse_1 / (2 sse_2): the stationary point of the quadratic truncation.
  // Same magnitude as `value`, opposite sign.
  double stationary_point = 0.0;
  double linear_coefficient = 0.0;     // sse_1
  double quadratic_coefficient = 0.0;  // sse_2
};

// Throws DegenerateEpsilon when |sse_2| < 1e-12 * max(1, y^T y).
EpsilonEstimate epsilon_hat(const PerturbedDesign& design, const Vector& y, const InvertOptions& options = {});

// Direct evaluations at a fixed eps. Throw OutsideValidityDisc when the
// Gram matrix condition number exceeds kMaxGramCondition.
inline constexpr double kMaxGramCondition = 1e12;
Vector exact_beta(const PerturbedDesign& design, const Vector& y, double eps);
double exact_sse(const PerturbedDesign& design, const Vector& y, double eps);
Matrix exact_projection(const PerturbedDesign& design, double eps);

// F statistic for H0: beta = beta0 at eps. `order` == nullopt evaluates the
// statistic directly; otherwise its Taylor expansion in eps through `order`
// is summed at eps. Throws NonPositiveSse when SSE(eps) <= 0.
double f_statistic(const PerturbedDesign& design, const Vector& y, const Vector& beta0, double eps,
                   std::optional<int> order, const InvertOptions& options = {});

// Taylor coefficients F_0, F_1, ... of F(eps) through `order`.
ScalarSeries f_series(const PerturbedDesign& design, const Vector& y, const Vector& beta0, int order,
                      const InvertOptions& options = {});

// sqrt(diag(SSE(eps) / (n - m) * C(eps))), both summed through `order`
// (nullopt: direct evaluation).
Vector standard_errors(const PerturbedDesign& design, const Vector& y, double eps, std::optional<int> order,
                       const InvertOptions& options = {});

struct ConfidenceSetEval {
  double alpha = 0.0;
  double threshold = 0.0;  // upper-alpha F quantile with (m, n - m) degrees of freedom
  double f_value = 0.0;
  bool contained = false;
};

/// (1 - alpha) confidence set { beta : F(eps) <= F_{alpha; m, n-m} }.
class ConfidenceSet {
 public:
  ConfidenceSet(const PerturbedDesign& design, const Vector& y, double alpha, double eps,
                std::optional<int> order, const InvertOptions& options = {});

  double alpha() const { return alpha_; }
  double threshold() const { return threshold_; }
  double f_value_at(const Vector& beta) const;
  bool contains(const Vector& beta) const { return f_value_at(beta) <= threshold_; }
  ConfidenceSetEval evaluate(const Vector& beta) const;

 private:
  double alpha_;
  double threshold_;
  double eps_;
  std::optional<int> order_;
  double dof_ratio_;  // (n - m) / m
  // series mode
  std::vector<Vector> beta_;
  std::vector<Matrix> gram_;
  ScalarSeries sse_;
  // direct mode
  Vector beta_exact_;
  Matrix gram_exact_;
  double sse_exact_ = 0.0;
};

ConfidenceSet confidence_set(const PerturbedDesign& design, const Vector& y, double alpha, double eps,
                             std::optional<int> order, const InvertOptions& options = {});

// Limits for a singularly perturbed Gram series (B_0 = X_0 X_0^T singular),
// using the Moore-Penrose inverse as the generalized inverse of B_0.
struct SingularFit {
  int pole_order = 0;
  Matrix b0_ginv;
  Vector beta_tilde;  // B_0^+ X_0 y
  Eigen::Index rank = 0;  // rank(X_0)
  Eigen::Index nu = 0;    // n - rank
  Matrix d0_star;         // I - X_0^T B_0^+ X_0
  double sse_d0_star = 0.0;  // y^T D_0* y
  double sse_limit = 0.0;    // lim_{eps -> 0} SSE(eps) = y^T P_0 y
  // B^{-1}(eps) X(eps) has no pole, so the limit estimate exists.
  bool maclaurin_representation = false;
  std::optional<double> f_tilde;       // (.../m) / (SSE/(n - m))
  std::optional<double> f0_rank_based;  // (.../r) / (y^T D_0* y/(n - r))
  double f_scale = 0.0;  // r (n - m) / (m (n - r))
};

SingularFit fit_singular(const PerturbedDesign& design, const Vector& y,
                         const std::optional<Vector>& beta0 = std::nullopt, const InvertOptions& options = {});

struct FitOptions {
  int order = 2;
  std::optional<double> eps;  // evaluation point; overridden by estimate_eps
  bool estimate_eps = false;
  std::optional<int> eval_order = 1;  // nullopt: direct evaluation at eps
  std::optional<Vector> beta0;
  double alpha = 0.05;
  InvertOptions invert;
};

struct FitResult {
  int pole_order = 0;
  std::vector<Vector> beta_series;
  ScalarSeries sse_series;
  ScalarSeries f_series;  // empty without beta0
  std::optional<EpsilonEstimate> epsilon_hat;
  double eps = 0.0;  // evaluation point actually used
  Vector beta_at_eps;
  double sse_at_eps = 0.0;
  double sigma2_hat = 0.0;  // SSE(eps) / (n - m)
  Vector stderr_at_eps;
  std::optional<double> f_at_eps;
  double f_threshold = 0.0;
  std::optional<bool> beta0_in_confidence_set;
};

// Regular-case fit; throws SingularPerturbation for singular designs.
FitResult fit(const PerturbedDesign& design, const Vector& y, const FitOptions& options = {});

}  // namespace perturb
