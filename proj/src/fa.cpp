#include "perturb/fa.hpp"

#include <string>

#include "perturb/errors.hpp"

namespace perturb {

FaModel::FaModel(Matrix loadings, Vector residual_variances, std::vector<Matrix> phi)
    : loadings_(std::move(loadings)), psi_(std::move(residual_variances)), phi_(std::move(phi)) {
  if (loadings_.rows() < 1 || loadings_.cols() < 1) throw InputError("FaModel: empty loadings");
  if (!loadings_.allFinite() || !psi_.allFinite()) throw InputError("FaModel: non-finite parameters");
  if (psi_.size() != loadings_.rows()) {
    throw DimensionError("FaModel: " + std::to_string(psi_.size()) + " residual variances for " +
                         std::to_string(loadings_.rows()) + " manifest variables");
  }
  if ((psi_.array() <= 0.0).any()) {
    throw NotPositiveDefinite("FaModel: residual variances must be positive");
  }
  for (const auto& f : phi_) {
    if (f.rows() != loadings_.cols() || f.cols() != loadings_.cols()) {
      throw DimensionError("FaModel: Phi coefficients must be k x k");
    }
    if (!f.allFinite()) throw InputError("FaModel: non-finite Phi coefficient");
    if (max_abs(f - f.transpose()) > 1e-10 * std::max(1.0, max_abs(f))) {
      throw AsymmetricMatrix("FaModel: Phi coefficients must be symmetric");
    }
  }
}

CovarianceSeries sigma_series(const FaModel& model, int order) {
  if (order < 0) throw InputError("sigma_series: order must be non-negative");
  const Matrix& g = model.loadings();
  CovarianceSeries out;
  Matrix s0 = g * g.transpose();
  s0.diagonal() += model.residual_variances();
  out.coefficients.push_back(std::move(s0));
  for (int j = 1; j <= order; ++j) {
    if (j <= static_cast<int>(model.phi().size())) {
      out.coefficients.push_back(g * model.phi()[static_cast<std::size_t>(j - 1)] * g.transpose());
    } else {
      out.coefficients.push_back(Matrix::Zero(model.p(), model.p()));
    }
  }
  return out;
}

AnalyticMatrixSeries sigma_polynomial(const FaModel& model, int order) {
  return AnalyticMatrixSeries(sigma_series(model, order).coefficients);
}

Laurent sigma_inverse_series(const FaModel& model, int order) {
  const AnalyticMatrixSeries sigma = sigma_polynomial(model, order);
  // Positive definiteness of Sigma_0 follows from psi > 0; assert it.
  solve_spd(sigma.coefficient(0), Matrix::Identity(model.p(), model.p()));
  Laurent inv = invert_series(sigma, order);
  if (inv.pole_order() != 0) throw MathError("sigma_inverse_series: Sigma_0 unexpectedly singular");
  return inv;
}

ScalarSeries logdet_series(const FaModel& model, int order) {
  if (order < 0) throw InputError("logdet_series: order must be non-negative");
  const AnalyticMatrixSeries sigma = sigma_polynomial(model, order);
  ScalarSeries c{logdet_spd(sigma.coefficient(0))};
  if (order == 0) return c;
  const Laurent inv = sigma_inverse_series(model, order - 1);
  // d/deps ln det Sigma = tr(Sigma^{-1} Sigma'); integrate termwise.
  for (int j = 0; j < order; ++j) {
    double t = 0.0;
    for (int i = 0; i <= j; ++i) {
      const int d = j - i + 1;
      t += static_cast<double>(d) * (inv.coefficient(i) * sigma.coefficient(d)).trace();
    }
    c.push_back(t / static_cast<double>(j + 1));
  }
  return c;
}

ScalarSeries loglik_terms(const FaModel& model, const Matrix& sample_cov, int order) {
  if (sample_cov.rows() != model.p() || sample_cov.cols() != model.p()) {
    throw DimensionError("loglik_terms: sample covariance must be p x p");
  }
  require_finite(sample_cov, "loglik_terms");
  if (max_abs(sample_cov - sample_cov.transpose()) > 1e-10 * std::max(1.0, max_abs(sample_cov))) {
    throw AsymmetricMatrix("loglik_terms: sample covariance is not symmetric");
  }
  if (sym_eigen(sample_cov).values.minCoeff() < -1e-10 * std::max(1.0, max_abs(sample_cov))) {
    throw DomainError("loglik_terms: sample covariance is not positive semidefinite");
  }
  const ScalarSeries logdet = logdet_series(model, order);
  const Laurent inv = sigma_inverse_series(model, order);
  ScalarSeries out;
  for (int k = 0; k <= order; ++k) {
    out.push_back(-(logdet[static_cast<std::size_t>(k)] + (sample_cov * inv.coefficient(k)).trace()));
  }
  return out;
}

}  // namespace perturb
