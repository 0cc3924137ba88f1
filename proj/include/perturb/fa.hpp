#pragma once

#include <vector>

#include "perturb/laurent.hpp"
#include "perturb/numerics.hpp"
#include "perturb/pca.hpp"
#include "perturb/series.hpp"

namespace perturb {

/// Factor model Sigma(eps) = Gamma Phi(eps) Gamma^T + Psi with
/// Phi(eps) = I_k + eps Phi_1 + eps^2 Phi_2 + ...
class FaModel {
 public:
  // phi holds Phi_1, Phi_2, ...; Phi_0 = I is implied.
  FaModel(Matrix loadings, Vector residual_variances, std::vector<Matrix> phi);

  const Matrix& loadings() const { return loadings_; }
  const Vector& residual_variances() const { return psi_; }
  const std::vector<Matrix>& phi() const { return phi_; }
  Eigen::Index p() const { return loadings_.rows(); }
  Eigen::Index k() const { return loadings_.cols(); }

 private:
  Matrix loadings_;
  Vector psi_;
  std::vector<Matrix> phi_;
};

CovarianceSeries sigma_series(const FaModel& model, int order);

// Sigma(eps) as a polynomial (all stored terms, truncated at `order`).
AnalyticMatrixSeries sigma_polynomial(const FaModel& model, int order);

Laurent sigma_inverse_series(const FaModel& model, int order);

// ln det Sigma(eps) = c_0 + c_1 eps + ... through eps^order.
ScalarSeries logdet_series(const FaModel& model, int order);

// -[ln det Sigma(eps) + tr(S Sigma^{-1}(eps))] through eps^order.
ScalarSeries loglik_terms(const FaModel& model, const Matrix& sample_cov, int order);

}  // namespace perturb
