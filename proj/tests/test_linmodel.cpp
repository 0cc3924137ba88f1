#include <gtest/gtest.h>

#include <cmath>

#include "cli/gallant_fixture.hpp"
#include "perturb/errors.hpp"
#include "perturb/f_distribution.hpp"
#include "perturb/linmodel.hpp"
#include "perturb/oracle.hpp"
#include "test_support.hpp"

namespace perturb {
namespace {

using testing::mat;
using testing::vec;

PerturbedDesign two_sensor_design() {
  return PerturbedDesign({mat({{2, 2, 1, 1}, {0, 0, 0, 0}}), mat({{0, 0, 0, 0}, {1, 1, 1, 1}})});
}

Matrix two_sensor_projection() {
  const Matrix xt = mat({{2, 2, 1, 1}, {1, 1, 1, 1}});
  return Matrix::Identity(4, 4) - xt.transpose() * (xt * xt.transpose()).inverse() * xt;
}

PerturbedDesign random_design(std::mt19937& rng, Eigen::Index m, Eigen::Index n, int terms) {
  std::vector<Matrix> comps{testing::random_matrix(rng, m, n)};
  for (int k = 1; k < terms; ++k) comps.push_back(0.5 * testing::random_matrix(rng, m, n));
  return PerturbedDesign(comps);
}

double vector_error(const std::vector<Vector>& series, double eps, const Vector& truth) {
  Vector sum = Vector::Zero(truth.size());
  double p = 1.0;
  for (const auto& c : series) {
    sum += p * c;
    p *= eps;
  }
  return (sum - truth).cwiseAbs().maxCoeff();
}

TEST(PerturbedDesign, Validation) {
  EXPECT_THROW(PerturbedDesign({}), InputError);
  EXPECT_THROW(PerturbedDesign({Matrix::Zero(3, 3)}), DimensionError);
  EXPECT_THROW(PerturbedDesign({Matrix::Zero(2, 4), Matrix::Zero(2, 5)}), DimensionError);
  const PerturbedDesign d = two_sensor_design();
  EXPECT_EQ(d.m(), 2);
  EXPECT_EQ(d.n(), 4);
  EXPECT_THROW(sse_series(d, vec({1, 2, 3}), 1), DimensionError);
}

TEST(ExpandGram, ZeroPerturbation) {
  std::mt19937 rng(1);
  const Matrix x0 = testing::random_matrix(rng, 2, 6);
  const RegressionExpansion e = expand_gram(PerturbedDesign({x0, Matrix::Zero(2, 6)}), 3);
  EXPECT_EQ(e.pole_order, 0);
  EXPECT_MAT_NEAR(e.gram.coefficient(0), x0 * x0.transpose(), 1e-14);
  for (int k = 1; k <= 3; ++k) EXPECT_MAT_NEAR(e.gram.coefficient(k), Matrix::Zero(2, 2), 0.0);
}

TEST(ExpandGram, CoefficientsSymmetricAndConsistent) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const PerturbedDesign d = random_design(rng, 3, 9, 3);
    const RegressionExpansion e = expand_gram(d, 3);
    for (int k = 0; k <= 3; ++k) {
      Matrix direct = Matrix::Zero(3, 3);
      for (int i = 0; i <= k; ++i) {
        if (i < 3 && k - i < 3) direct += d.component(i) * d.component(k - i).transpose();
      }
      EXPECT_MAT_NEAR(e.gram.coefficient(k), direct, 1e-12);
      EXPECT_LT(max_abs(e.inverse.coefficient(k) - e.inverse.coefficient(k).transpose()), 1e-10);
    }
    EXPECT_MAT_NEAR(e.inverse.coefficient(0) * e.gram.coefficient(0), Matrix::Identity(3, 3), 1e-8);
  }
}

TEST(ExpandGram, GallantFirstOrderGram) {
  // B_1 entries are sums of x3 over the table and exact in the printed data.
  const RegressionExpansion e = expand_gram(cli::gallant_design(), 2);
  const Matrix b1 = e.gram.coefficient(1);
  EXPECT_NEAR(b1(0, 0), 294.62, 1e-9);
  EXPECT_NEAR(b1(0, 1), 74.55, 1e-9);
  EXPECT_NEAR(b1(1, 1), 0.0, 0.0);
  EXPECT_NEAR(e.gram.coefficient(0)(0, 1), 15.0, 0.0);
  EXPECT_EQ(e.pole_order, 0);
}

TEST(BetaSeries, ZeroPerturbationAndLeadingTerm) {
  std::mt19937 rng(3);
  const Matrix x0 = testing::random_matrix(rng, 3, 8);
  const Vector y = testing::random_matrix(rng, 8, 1);
  const auto series = beta_series(PerturbedDesign({x0, Matrix::Zero(3, 8)}), y, 2);
  const Vector ols = (x0 * x0.transpose()).ldlt().solve(x0 * y);
  EXPECT_MAT_NEAR(series[0], ols, 1e-12);
  EXPECT_MAT_NEAR(series[1], Vector::Zero(3), 1e-12);
  EXPECT_MAT_NEAR(series[2], Vector::Zero(3), 1e-12);
}

TEST(BetaSeries, FirstOrderTermMatchesClosedForm) {
  std::mt19937 rng(4);
  const PerturbedDesign d = random_design(rng, 2, 7, 2);
  const Vector y = testing::random_matrix(rng, 7, 1);
  const RegressionExpansion e = expand_gram(d, 1);
  const auto series = beta_series(d, y, 1);
  const Matrix c0 = e.inverse.coefficient(0);
  const Matrix c1 = e.inverse.coefficient(1);
  EXPECT_MAT_NEAR(series[1], c1 * d.component(0) * y + c0 * d.component(1) * y, 1e-12);
  EXPECT_MAT_NEAR(series[1], c1 * e.gram.coefficient(0) * series[0] + c0 * d.component(1) * y, 1e-10);
}

TEST(BetaSeries, SingularDesignSignalsSingularPath) {
  EXPECT_THROW(beta_series(two_sensor_design(), vec({1, 2, 3, 4}), 1), SingularPerturbation);
}

TEST(SeriesDecay, BetaSseAndProjection) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const PerturbedDesign d = random_design(rng, 3, 10, 2);
    const Vector y = testing::random_matrix(rng, 10, 1);
    for (int order : {1, 2}) {
      const auto beta = beta_series(d, y, order);
      const auto sse = sse_series(d, y, order);
      const auto proj = projection_series(d, order);
      double prev_beta = 0, prev_sse = 0, prev_proj = 0;
      for (double eps : {1e-2, 1e-3}) {
        const double eb = vector_error(beta, eps, exact_beta(d, y, eps));
        const double es = std::abs(evaluate(sse, eps) - exact_sse(d, y, eps));
        Matrix p = Matrix::Zero(10, 10);
        for (int k = order; k >= 0; --k) p = p * eps + proj[static_cast<std::size_t>(k)];
        const double ep = max_abs(p - exact_projection(d, eps));
        if (eps < 1e-2) {
          const double need = std::pow(10.0, order + 0.5);
          EXPECT_GT(prev_beta / eb, need) << "trial " << trial << " order " << order;
          EXPECT_GT(prev_sse / es, need) << "trial " << trial << " order " << order;
          EXPECT_GT(prev_proj / ep, need) << "trial " << trial << " order " << order;
        }
        prev_beta = eb;
        prev_sse = es;
        prev_proj = ep;
      }
    }
  }
}

TEST(ProjectionSeries, TwoSensorExampleIsConstant) {
  const auto p = projection_series(two_sensor_design(), 3);
  EXPECT_MAT_NEAR(p[0], two_sensor_projection(), 1e-10);
  for (int k = 1; k <= 3; ++k) EXPECT_MAT_NEAR(p[static_cast<std::size_t>(k)], Matrix::Zero(4, 4), 1e-10);
  for (double eps : {0.1, 1.0}) EXPECT_MAT_NEAR(exact_projection(two_sensor_design(), eps), p[0], 1e-10);
}

TEST(ProjectionSeries, IdempotentSymmetricAtSamples) {
  std::mt19937 rng(6);
  const PerturbedDesign d = random_design(rng, 3, 8, 3);
  const auto p = projection_series(d, 2);
  EXPECT_LT(max_abs(p[0] * p[0] - p[0]), 1e-9);
  for (double eps : {-0.2, 0.0, 0.05, 0.3}) {
    const Matrix pe = exact_projection(d, eps);
    EXPECT_LT(max_abs(pe * pe - pe), 1e-8);
    EXPECT_LT(max_abs(pe - pe.transpose()), 1e-12);
    const Vector y = testing::random_matrix(rng, 8, 1);
    EXPECT_GE(exact_sse(d, y, eps), 0.0);
  }
}

TEST(SseSeries, TwoSensorExampleIsFlat) {
  const Vector y = vec({3, 1, 4, 1});
  const auto sse = sse_series(two_sensor_design(), y, 2);
  EXPECT_NEAR(sse[0], y.dot(two_sensor_projection() * y), 1e-10);
  EXPECT_NEAR(sse[1], 0.0, 1e-10);
  EXPECT_NEAR(sse[2], 0.0, 1e-10);
  EXPECT_THROW(epsilon_hat(two_sensor_design(), y), DegenerateEpsilon);
}

TEST(SseSeries, LeadingTermIsOrdinarySse) {
  const PerturbedDesign d = cli::gallant_design();
  const Vector y = cli::gallant_response(0);
  const Matrix x0 = d.component(0);
  const Vector resid = y - x0.transpose() * (x0 * x0.transpose()).ldlt().solve(x0 * y);
  const auto sse = sse_series(d, y, 2);
  EXPECT_NEAR(sse[0], resid.squaredNorm(), 1e-9);
  EXPECT_GT(sse[2], 0.0);
}

TEST(EpsilonHat, SymmetricDesignIsZero) {
  const PerturbedDesign d({mat({{1, 1, 1, 1}}), mat({{1, -1, 0, 0}})});
  const Vector y = vec({1, 1, 2, 3});
  const EpsilonEstimate e = epsilon_hat(d, y);
  EXPECT_NEAR(e.value, 0.0, 1e-12);
  EXPECT_NEAR(e.linear_coefficient, 0.0, 1e-12);
  EXPECT_NEAR(oracle::minimize_sse(d, y, -0.5, 0.5), 0.0, 1e-5);
}

TEST(EpsilonHat, MatchesFiniteDifferenceQuadratic) {
  // Central differences of the directly evaluated SSE give independent
  // estimates of the first two Taylor coefficients.
  const PerturbedDesign d = cli::gallant_design();
  const auto differences = [&](const Vector& y, double h) {
    const double sp = exact_sse(d, y, h), s0 = exact_sse(d, y, 0.0), sm = exact_sse(d, y, -h);
    return std::pair{(sp - sm) / (2 * h), (sp - 2 * s0 + sm) / (2 * h * h)};
  };
  for (int set = 0; set < 4; ++set) {
    const Vector y = cli::gallant_response(set);
    const auto [a1, b1] = differences(y, 1e-3);
    const auto [a2, b2] = differences(y, 2e-3);
    const double a = (4 * a1 - a2) / 3;
    const double b = (4 * b1 - b2) / 3;
    const EpsilonEstimate e = epsilon_hat(d, y);
    EXPECT_NEAR(e.linear_coefficient, a, 1e-4 * std::abs(a));
    EXPECT_NEAR(e.quadratic_coefficient, b, 1e-4 * std::abs(b));
    EXPECT_NEAR(e.stationary_point, -a / (2 * b), 1e-5);
    EXPECT_DOUBLE_EQ(e.value, -e.stationary_point);
  }
}

TEST(EpsilonHat, GallantPublishedEstimates) {
  const auto& ref = cli::gallant_reference();
  for (int set = 0; set < 4; ++set) {
    EXPECT_NEAR(epsilon_hat(cli::gallant_design(), cli::gallant_response(set)).value,
                ref.epsilon_hat[static_cast<std::size_t>(set)], 5e-4)
        << "data set " << set + 1;
  }
}

TEST(EpsilonHat, GallantQuadraticIsConvexAndExactMinimumSide) {
  // exact SSE minimizers from the golden-section oracle on [-0.3, 0.3]
  const double minimizers[] = {-0.02436, -0.01451, 0.02564, 0.08430};
  const PerturbedDesign d = cli::gallant_design();
  for (int set = 0; set < 4; ++set) {
    const Vector y = cli::gallant_response(set);
    const EpsilonEstimate e = epsilon_hat(d, y);
    EXPECT_GT(e.quadratic_coefficient, 0.0) << "data set " << set + 1;
    const double exact = oracle::minimize_sse(d, y, -0.3, 0.3);
    EXPECT_NEAR(exact, minimizers[set], 1e-4) << "data set " << set + 1;
    EXPECT_GT(exact * e.stationary_point, 0.0) << "data set " << set + 1;
    EXPECT_LT(exact * e.value, 0.0) << "data set " << set + 1;
  }
}

TEST(FStatistic, ZeroAtEstimate) {
  std::mt19937 rng(7);
  const PerturbedDesign d = random_design(rng, 2, 9, 2);
  const Vector y = testing::random_matrix(rng, 9, 1);
  const Vector b0 = beta_series(d, y, 0)[0];
  EXPECT_NEAR(f_statistic(d, y, b0, 0.0, 1), 0.0, 1e-12);
  EXPECT_NEAR(f_statistic(d, y, exact_beta(d, y, 0.1), 0.1, std::nullopt), 0.0, 1e-12);
}

TEST(FStatistic, SeriesApproachesDirect) {
  std::mt19937 rng(9);
  const PerturbedDesign d = random_design(rng, 3, 12, 2);
  const Vector y = testing::random_matrix(rng, 12, 1);
  const Vector b0 = vec({0.2, -0.1, 0.3});
  for (int order : {1, 2}) {
    const double e2 = std::abs(f_statistic(d, y, b0, 1e-2, order) - f_statistic(d, y, b0, 1e-2, std::nullopt));
    const double e3 = std::abs(f_statistic(d, y, b0, 1e-3, order) - f_statistic(d, y, b0, 1e-3, std::nullopt));
    EXPECT_GT(e2 / e3, std::pow(10.0, order + 0.5));
  }
}

TEST(FStatistic, GallantAtZero) {
  const auto& ref = cli::gallant_reference();
  for (int set = 0; set < 4; ++set) {
    EXPECT_NEAR(f_statistic(cli::gallant_design(), cli::gallant_response(set), Vector::Ones(3), 0.0, 1),
                ref.f_at_zero[static_cast<std::size_t>(set)], 5e-3);
  }
}

TEST(FStatistic, ErrorsOutsideValidity) {
  // rows of X(eps) coincide at eps = 1
  const PerturbedDesign d({mat({{1, 0, 1}, {0, 1, 1}}), mat({{0, 0, 0}, {1, -1, 0}})});
  const Vector y = vec({1, 2, 4});
  EXPECT_THROW(exact_beta(d, y, 1.0), OutsideValidityDisc);
  EXPECT_THROW(f_statistic(d, y, vec({0, 0}), 1.0, std::nullopt), OutsideValidityDisc);
  // an exact fit has zero SSE
  const PerturbedDesign exact({mat({{1, 1, 1}, {0, 1, 2}})});
  EXPECT_THROW(f_statistic(exact, vec({1, 2, 3}), vec({0, 0}), 0.0, std::nullopt), NonPositiveSse);
}

TEST(StandardErrors, ExactFitIsZero) {
  const PerturbedDesign exact({mat({{1, 1, 1, 1}, {0, 1, 2, 3}}), mat({{0, 0, 0, 0}, {1, 0, 0, 0}})});
  const Vector y = exact.at(0.0).transpose() * vec({1, 2});
  EXPECT_MAT_NEAR(standard_errors(exact, y, 0.0, 1), Vector::Zero(2), 0.0);
}

TEST(StandardErrors, GallantAtZero) {
  const auto& ref = cli::gallant_reference();
  for (int set = 0; set < 4; ++set) {
    const Vector se = standard_errors(cli::gallant_design(), cli::gallant_response(set), 0.0, 1);
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(se(j), ref.se_at_zero[static_cast<std::size_t>(set)][static_cast<std::size_t>(j)], 5e-3);
    }
  }
}

TEST(StandardErrors, DirectMatchesOlsFormula) {
  std::mt19937 rng(10);
  const PerturbedDesign d = random_design(rng, 2, 10, 2);
  const Vector y = testing::random_matrix(rng, 10, 1);
  const Matrix x = d.at(0.05);
  const Matrix cov = (x * x.transpose()).inverse() * exact_sse(d, y, 0.05) / 8.0;
  const Vector expected = cov.diagonal().cwiseSqrt();
  EXPECT_MAT_NEAR(standard_errors(d, y, 0.05, std::nullopt), expected, 1e-12);
}

TEST(ConfidenceSet, EstimateContainedAndNullRejected) {
  const PerturbedDesign d = cli::gallant_design();
  const Vector y = cli::gallant_response(0);
  const ConfidenceSet set(d, y, 0.05, 0.0, 1);
  EXPECT_NEAR(set.threshold(), f_quantile(0.05, 3, 27), 1e-12);
  EXPECT_TRUE(set.contains(beta_series(d, y, 0)[0]));
  const ConfidenceSetEval eval = set.evaluate(Vector::Ones(3));
  EXPECT_FALSE(eval.contained);
  EXPECT_NEAR(eval.f_value, 48.8080, 5e-3);
}

TEST(ConfidenceSet, BoundaryPoint) {
  const PerturbedDesign d = cli::gallant_design();
  const Vector y = cli::gallant_response(1);
  const ConfidenceSet set(d, y, 0.1, 0.0, std::nullopt);
  const Matrix b0 = expand_gram(d, 0).gram.coefficient(0);
  const SymEigen eig = sym_eigen(b0);
  const Vector v = eig.vectors.col(1);
  const double sse = exact_sse(d, y, 0.0);
  const double t = std::sqrt(set.threshold() * sse * 3.0 / (27.0 * eig.values(1)));
  const Vector beta = exact_beta(d, y, 0.0) + t * v;
  EXPECT_NEAR(set.f_value_at(beta), set.threshold(), 1e-6);
  EXPECT_TRUE(set.contains(exact_beta(d, y, 0.0) + 0.999 * t * v));
  EXPECT_FALSE(set.contains(exact_beta(d, y, 0.0) + 1.001 * t * v));
}

TEST(Unbiasedness, NoiselessResponseRecoversBeta) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const PerturbedDesign d = random_design(rng, 3, 10, 3);
    const Vector beta = vec({1.0, -2.0, 0.5});
    for (double eps : {-0.1, 0.0, 0.03, 0.1}) {
      const Vector y = d.at(eps).transpose() * beta;
      EXPECT_MAT_NEAR(exact_beta(d, y, eps), beta, 1e-8);
    }
  }
}

TEST(FitSingular, DuplicatedRows) {
  std::mt19937 rng(13);
  const Matrix row = testing::random_matrix(rng, 1, 7);
  Matrix x0(2, 7);
  x0 << row, row;
  const PerturbedDesign d({x0, testing::random_matrix(rng, 2, 7)});
  const Vector y = testing::random_matrix(rng, 7, 1);
  const SingularFit s = fit_singular(d, y, vec({0, 0}));
  EXPECT_GE(s.pole_order, 1);
  EXPECT_EQ(s.rank, 1);
  EXPECT_EQ(s.nu, 6);
  EXPECT_LT(max_abs(s.d0_star * s.d0_star - s.d0_star), 1e-9);
  EXPECT_NEAR(s.sse_d0_star, y.dot(s.d0_star * y), 1e-12);
  EXPECT_NEAR(s.f_scale, 1.0 * 5 / (2.0 * 6), 1e-15);
  ASSERT_TRUE(s.f_tilde && s.f0_rank_based);
}

TEST(FitSingular, TwoSensorLimit) {
  const Vector y = vec({3, 1, 4, 1});
  const SingularFit s = fit_singular(two_sensor_design(), y);
  EXPECT_EQ(s.rank, 1);
  EXPECT_NEAR(s.sse_limit, y.dot(two_sensor_projection() * y), 1e-10);
  EXPECT_FALSE(s.f_tilde.has_value());
}

TEST(FitSingular, MinimumNormLeastSquares) {
  std::mt19937 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x0 = testing::random_low_rank(rng, 3, 8, 2);
    const PerturbedDesign d({x0, testing::random_matrix(rng, 3, 8)});
    const Vector y = testing::random_matrix(rng, 8, 1);
    const SingularFit s = fit_singular(d, y);
    const Matrix x0t = x0.transpose();
    const Vector min_norm = x0t.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(y);
    EXPECT_MAT_NEAR(s.beta_tilde, min_norm, 1e-9);
    EXPECT_EQ(s.nu, 6);
  }
}

TEST(FitSingular, RegularDesignRejected) {
  EXPECT_THROW(fit_singular(cli::gallant_design(), cli::gallant_response(0)), InputError);
}

TEST(Fit, GallantEndToEnd) {
  FitOptions options;
  options.estimate_eps = true;
  options.beta0 = Vector::Ones(3);
  const FitResult r = fit(cli::gallant_design(), cli::gallant_response(0), options);
  ASSERT_TRUE(r.epsilon_hat.has_value());
  EXPECT_DOUBLE_EQ(r.eps, r.epsilon_hat->value);
  EXPECT_EQ(r.beta_series.size(), 3u);
  EXPECT_NEAR(r.sigma2_hat, r.sse_at_eps / 27.0, 1e-12);
  ASSERT_TRUE(r.beta0_in_confidence_set.has_value());
  EXPECT_FALSE(*r.beta0_in_confidence_set);
  EXPECT_THROW(fit(two_sensor_design(), vec({1, 2, 3, 4})), SingularPerturbation);
}

TEST(Fit, FixedEpsilonZero) {
  FitOptions options;
  options.eps = 0.0;
  options.beta0 = Vector::Ones(3);
  const FitResult r = fit(cli::gallant_design(), cli::gallant_response(0), options);
  const auto& ref = cli::gallant_reference();
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(r.beta_at_eps(j), ref.coef_at_zero[0][static_cast<std::size_t>(j)], 1e-3);
  ASSERT_TRUE(r.f_at_eps.has_value());
  EXPECT_NEAR(*r.f_at_eps, 48.8080, 5e-3);
}

}  // namespace
}  // namespace perturb
