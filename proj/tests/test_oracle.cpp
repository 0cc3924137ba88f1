#include <gtest/gtest.h>

#include <optional>

#include "perturb/errors.hpp"
#include "perturb/laurent.hpp"
#include "perturb/oracle.hpp"
#include "test_support.hpp"

namespace perturb {
namespace {

using oracle::Polynomial;
using oracle::Rational;
using testing::mat;
using testing::vec;

TEST(Polynomial, ArithmeticAndDivision) {
  const Polynomial p({Rational(1), Rational(2)});
  const Polynomial q({Rational(3), Rational(-1), Rational(1)});
  const Polynomial pq = p * q;
  EXPECT_EQ(pq, Polynomial({Rational(3), Rational(5), Rational(-1), Rational(2)}));
  EXPECT_EQ(pq.exact_div(p), q);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(Polynomial({Rational(0), Rational(0), Rational(4)}).valuation(), 2);
  EXPECT_THROW(q.exact_div(p), MathError);
}

TEST(Polynomial, ReciprocalSeries) {
  // 1 / (1 - e) = 1 + e + e^2 + ...
  const auto r = Polynomial({Rational(1), Rational(-1)}).reciprocal_series(5);
  for (const auto& c : r) EXPECT_EQ(c, Rational(1));
  // 1 / (2 + e) = 1/2 - e/4 + e^2/8
  const auto h = Polynomial({Rational(2), Rational(1)}).reciprocal_series(3);
  EXPECT_EQ(h[0], Rational(1, 2));
  EXPECT_EQ(h[1], Rational(-1, 4));
  EXPECT_EQ(h[2], Rational(1, 8));
}

TEST(Determinant, WorkedExample) {
  // det([[1 - e, 1 + e], [1 - 2e, 1 - e]]) = -e + 3 e^2
  const auto series = oracle::to_rational(
      AnalyticMatrixSeries({mat({{1, 1}, {1, 1}}), mat({{-1, 1}, {-2, -1}})}));
  const Polynomial det = oracle::determinant(oracle::RationalPolyMatrix(series));
  EXPECT_EQ(det, Polynomial({Rational(0), Rational(-1), Rational(3)}));
  EXPECT_EQ(oracle::determinant_valuation(series), 1);
}

TEST(AdjugateLaurent, WorkedExampleIsExact) {
  const auto series = oracle::to_rational(
      AnalyticMatrixSeries({mat({{1, 1}, {1, 1}}), mat({{-1, 1}, {-2, -1}})}));
  const auto inv = oracle::adjugate_laurent(series, 2);
  EXPECT_EQ(inv.pole_order(), 1);
  EXPECT_EQ(inv.coefficient(2)(0, 0), Rational(-18));
  EXPECT_EQ(inv.coefficient(2)(0, 1), Rational(36));
  EXPECT_EQ(inv.coefficient(-1)(1, 0), Rational(1));
}

TEST(AdjugateLaurent, IdenticallySingularAndLimits) {
  const auto zero = oracle::to_rational(AnalyticMatrixSeries({Matrix::Zero(2, 2)}));
  EXPECT_THROW(oracle::adjugate_laurent(zero, 1), IdenticallySingular);
  const auto big = oracle::to_rational(AnalyticMatrixSeries({Matrix::Identity(7, 7)}));
  EXPECT_THROW(oracle::adjugate_laurent(big, 1), InputError);
}

TEST(ToRational, ExactBinaryConversion) {
  const auto r = oracle::to_rational(AnalyticMatrixSeries({mat({{0.1, -3.0}, {0.0, 1e-300}})}));
  EXPECT_EQ(r.coefficient(0)(0, 1), Rational(-3));
  EXPECT_EQ(static_cast<double>(r.coefficient(0)(0, 0)), 0.1);
  EXPECT_EQ(static_cast<double>(r.coefficient(0)(1, 1)), 1e-300);
}

// Random integer series with a rank-deficient leading coefficient, compared
// coefficient by coefficient against exact rational inversion.
TEST(OracleEquivalence, RandomSingularSeries) {
  std::mt19937 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Eigen::Index rank = trial % 2 == 0 ? n - 1 : std::max<Eigen::Index>(1, n - 2);
    const Matrix a0 = testing::random_integer_matrix(rng, n, rank, -2, 2) *
                      testing::random_integer_matrix(rng, rank, n, -2, 2);
    const Matrix a1 = testing::random_integer_matrix(rng, n, n);
    const AnalyticMatrixSeries series({a0, a1});
    const auto exact_series = oracle::to_rational(series);
    std::optional<oracle::RationalLaurent> exact;
    try {
      exact = oracle::adjugate_laurent(exact_series, 3);
    } catch (const IdenticallySingular&) {
      EXPECT_THROW(invert_series(series, 3), NoPoleFound);
      continue;
    }
    const Laurent numeric = invert_series(series, 3);
    const Laurent reference = oracle::to_double(*exact);
    ASSERT_EQ(numeric.pole_order(), reference.pole_order()) << "trial " << trial;
    double scale = 1.0;
    for (int k = -reference.pole_order(); k <= 3; ++k) scale = std::max(scale, max_abs(reference.coefficient(k)));
    for (int k = -reference.pole_order(); k <= 3; ++k) {
      EXPECT_LE(max_abs(numeric.coefficient(k) - reference.coefficient(k)), 1e-8 * scale)
          << "trial " << trial << " power " << k;
    }
    ++compared;
  }
  EXPECT_GE(compared, 30);
}

TEST(PointwiseResidual, DecaysForTruncatedInverse) {
  const AnalyticMatrixSeries series({mat({{1, 1}, {1, 1}}), mat({{-1, 1}, {-2, -1}})});
  const Laurent inv = invert_series(series, 3);
  EXPECT_LT(oracle::pointwise_residual(series, inv, {1e-3, -1e-3, 1e-4}), 1e-8);
  EXPECT_GT(oracle::pointwise_residual(series, inv, {1e-1}), 1e-5);
}

TEST(MinimizeSse, SymmetricDesignHasMinimumAtZero) {
  const PerturbedDesign design({mat({{1, 1, 1, 1}}), mat({{1, -1, 0, 0}})});
  const Vector y = vec({1, 1, 2, 3});
  EXPECT_NEAR(oracle::minimize_sse(design, y, -0.5, 0.5), 0.0, 1e-5);
}

TEST(MinimizeSse, FlatAndBoundaryCases) {
  const PerturbedDesign flat({mat({{1, 1, 1}}), mat({{0, 0, 0}})});
  EXPECT_THROW(oracle::minimize_sse(flat, vec({1, 2, 3}), -1, 1), NoInteriorMinimum);
  // y lies on x0 + eps x1 at eps = 2, outside the bracket
  const PerturbedDesign linear({mat({{1, 1, 1}}), mat({{1, 0, -1}})});
  EXPECT_THROW(oracle::minimize_sse(linear, vec({3, 1, -1}), -0.5, 0.5), NoInteriorMinimum);
  EXPECT_NEAR(oracle::minimize_sse(linear, vec({3, 1, -1}), 0.5, 3.0), 2.0, 1e-5);
}

}  // namespace
}  // namespace perturb
