#include "perturb/laurent.hpp"

#include <algorithm>
#include <string>

#include "perturb/errors.hpp"

namespace perturb {

AugmentedSystem build_augmented(const AnalyticMatrixSeries& series, int t) {
  if (!series.is_square()) throw DimensionError("build_augmented: series is not square");
  if (t < 0) throw InputError("build_augmented: t must be non-negative");
  const Eigen::Index n = series.rows();
  AugmentedSystem out;
  out.t = t;
  out.n = n;
  out.block = Matrix::Zero((t + 1) * n, (t + 1) * n);
  for (int row = 0; row <= t; ++row) {
    for (int col = 0; col <= row; ++col) {
      const int k = row - col;
      if (k > series.truncation_order()) continue;
      out.block.block(row * n, col * n, n, n) = series.coefficient(k);
    }
  }
  return out;
}

void augmented_top_row(AugmentedSystem& system, double rank_tol) {
  const Matrix g = pinv(system.block, rank_tol);
  const Eigen::Index n = system.n;
  system.top_row_blocks.clear();
  for (int j = 0; j <= system.t; ++j) {
    system.top_row_blocks.push_back(g.block(0, j * n, n, n));
  }
}

int pole_order(const AnalyticMatrixSeries& series, int max_t, double rank_tol) {
  if (!series.is_square()) throw DimensionError("pole_order: series is not square");
  const Eigen::Index n = series.rows();
  if (max_t < 0) max_t = static_cast<int>(2 * n);
  if (max_t < 1) throw InputError("pole_order: max_t must be at least 1");

  Eigen::Index previous = numeric_rank(build_augmented(series, 0).block, rank_tol);
  if (previous == n) return 0;
  for (int t = 1; t <= max_t; ++t) {
    const Eigen::Index rank = numeric_rank(build_augmented(series, t).block, rank_tol);
    if (rank == previous + n) return t;
    previous = rank;
  }
  throw NoPoleFound("pole_order: no pole of order <= " + std::to_string(max_t) +
                    "; A(eps) may be identically singular");
}

Laurent invert_series(const AnalyticMatrixSeries& series, int order, const InvertOptions& options) {
  if (!series.is_square()) throw DimensionError("invert_series: series is not square");
  if (order < 0) throw InputError("invert_series: order must be non-negative");
  const Eigen::Index n = series.rows();
  const int s = pole_order(series, options.max_t, options.rank_tol);

  AugmentedSystem system = build_augmented(series, s);
  augmented_top_row(system, options.rank_tol);
  const auto& g = system.top_row_blocks;

  // X_k = Y_{k-s};  X_0 = G_0s and
  // X_k = sum_j G_0j (delta_{j+k,s} I - sum_{i=1}^k A_{i+j} X_{k-i}).
  const int last = s + order;
  std::vector<Matrix> x;
  x.reserve(static_cast<std::size_t>(last + 1));
  x.push_back(g[static_cast<std::size_t>(s)]);
  for (int k = 1; k <= last; ++k) {
    Matrix xk = Matrix::Zero(n, n);
    for (int j = 0; j <= s; ++j) {
      Matrix rhs = Matrix::Zero(n, n);
      if (j + k == s) rhs.diagonal().setOnes();
      for (int i = 1; i <= k; ++i) {
        if (i + j > series.truncation_order()) break;
        rhs -= series.coefficient(i + j) * x[static_cast<std::size_t>(k - i)];
      }
      xk += g[static_cast<std::size_t>(j)] * rhs;
    }
    x.push_back(std::move(xk));
  }

  Laurent result(s, std::move(x), order);
  if (s == 0) return result;

  // The rank test can overshoot on nearly singular input; a vanishing
  // leading coefficient means the true pole is lower.
  double scale = 0.0;
  for (const auto& c : result.coefficients()) scale = std::max(scale, max_abs(c));
  return result.without_vanishing_poles(options.tight_tol * std::max(1.0, scale));
}

}  // namespace perturb
