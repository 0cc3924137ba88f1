#pragma once

#include <vector>

#include "perturb/numerics.hpp"
#include "perturb/series.hpp"

namespace perturb {

using AnalyticMatrixSeries = MatrixSeries<double>;
using Laurent = LaurentSeries<double>;

// Block lower-triangular stacking of A_0..A_t and the first block row of
// its Moore-Penrose inverse.
struct AugmentedSystem {
  int t = 0;
  Eigen::Index n = 0;
  Matrix block;                      // (t+1)n x (t+1)n
  std::vector<Matrix> top_row_blocks;  // G_00 .. G_0t, filled by augmented_top_row()
};

struct InvertOptions {
  int max_t = -1;          // pole search cap; < 0 means 2n
  double rank_tol = 0.0;   // numeric_rank tolerance; 0 means default
  double tight_tol = 1e-9; // leading coefficient treated as zero below this (relative)
};

// A_0 on the diagonal, A_j on the j-th block subdiagonal.
AugmentedSystem build_augmented(const AnalyticMatrixSeries& series, int t);

// Fill top_row_blocks from pinv(block).
void augmented_top_row(AugmentedSystem& system, double rank_tol = 0.0);

// Smallest t with rank(A^(t)) = rank(A^(t-1)) + n; 0 when A_0 is
// nonsingular. Throws NoPoleFound past max_t.
int pole_order(const AnalyticMatrixSeries& series, int max_t = -1, double rank_tol = 0.0);

// Laurent expansion of A(eps)^{-1} through eps^order:
// coefficients Y_{-s}, ..., Y_order.
Laurent invert_series(const AnalyticMatrixSeries& series, int order, const InvertOptions& options = {});

}  // namespace perturb
