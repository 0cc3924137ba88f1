#pragma once

#include <array>

#include "perturb/linmodel.hpp"
#include "perturb/numerics.hpp"

namespace perturb::cli {

// Treatment-control data: columns x0, x1, x2, x3, Y0, Y1, Y2, Y3.
inline constexpr int kGallantRows = 30;
const Matrix& gallant_table();

// X0 = (x0, x1, x2)^T, X1 = (x3, 0, 0)^T, X2 = (x3^2 / 2, 0, 0)^T from the
// expansion of exp(eps x3).
PerturbedDesign gallant_design();
Vector gallant_response(int data_set);  // 0..3

// Published values for the four data sets.
struct GallantReference {
  std::array<double, 4> epsilon_hat;
  std::array<std::array<double, 3>, 4> coef_at_eps_hat;
  std::array<std::array<double, 3>, 4> se_at_eps_hat;
  std::array<double, 4> f_at_eps_hat;
  std::array<std::array<double, 3>, 4> coef_at_zero;
  std::array<std::array<double, 3>, 4> se_at_zero;
  std::array<double, 4> f_at_zero;
  Matrix b0, c0, b1, c1, b2, c2;
};
const GallantReference& gallant_reference();

}  // namespace perturb::cli
