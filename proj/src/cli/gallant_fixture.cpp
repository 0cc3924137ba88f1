#include "cli/gallant_fixture.hpp"

#include "perturb/errors.hpp"

namespace perturb::cli {

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

const Matrix& gallant_table() {
  static const Matrix table = from_rows({
      {1, 1, 1.3420, 6.28, 6.92, 7.0451, 7.6532, 8.6632},
      {1, 0, 1.5813, 9.86, 4.21, 4.4267, 5.4939, 7.5804},
      {1, 1, 1.1043, 9.11, 4.34, 4.5297, 5.4928, 7.3125},
      {1, 0, 1.6867, 8.43, 3.81, 3.9869, 4.8595, 6.4576},
      {1, 1, 1.5164, 8.11, 3.99, 4.1633, 4.9944, 6.4946},
      {1, 0, 1.5672, 1.82, 3.95, 3.9820, 4.1358, 4.3445},
      {1, 1, 1.9644, 6.58, 6.28, 6.4206, 7.0637, 8.1464},
      {1, 0, 1.5411, 5.02, 5.63, 5.7309, 6.1986, 6.9320},
      {1, 1, 1.0064, 6.52, 4.05, 4.1857, 4.8217, 5.8897},
      {1, 0, 1.8726, 3.75, 5.53, 5.6102, 5.9462, 6.4438},
      {1, 1, 1.0314, 9.86, 5.09, 5.3012, 6.3684, 8.4550},
      {1, 0, 1.9190, 7.31, 6.16, 6.3080, 7.0388, 8.3106},
      {1, 1, 1.6507, 0.47, 5.80, 5.8132, 5.8514, 5.9001},
      {1, 0, 1.7083, 0.07, 4.98, 4.9816, 4.9873, 4.9943},
      {1, 1, 1.1261, 4.07, 4.97, 5.0493, 5.4176, 5.9709},
      {1, 0, 1.1693, 4.61, 5.38, 5.4791, 5.9032, 6.5561},
      {1, 1, 1.8063, 0.17, 7.19, 7.1955, 7.2092, 7.2264},
      {1, 0, 1.7086, 6.99, 5.19, 5.3309, 6.0228, 7.2096},
      {1, 1, 1.4324, 4.39, 6.20, 6.2895, 6.6907, 7.3021},
      {1, 0, 1.5265, 0.39, 5.14, 5.1441, 5.1757, 5.2158},
      {1, 1, 1.7009, 4.73, 4.37, 4.4670, 4.9038, 5.5798},
      {1, 0, 1.5807, 9.42, 3.82, 4.0196, 5.0253, 6.9523},
      {1, 1, 1.5538, 8.90, 5.38, 5.5706, 6.5055, 8.2547},
      {1, 0, 1.4150, 3.02, 3.12, 3.1812, 3.4459, 3.8250},
      {1, 1, 1.8566, 0.77, 5.06, 5.0730, 5.1360, 5.2176},
      {1, 0, 1.5010, 3.31, 4.08, 4.1479, 4.4406, 4.8653},
      {1, 1, 1.1584, 4.51, 5.72, 5.8164, 6.2300, 6.8639},
      {1, 0, 1.3310, 2.65, 3.89, 3.9459, 4.1756, 4.4991},
      {1, 1, 1.4981, 0.08, 6.12, 6.1169, 6.1234, 6.1314},
      {1, 0, 1.0008, 6.11, 2.84, 2.9685, 3.5571, 4.5271}
  });
  return table;
}

PerturbedDesign gallant_design() {
  const Matrix& t = gallant_table();
  Matrix x0 = t.leftCols(3).transpose();
  Matrix x1 = Matrix::Zero(3, kGallantRows);
  Matrix x2 = Matrix::Zero(3, kGallantRows);
  x1.row(0) = t.col(3).transpose();
  x2.row(0) = 0.5 * t.col(3).array().square().matrix().transpose();
  return PerturbedDesign({std::move(x0), std::move(x1), std::move(x2)});
}

Vector gallant_response(int data_set) {
  if (data_set < 0 || data_set > 3) throw InputError("gallant_response: data set must be 0..3");
  return gallant_table().col(4 + data_set);
}

const GallantReference& gallant_reference() {
  static const GallantReference ref = [] {
    GallantReference r;
    r.epsilon_hat = {0.0505, 0.0195, -0.0227, -0.1861};
    r.coef_at_eps_hat = {{{2.0153, 1.0642, 1.6228},
                          {2.2057, 1.0629, 1.5645},
                          {3.0969, 1.0545, 1.2967},
                          {4.6550, 1.0537, 0.8177}}};
    r.se_at_eps_hat = {{{0.9632, 0.3329, 0.6068},
                        {0.9513, 0.3287, 0.5993},
                        {0.9724, 0.3360, 0.6126},
                        {1.3455, 0.4650, 0.8476}}};
    r.f_at_eps_hat = {48.7884, 55.2427, 80.1393, 73.7195};
    r.coef_at_zero = {{{2.0142, 1.0640, 1.6235},
                       {2.2016, 1.0618, 1.5673},
                       {3.0930, 1.0549, 1.2986},
                       {4.6511, 1.0540, 0.8199}}};
    r.se_at_zero = {{{0.9605, 0.3327, 0.6064},
                     {0.9499, 0.3283, 0.5984},
                     {0.9725, 0.3362, 0.6126},
                     {1.3450, 0.4650, 0.8472}}};
    r.f_at_zero = {48.8080, 55.3330, 80.0064, 73.7090};
    r.b0 = from_rows({{30, 15, 44.8534}, {15, 15, 21.7371}, {44.8534, 21.7371, 69.3119}});
    r.c0 = from_rows({{1.1523, -0.1314, -0.7045}, {-0.1314, 0.1372, 0.0420}, {-0.7045, 0.0420, 0.4571}});
    r.b1 = from_rows({{294.62, 74.55, 214.3236}, {74.55, 0, 0}, {214.3236, 0, 0}});
    r.c1 = from_rows({{-20.6598, 1.3236, 9.3912}, {1.3236, -0.0332, -0.4397}, {9.3912, -0.4397, -3.7610}});
    r.b2 = from_rows({{2035.2007, 264.923, 738.250}, {264.923, 0, 0}, {738.250, 0, 0}});
    r.c2 = from_rows({{-164.4712, 32.577, 147.827}, {32.577, -4.3659, -22.4049}, {147.8266, -22.4049, -110.1712}});
    return r;
  }();
  return ref;
}

}  // namespace perturb::cli
