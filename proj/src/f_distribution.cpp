#include "perturb/f_distribution.hpp"

#include <cmath>
#include <limits>

#include "perturb/errors.hpp"

namespace perturb {

namespace {

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 1000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a, b must be positive");
  if (x < 0.0 || x > 1.0) throw DomainError("incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast for x < (a + 1) / (a + b + 2); use the
  // reflection I_x(a, b) = 1 - I_{1-x}(b, a) on the other side.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw DomainError("f_cdf: degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double u = d1 * x / (d1 * x + d2);
  return incomplete_beta(0.5 * d1, 0.5 * d2, u);
}

double f_quantile(double alpha, double d1, double d2) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("f_quantile: alpha must lie in (0, 1)");
  if (!(d1 >= 1.0) || !(d2 >= 1.0)) throw DomainError("f_quantile: degrees of freedom must be >= 1");
  const double target = 1.0 - alpha;

  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, d1, d2) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw DomainError("f_quantile: failed to bracket quantile");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f_cdf(mid, d1, d2) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace perturb
