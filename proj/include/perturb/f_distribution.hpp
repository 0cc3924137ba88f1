#pragma once

namespace perturb {

// Regularized incomplete beta I_x(a, b) by continued fraction.
double incomplete_beta(double a, double b, double x);

// P(F <= x) for F ~ F(d1, d2).
double f_cdf(double x, double d1, double d2);

// Upper-alpha quantile: P(F > q) = alpha. Bisection on f_cdf.
// Throws DomainError unless 0 < alpha < 1 and d1, d2 >= 1.
double f_quantile(double alpha, double d1, double d2);

}  // namespace perturb
