#pragma once

namespace catml {

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
//
// For x < a + 1 the power series
//     P(a, x) = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n))
// converges quickly and Q = 1 - P. Otherwise Q is evaluated directly from
// the Legendre continued fraction
//     Q(a, x) = x^a e^-x / Gamma(a) * 1/(x+1-a- 1*(1-a)/(x+3-a- 2*(2-a)/(x+5-a- ...)))
// with the modified Lentz algorithm. Both stop at relative change below
// 1e-16, giving absolute error well under 1e-12 for the chi-square range
// used here. Requires a > 0 and x >= 0.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

}  // namespace catml
