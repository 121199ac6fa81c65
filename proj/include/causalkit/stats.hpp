#pragma once

namespace causalkit {

// Standard normal CDF, computed from std::erfc. Accurate to better than
// 1e-14 over the range used by the Fisher-z test.
double normal_cdf(double z);

// Two-sided tail probability 2*(1 - Phi(|z|)).
double normal_two_sided_p(double z);

// Regularized lower incomplete gamma P(a, x), via the series expansion for
// x < a + 1 and the Lentz continued fraction otherwise. Absolute error is
// below 1e-12 for the degrees of freedom that arise here.
double gamma_p(double a, double x);

// Upper tail Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// Chi-square survival function with df degrees of freedom.
double chi_square_sf(double x, double df);

}  // namespace causalkit
