#pragma once

namespace spherevar {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a),
// a > 0, x >= 0. Series expansion for x < a + 1, Lentz continued fraction
// for the upper tail otherwise.
double regularized_gamma_p(double a, double x);

// Lower incomplete gamma gamma(a, x) = P(a, x) * Gamma(a).
double lower_gamma(double a, double x);

// Upper incomplete gamma Gamma(a, x) = (1 - P(a, x)) * Gamma(a).
double upper_gamma(double a, double x);

}  // namespace spherevar
