#pragma once

#include <complex>
#include <cstdint>

#include "spherevar/modular.hpp"

namespace spherevar {

// eps_d = 1 for d = 1 (mod 4), i for d = 3 (mod 4); even d is a domain error.
std::complex<double> epsilon_d(std::int64_t d);

// K(a, b; c) = sum over units d mod c of eps_d^{-two_k} (c/d) e((a dbar + b d)/c),
// with d canonicalized to its least positive residue and the extended
// quadratic symbol (c/d). Requires c a positive multiple of 4 and two_k odd
// and positive. Inverses come from the extended Euclid.
std::complex<double> kloosterman_sum(std::int64_t a, std::int64_t b, std::int64_t c, int two_k);

// Independent implementation: the inverse of each unit is found by scanning,
// and the terms are accumulated in reverse order. Exists purely as a
// cross-check oracle for kloosterman_sum.
std::complex<double> kloosterman_sum_scan(std::int64_t a, std::int64_t b, std::int64_t c,
                                          int two_k);

// Weil-type bound (n,c)^(1/2) c^(1/2) tau(c).
double kloosterman_bound(std::int64_t n, std::int64_t c);

// bound - |K(n, n; c)|; non-negative when the conventions are right, which
// is exactly what the sweep tests assert.
double kloosterman_bound_margin(std::int64_t n, std::int64_t c, int two_k);

// J_nu for half-integer nu >= 1/2, x > 0. Input validation plus delegation to
// std::cyl_bessel_j; the closed forms for nu = 1/2, 3/2 and the three-term
// recurrence serve as test oracles.
double bessel_half_integer(double order, double x);

struct PeterssonCheck {
    double lhs = 0.0;     // a(n)^2 / ||theta||^2, the single-element minorant
    double rhs = 0.0;     // (4 pi n)^(k-1)/Gamma(k-1) times the truncated bracket
    double margin = 0.0;  // rhs + tail - lhs, expected >= 0
    double tail = 0.0;    // rigorous bound on the dropped c > c_max part
};

// Bessel-inequality form of the Petersson bound for one normalized theta
// element: lhs <= rhs + tail must hold. The bracket is
// 1 + 2 pi sum_{c = 4, 8, ...} c^{-1} J_{k-1}(4 pi n / c) Re[i^{-k} K+(n,n;c)]
// with i^{-k} = e^{-i pi k / 2} and K+ the Kloosterman sum taken with the
// conjugate multiplier power eps_d^{+two_k}. That sign is pinned
// operationally: with it the display is term-by-term real and reproduces
// |a(n)|^2/||theta||^2 exactly (to machine precision) whenever the ambient
// cusp space is one-dimensional, e.g. all of weight 11/2; with the
// published sign every term is purely imaginary. Zero norm is a domain error.
PeterssonCheck petersson_bound_check(const ThetaFamily& family, int j, std::int64_t n,
                                     std::int64_t c_max);

}  // namespace spherevar
