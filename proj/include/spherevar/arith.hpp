#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace spherevar {

// Largest n accepted by enumerate_shell.
inline constexpr std::int64_t kShellCeiling = 100'000'000;

// All integer points on x^2 + y^2 + z^2 = n, in lexicographic order.
struct Shell {
    std::int64_t n = 0;
    std::vector<std::array<std::int64_t, 3>> points;

    std::int64_t count() const { return static_cast<std::int64_t>(points.size()); }
    bool eligible() const;  // n mod 8 not in {0, 4, 7}
};

// True iff n >= 1 and n mod 8 is none of 0, 4, 7 (the classes on which
// sphere counts can vanish or degenerate; members always have points).
bool residue_class_member(std::int64_t n);

// Floor of sqrt(n) for n >= 0.
std::int64_t isqrt64(std::int64_t n);

// Enumerates the shell of squared radius n. Throws std::domain_error for
// n < 0, capacity_error for n > kShellCeiling.
Shell enumerate_shell(std::int64_t n);

// Number of positive divisors of n >= 1.
std::int64_t divisor_count(std::int64_t n);

// Jacobi symbol (a/d) for odd positive d, with the usual extension to any
// integer a (reduction mod d; 0 when gcd(a,d) > 1).
int jacobi_symbol(std::int64_t a, std::int64_t d);

// Least positive inverse of d modulo c >= 1. Throws std::domain_error when
// gcd(d, c) != 1.
std::int64_t mod_inverse(std::int64_t d, std::int64_t c);

// Gamma(t) for t > 0 with 2t integral: factorial for integer t, the
// double-factorial form times sqrt(pi) for half-integer t.
double gamma_half(double t);

// log Gamma(t) under the same domain restriction, safe for large t.
double log_gamma_half(double t);

}  // namespace spherevar
