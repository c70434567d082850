#include "spherevar/kloosterman.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "spherevar/arith.hpp"

namespace spherevar {

namespace {

constexpr double kPi = std::numbers::pi;

void require_modulus(std::int64_t c) {
    if (c <= 0 || c % 4 != 0) {
        throw std::domain_error("Kloosterman modulus must be a positive multiple of 4");
    }
}

void require_odd_weight(int two_k) {
    if (two_k <= 0 || two_k % 2 == 0) {
        throw std::domain_error("two_k must be an odd positive integer");
    }
}

// eps_d^{-two_k}: 1 for d = 1 (mod 4); i^{-two_k} for d = 3 (mod 4), which
// is -i or +i according to two_k mod 4.
std::complex<double> epsilon_power(std::int64_t d, int two_k) {
    if (d % 4 == 1) return {1.0, 0.0};
    return (two_k % 4 == 1) ? std::complex<double>{0.0, -1.0}
                            : std::complex<double>{0.0, 1.0};
}

// eps_d^{+two_k}, the conjugate multiplier power. With this choice the
// Petersson display is term-by-term real; the published-sign variant makes
// every term purely imaginary. Pinned operationally: the display then matches
// |a(n)|^2/(norm^2 front) to machine precision for every n when the cusp
// space is one-dimensional (weight 11/2), and margins stay non-negative.
std::complex<double> epsilon_power_conjugate(std::int64_t d, int two_k) {
    if (d % 4 == 1) return {1.0, 0.0};
    return (two_k % 4 == 1) ? std::complex<double>{0.0, 1.0}
                            : std::complex<double>{0.0, -1.0};
}

std::complex<double> unit_phase(std::int64_t num, std::int64_t c) {
    const double angle = 2.0 * kPi * static_cast<double>(num) / static_cast<double>(c);
    return {std::cos(angle), std::sin(angle)};
}

// (a dbar + b d) mod c without overflow.
std::int64_t phase_numerator(std::int64_t a, std::int64_t dbar, std::int64_t b,
                             std::int64_t d, std::int64_t c) {
    const __int128 raw = static_cast<__int128>(a) * dbar + static_cast<__int128>(b) * d;
    auto reduced = static_cast<std::int64_t>(raw % c);
    if (reduced < 0) reduced += c;
    return reduced;
}

// The sum entering the Petersson display: same structure as kloosterman_sum
// but with the conjugate multiplier power.
std::complex<double> display_kloosterman(std::int64_t a, std::int64_t b, std::int64_t c,
                                         int two_k) {
    std::complex<double> sum{0.0, 0.0};
    for (std::int64_t d = 1; d < c; d += 2) {
        if (std::gcd(d, c) != 1) continue;
        const std::int64_t dbar = mod_inverse(d, c);
        const double symbol = static_cast<double>(jacobi_symbol(c, d));
        sum += epsilon_power_conjugate(d, two_k) * symbol *
               unit_phase(phase_numerator(a, dbar, b, d, c), c);
    }
    return sum;
}

}  // namespace

std::complex<double> epsilon_d(std::int64_t d) {
    if (d % 2 == 0) throw std::domain_error("epsilon_d needs an odd argument");
    const std::int64_t r = ((d % 4) + 4) % 4;
    return r == 1 ? std::complex<double>{1.0, 0.0} : std::complex<double>{0.0, 1.0};
}

std::complex<double> kloosterman_sum(std::int64_t a, std::int64_t b, std::int64_t c,
                                     int two_k) {
    require_modulus(c);
    require_odd_weight(two_k);
    std::complex<double> sum{0.0, 0.0};
    for (std::int64_t d = 1; d < c; d += 2) {
        if (std::gcd(d, c) != 1) continue;
        const std::int64_t dbar = mod_inverse(d, c);
        const double symbol = static_cast<double>(jacobi_symbol(c, d));
        sum += epsilon_power(d, two_k) * symbol *
               unit_phase(phase_numerator(a, dbar, b, d, c), c);
    }
    return sum;
}

std::complex<double> kloosterman_sum_scan(std::int64_t a, std::int64_t b, std::int64_t c,
                                          int two_k) {
    require_modulus(c);
    require_odd_weight(two_k);
    std::complex<double> sum{0.0, 0.0};
    for (std::int64_t d = c - 1; d >= 1; d -= 2) {
        if (std::gcd(d, c) != 1) continue;
        std::int64_t dbar = 0;
        for (std::int64_t e = 1; e < c; ++e) {
            if ((d * e) % c == 1) {
                dbar = e;
                break;
            }
        }
        const double symbol = static_cast<double>(jacobi_symbol(c, d));
        sum += epsilon_power(d, two_k) * symbol *
               unit_phase(phase_numerator(a, dbar, b, d, c), c);
    }
    return sum;
}

double kloosterman_bound(std::int64_t n, std::int64_t c) {
    require_modulus(c);
    const auto g = std::gcd(n < 0 ? -n : n, c);
    return std::sqrt(static_cast<double>(g)) * std::sqrt(static_cast<double>(c)) *
           static_cast<double>(divisor_count(c));
}

double kloosterman_bound_margin(std::int64_t n, std::int64_t c, int two_k) {
    return kloosterman_bound(n, c) - std::abs(kloosterman_sum(n, n, c, two_k));
}

double bessel_half_integer(double order, double x) {
    if (!(x > 0.0)) throw std::domain_error("Bessel argument must be positive");
    const double doubled = 2.0 * order;
    const auto twice = static_cast<std::int64_t>(std::llround(doubled));
    if (std::abs(doubled - static_cast<double>(twice)) > 1e-9 || twice < 1 ||
        twice % 2 == 0) {
        throw std::domain_error("order must be a positive half-integer");
    }
    return std::cyl_bessel_j(order, x);
}

PeterssonCheck petersson_bound_check(const ThetaFamily& family, int j, std::int64_t n,
                                     std::int64_t c_max) {
    if (n < 1) throw std::domain_error("coefficient index must be positive");
    if (c_max < 4) throw std::domain_error("c_max must be at least 4");
    const double norm2 = family.l2_norm_squared(j);
    if (!(norm2 > 0.0)) {
        throw std::domain_error("zero theta norm: no normalized element to test");
    }
    const int m = family.degree();
    const double k = family.weight();
    const int two_k = 2 * m + 3;
    const double a = family.coefficient(j, n);

    PeterssonCheck check;
    check.lhs = a * a / norm2;

    const std::complex<double> i_pow = std::polar(1.0, -0.5 * kPi * k);
    double bracket = 1.0;
    for (std::int64_t c = 4; c <= c_max; c += 4) {
        const double arg = 4.0 * kPi * static_cast<double>(n) / static_cast<double>(c);
        const double bessel = bessel_half_integer(k - 1.0, arg);
        const std::complex<double> kl = display_kloosterman(n, n, c, two_k);
        bracket += 2.0 * kPi / static_cast<double>(c) * bessel * (i_pow * kl).real();
    }
    const double front =
        std::pow(4.0 * kPi * static_cast<double>(n), k - 1.0) / gamma_half(k - 1.0);
    check.rhs = front * bracket;

    // Dropped c > c_max: |J_{k-1}(z)| <= (z/2)^(k-1)/Gamma(k) and
    // |K(n,n;c)| <= tau(c) sqrt(n c) <= 2 sqrt(n) c, so the bracket tail is
    // below 4 pi (2 pi n)^(k-1) sqrt(n) / Gamma(k) * sum c^{-k}, and the sum
    // over multiples of 4 is at most c_max^(1-k) / (4 (k-1)).
    const double nn = static_cast<double>(n);
    const double bracket_tail = kPi * std::pow(2.0 * kPi * nn, k - 1.0) * std::sqrt(nn) *
                                std::pow(static_cast<double>(c_max), 1.0 - k) /
                                (gamma_half(k) * (k - 1.0));
    check.tail = front * bracket_tail;
    check.margin = check.rhs + check.tail - check.lhs;
    return check;
}

}  // namespace spherevar
