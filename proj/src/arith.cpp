#include "spherevar/arith.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "spherevar/errors.hpp"

namespace spherevar {

bool residue_class_member(std::int64_t n) {
    if (n < 1) return false;
    const auto r = n % 8;
    return r != 0 && r != 4 && r != 7;
}

bool Shell::eligible() const { return residue_class_member(n); }

std::int64_t isqrt64(std::int64_t n) {
    if (n < 0) throw std::domain_error("isqrt64: negative argument");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

Shell enumerate_shell(std::int64_t n) {
    if (n < 0) throw std::domain_error("enumerate_shell: n must be nonnegative");
    if (n > kShellCeiling) throw capacity_error("enumerate_shell: n exceeds ceiling");

    Shell shell;
    shell.n = n;
    if (n == 0) {
        shell.points.push_back({0, 0, 0});
        return shell;
    }
    const std::int64_t s = isqrt64(n);
    for (std::int64_t x = -s; x <= s; ++x) {
        const std::int64_t rx = n - x * x;
        const std::int64_t sy = isqrt64(rx);
        for (std::int64_t y = -sy; y <= sy; ++y) {
            const std::int64_t rz = rx - y * y;
            const std::int64_t z = isqrt64(rz);
            if (z * z != rz) continue;
            if (z == 0) {
                shell.points.push_back({x, y, 0});
            } else {
                shell.points.push_back({x, y, -z});
                shell.points.push_back({x, y, z});
            }
        }
    }
    return shell;
}

std::int64_t divisor_count(std::int64_t n) {
    if (n < 1) throw std::domain_error("divisor_count: n must be positive");
    std::int64_t count = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) count += (d * d == n) ? 1 : 2;
    }
    return count;
}

int jacobi_symbol(std::int64_t a, std::int64_t d) {
    if (d < 1 || d % 2 == 0)
        throw std::domain_error("jacobi_symbol: d must be odd and positive");
    a %= d;
    if (a < 0) a += d;
    int sign = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            const auto r = d % 8;
            if (r == 3 || r == 5) sign = -sign;
        }
        std::swap(a, d);
        if (a % 4 == 3 && d % 4 == 3) sign = -sign;
        a %= d;
    }
    return d == 1 ? sign : 0;
}

std::int64_t mod_inverse(std::int64_t d, std::int64_t c) {
    if (c < 1) throw std::domain_error("mod_inverse: modulus must be positive");
    // Extended Euclid on (d mod c, c); old_s tracks the Bezout coefficient of d.
    std::int64_t r0 = c, r1 = ((d % c) + c) % c;
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: arguments not coprime");
    return ((s0 % c) + c) % c;
}

double gamma_half(double t) {
    const double two_t = 2.0 * t;
    const auto k = static_cast<std::int64_t>(std::llround(two_t));
    if (t <= 0.0 || k < 1 || std::fabs(two_t - static_cast<double>(k)) > 1e-9)
        throw std::domain_error("gamma_half: t must be a positive half-integer");
    double value = 1.0;
    if (k % 2 == 0) {
        for (std::int64_t i = 2; i < k; i += 2) value *= 0.5 * static_cast<double>(i);
    } else {
        value = std::sqrt(M_PI);
        for (std::int64_t i = 1; i < k; i += 2) value *= 0.5 * static_cast<double>(i);
    }
    return value;
}

double log_gamma_half(double t) {
    const double two_t = 2.0 * t;
    const auto k = static_cast<std::int64_t>(std::llround(two_t));
    if (t <= 0.0 || k < 1 || std::fabs(two_t - static_cast<double>(k)) > 1e-9)
        throw std::domain_error("log_gamma_half: t must be a positive half-integer");
    double value = 0.0;
    if (k % 2 == 0) {
        for (std::int64_t i = 2; i < k; i += 2) value += std::log(0.5 * static_cast<double>(i));
    } else {
        value = 0.5 * std::log(M_PI);
        for (std::int64_t i = 1; i < k; i += 2) value += std::log(0.5 * static_cast<double>(i));
    }
    return value;
}

}  // namespace spherevar
