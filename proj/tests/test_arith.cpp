#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "spherevar/arith.hpp"
#include "spherevar/errors.hpp"

using namespace spherevar;

namespace {

// Independent shell histogram: one pass over the cube [-B, B]^3.
std::map<std::int64_t, std::int64_t> cube_histogram(std::int64_t n_max) {
    const auto b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n_max))) + 1;
    std::map<std::int64_t, std::int64_t> hist;
    for (std::int64_t x = -b; x <= b; ++x)
        for (std::int64_t y = -b; y <= b; ++y)
            for (std::int64_t z = -b; z <= b; ++z) {
                const std::int64_t n = x * x + y * y + z * z;
                if (n >= 1 && n <= n_max) ++hist[n];
            }
    return hist;
}

std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("representation counts match the cube histogram up to 400") {
    const auto hist = cube_histogram(400);
    for (std::int64_t n = 1; n <= 400; ++n) {
        const Shell shell = enumerate_shell(n);
        const auto it = hist.find(n);
        const std::int64_t expected = (it == hist.end()) ? 0 : it->second;
        CHECK(shell.count() == expected);
        CHECK(static_cast<std::int64_t>(shell.points.size()) == expected);
        for (const auto& p : shell.points)
            CHECK(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] == n);
    }
}

TEST_CASE("frozen representation counts") {
    const std::pair<std::int64_t, std::int64_t> table[] = {
        {1, 6},  {2, 12}, {3, 8},  {4, 6},  {5, 24},  {6, 24},
        {7, 0},  {8, 12}, {9, 30}, {10, 24}, {16, 6}, {25, 30},
    };
    for (const auto& [n, count] : table) CHECK(enumerate_shell(n).count() == count);
}

TEST_CASE("shells vanish exactly on the excluded residue classes") {
    for (std::int64_t k = 0; k <= 60; ++k) {
        CHECK(enumerate_shell(8 * k + 7).count() == 0);
        CHECK_FALSE(Shell{8 * k + 7, {}}.eligible());
    }
    // 4^a (8k + 7) is excluded for every a.
    for (std::int64_t base : {7, 15, 23, 31}) {
        for (std::int64_t scale : {4, 16, 64}) {
            CHECK(enumerate_shell(base * scale).count() == 0);
        }
    }
    CHECK(Shell{1, {}}.eligible());
    CHECK(Shell{2, {}}.eligible());
    CHECK_FALSE(Shell{28, {}}.eligible());
    CHECK_FALSE(Shell{112, {}}.eligible());
}

TEST_CASE("enumerate_shell edge inputs") {
    CHECK(enumerate_shell(0).count() == 1);  // the origin
    CHECK_THROWS_AS(enumerate_shell(-5), std::domain_error);
    CHECK_THROWS_AS(enumerate_shell(kShellCeiling + 1), capacity_error);
}

TEST_CASE("residue_class_member matches its definition") {
    for (std::int64_t n = 1; n <= 64; ++n) {
        const std::int64_t r = n % 8;
        CHECK(residue_class_member(n) == (r != 0 && r != 4 && r != 7));
        CHECK(residue_class_member(n) == Shell{n, {}}.eligible());
    }
    // Membership guarantees a nonempty shell.
    for (std::int64_t n = 1; n <= 300; ++n)
        if (residue_class_member(n)) CHECK(enumerate_shell(n).count() > 0);
}

TEST_CASE("isqrt64 is exact at square boundaries") {
    for (std::int64_t k : {1LL, 2LL, 3LL, 1000LL, 65535LL, 65536LL, 1LL << 31}) {
        const std::int64_t sq = k * k;
        CHECK(isqrt64(sq) == k);
        CHECK(isqrt64(sq - 1) == k - 1);
        CHECK(isqrt64(sq + 1) == k);
    }
    CHECK(isqrt64(0) == 0);
}

TEST_CASE("jacobi symbol frozen values and periodicity") {
    CHECK(jacobi_symbol(1, 1) == 1);
    CHECK(jacobi_symbol(5, 1) == 1);
    CHECK(jacobi_symbol(2, 15) == 1);
    CHECK(jacobi_symbol(7, 15) == -1);
    CHECK(jacobi_symbol(5, 3) == -1);
    CHECK(jacobi_symbol(3, 9) == 0);
    for (std::int64_t d = 1; d <= 99; d += 2)
        for (std::int64_t a = 0; a < 30; ++a)
            CHECK(jacobi_symbol(a, d) == jacobi_symbol(a + d, d));
}

TEST_CASE("jacobi symbol is multiplicative in both arguments") {
    std::uint64_t state = 12345;
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = static_cast<std::int64_t>(splitmix(state) % 400);
        const auto b = static_cast<std::int64_t>(splitmix(state) % 400);
        const auto d1 = static_cast<std::int64_t>(2 * (splitmix(state) % 200) + 1);
        const auto d2 = static_cast<std::int64_t>(2 * (splitmix(state) % 200) + 1);
        CHECK(jacobi_symbol(a * b, d1) == jacobi_symbol(a, d1) * jacobi_symbol(b, d1));
        CHECK(jacobi_symbol(a, d1 * d2) == jacobi_symbol(a, d1) * jacobi_symbol(a, d2));
    }
}

TEST_CASE("modular inverse") {
    CHECK(mod_inverse(3, 4) == 3);
    CHECK(mod_inverse(5, 12) == 5);
    CHECK(mod_inverse(1, 8) == 1);
    for (std::int64_t c : {4, 8, 12, 20, 28, 36, 100}) {
        for (std::int64_t d = 1; d < c; d += 2) {
            if (std::gcd(d, c) != 1) continue;
            const std::int64_t inv = mod_inverse(d, c);
            CHECK(inv >= 0);
            CHECK(inv < c);
            CHECK((d * inv) % c == 1);
        }
    }
    CHECK_THROWS_AS(mod_inverse(2, 4), std::domain_error);
    CHECK_THROWS_AS(mod_inverse(0, 4), std::domain_error);
    CHECK_THROWS_AS(mod_inverse(3, 12), std::domain_error);
}

TEST_CASE("divisor count") {
    CHECK(divisor_count(1) == 1);
    CHECK(divisor_count(2) == 2);
    CHECK(divisor_count(12) == 6);
    CHECK(divisor_count(360) == 24);
    CHECK(divisor_count(97) == 2);
    CHECK_THROWS_AS(divisor_count(0), std::domain_error);
}

TEST_CASE("half-integer gamma") {
    const double sqrt_pi = std::sqrt(M_PI);
    CHECK(gamma_half(0.5) == doctest::Approx(sqrt_pi).epsilon(1e-15));
    CHECK(gamma_half(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_half(2.5) == doctest::Approx(0.75 * sqrt_pi).epsilon(1e-15));
    CHECK(gamma_half(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    // Gamma(6.5) = 5.5 * 4.5 * 3.5 * 2.5 * 1.5 * 0.5 * sqrt(pi)
    CHECK(gamma_half(6.5) == doctest::Approx(162.421875 * sqrt_pi).epsilon(1e-14));
    for (double t : {0.5, 1.5, 3.0, 7.5, 12.0})
        CHECK(std::exp(log_gamma_half(t)) == doctest::Approx(gamma_half(t)).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_half(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_half(-0.5), std::domain_error);
    CHECK_THROWS_AS(gamma_half(0.3), std::domain_error);
}
