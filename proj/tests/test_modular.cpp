#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "spherevar/arith.hpp"
#include "spherevar/errors.hpp"
#include "spherevar/modular.hpp"
#include "spherevar/variance.hpp"

using namespace spherevar;

TEST_CASE("family dimensions, weight, and index guard") {
    const ThetaFamily family(4);
    CHECK(family.degree() == 4);
    CHECK(family.dimension() == 9);
    CHECK(family.weight() == doctest::Approx(5.5).epsilon(1e-15));
    CHECK_THROWS_AS(family.coefficient(9, 1), std::domain_error);
    CHECK_THROWS_AS(family.coefficient(-1, 1), std::domain_error);
    CHECK_THROWS_AS(family.coefficient(0, 0), std::domain_error);
    CHECK_THROWS_AS(ThetaFamily(-1), std::domain_error);
    CHECK_THROWS_AS(ThetaFamily(kBasisDegreeCeiling + 1), capacity_error);
}

TEST_CASE("coefficients are shell sums: a_j(n) = n^{m/2} W_j(n)") {
    const ThetaFamily family(4);
    for (std::int64_t n = 1; n <= 60; ++n) {
        const Shell shell = enumerate_shell(n);
        const WeylSumTable table = weyl_sums(shell, family.basis());
        const double scale = std::pow(static_cast<double>(n), 2.0);
        for (int j = 0; j < family.dimension(); ++j) {
            const double a = family.coefficient(j, n);
            const double via_weyl = scale * table.values[j];
            CHECK(std::fabs(a - via_weyl) <= 1e-10 * std::max({1.0, std::fabs(a)}));
        }
    }
}

TEST_CASE("frozen coefficients of the invariant member") {
    const ThetaFamily family(4);
    CHECK(family.coefficient(0, 1) == doctest::Approx(10.5).epsilon(1e-12));
    CHECK(family.coefficient(0, 2) == doctest::Approx(-21.0).epsilon(1e-12));
    CHECK(family.coefficient(0, 3) == doctest::Approx(-84.0).epsilon(1e-12));
    // Sum of squares over the family at n = 1 equals S(4, 1) = 189.
    double total = 0.0;
    for (int j = 0; j < family.dimension(); ++j) {
        const double a = family.coefficient(j, 1);
        total += a * a;
    }
    CHECK(total == doctest::Approx(189.0).epsilon(1e-12));
}

TEST_CASE("normalized coefficients divide by n^{(k-1)/2}") {
    const ThetaFamily family(4);  // k = 5.5, (k-1)/2 = 2.25
    for (std::int64_t n : {1, 2, 3, 5, 9, 50}) {
        const double a = family.coefficient(0, n);
        const double b = family.normalized_coefficient(0, n);
        CHECK(b == doctest::Approx(a * std::pow(static_cast<double>(n), -2.25)).epsilon(1e-13));
        CHECK(normalized_coefficient(family, 0, n) == b);
        CHECK(theta_coefficient(family, 0, n) == a);
    }
}

TEST_CASE("null certification by degree") {
    // Degree 2: every member is certified null, with exact-zero rows.
    const ThetaFamily two(2);
    for (int j = 0; j < two.dimension(); ++j) {
        CHECK(two.identically_zero(j));
        for (std::int64_t n = 1; n <= 30; ++n) CHECK(two.coefficient(j, n) == 0.0);
        CHECK(two.l2_norm_squared(j) == 0.0);
    }
    // Degree 3: odd, all null.
    const ThetaFamily three(3);
    for (int j = 0; j < three.dimension(); ++j) CHECK(three.identically_zero(j));
    // Degree 4: exactly the two members meeting the lattice invariant survive.
    const ThetaFamily four(4);
    for (int j = 0; j < four.dimension(); ++j) {
        CHECK(four.identically_zero(j) == (j != 0 && j != 4));
    }
    // Null rows are exact zeros even far out.
    CHECK(four.coefficient(1, 1999) == 0.0);
}

TEST_CASE("the two surviving degree-4 series are proportional") {
    // The cusp space at this weight is one-dimensional, so the rows of the
    // two non-null members are scalar multiples of each other.
    const ThetaFamily family(4);
    const double a0 = family.coefficient(0, 1);
    const double a4 = family.coefficient(4, 1);
    REQUIRE(a0 != 0.0);
    REQUIRE(a4 != 0.0);
    for (std::int64_t n = 1; n <= 100; ++n) {
        const double lhs = family.coefficient(0, n) * a4;
        const double rhs = family.coefficient(4, n) * a0;
        CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, std::fabs(lhs)));
    }
}

TEST_CASE("coefficient cache: rows, limits, ceiling") {
    const ThetaFamily family(4);
    family.ensure(80);
    CHECK(family.cached_limit() >= 80);
    const std::vector<double> row = family.coefficient_row(0, 50);
    REQUIRE(row.size() == 50);
    for (std::int64_t n = 1; n <= 50; ++n)
        CHECK(row[static_cast<std::size_t>(n - 1)] == family.coefficient(0, n));
    CHECK_THROWS_AS(family.ensure(20'001), capacity_error);
}

TEST_CASE("q-series truncation honors its envelope") {
    for (double y : {0.05, 0.2, 1.0, 4.0}) {
        const std::int64_t n1 = q_truncation(4, y, 1e-10);
        const std::int64_t n2 = q_truncation(4, y, 1e-6);
        CHECK(n1 >= n2);  // tighter tolerance, deeper cut
        CHECK(n2 >= 1);
    }
    // Deeper strips need longer sums.
    CHECK(q_truncation(4, 0.05, 1e-10) > q_truncation(4, 1.0, 1e-10));
    CHECK_THROWS_AS(q_truncation(4, 1e-6, 1e-12), capacity_error);
}

TEST_CASE("theta evaluation: period, reference sum, domain floor") {
    const ThetaFamily family(4);
    const std::complex<double> z{0.3, 0.9};
    const std::complex<double> v = theta_eval(family, 0, z, 1e-12);
    const std::complex<double> shifted = theta_eval(family, 0, z + 1.0, 1e-12);
    CHECK(std::abs(v - shifted) <= 1e-12 * (1.0 + std::abs(v)));

    // Direct reference at z = 2i: a short explicitly-summed series.
    const std::complex<double> at2i = theta_eval(family, 0, {0.0, 2.0}, 1e-14);
    double reference = 0.0;
    for (std::int64_t n = 1; n <= 12; ++n)
        reference += family.coefficient(0, n) * std::exp(-4.0 * M_PI * static_cast<double>(n));
    CHECK(at2i.real() == doctest::Approx(reference).epsilon(1e-10));
    CHECK(std::fabs(at2i.imag()) < 1e-15);

    CHECK_THROWS_AS(theta_eval(family, 0, {0.0, 0.04}, 1e-10), std::domain_error);
    CHECK_THROWS_AS(theta_eval(family, 0, {0.0, 1.0}, 0.0), std::domain_error);
    // Null series evaluate to exactly zero.
    const std::complex<double> null_value = theta_eval(family, 1, {0.0, 1.0}, 1e-10);
    CHECK(null_value.real() == 0.0);
    CHECK(null_value.imag() == 0.0);
}

TEST_CASE("coset representatives: determinants, distinctness, action") {
    const auto reps = coset_reps();
    for (const CosetRep& g : reps) {
        CHECK(g.mat[0][0] * g.mat[1][1] - g.mat[0][1] * g.mat[1][0] == 1);
    }
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = 0; j < reps.size(); ++j)
            CHECK(same_coset(reps[i], reps[j]) == (i == j));
    // Moebius action spot check.
    for (const CosetRep& g : reps) {
        const std::complex<double> z{0.3, 1.1};
        const std::complex<double> a{static_cast<double>(g.mat[0][0]), 0.0};
        const std::complex<double> b{static_cast<double>(g.mat[0][1]), 0.0};
        const std::complex<double> c{static_cast<double>(g.mat[1][0]), 0.0};
        const std::complex<double> d{static_cast<double>(g.mat[1][1]), 0.0};
        const std::complex<double> expected = (a * z + b) / (c * z + d);
        CHECK(std::abs(g.apply(z) - expected) < 1e-14);
    }
}

TEST_CASE("norm: frozen value, grid stability, cache consistency") {
    const ThetaFamily family(4);
    const double norm = family.l2_norm_squared(0);
    CHECK(norm == doctest::Approx(0.012044759513827783).epsilon(1e-9));
    CHECK(theta_l2(family, 0) == doctest::Approx(norm).epsilon(1e-12));
    // A finer grid moves the value by less than a relative 2e-6.
    const ThetaGrid fine{28, 16, 10.0, 0.05, 1e-13};
    CHECK(theta_l2(family, 0, fine) == doctest::Approx(norm).epsilon(2e-6));
    // Degree 6 has at least one genuinely nonzero series.
    const ThetaFamily six(6);
    int live = 0;
    for (int j = 0; j < six.dimension(); ++j) {
        if (!six.identically_zero(j)) {
            ++live;
            CHECK(six.l2_norm_squared(j) > 0.0);
        }
    }
    CHECK(live >= 1);
}

TEST_CASE("automorphy: the weighted modulus is invariant under the group") {
    const ThetaFamily family(4);
    const double k = family.weight();
    const std::complex<double> z{0.1, 0.5};
    // T and a lower-triangular generator of the level-4 group.
    const std::array<std::array<int, 2>, 2> t{{{1, 1}, {0, 1}}};
    const std::array<std::array<int, 2>, 2> v{{{1, 0}, {4, 1}}};
    CHECK(k == doctest::Approx(5.5));
    CHECK(invariance_defect(family, 0, z, t, 1e-12) < 1e-10);
    CHECK(invariance_defect(family, 0, z, v, 1e-12) < 1e-8);
    // A composite word stays invariant as well.
    const std::array<std::array<int, 2>, 2> w{{{5, 1}, {4, 1}}};  // T V, det 1
    CHECK(invariance_defect(family, 0, {0.05, 0.6}, w, 1e-12) < 1e-8);
    // Group membership is enforced.
    const std::array<std::array<int, 2>, 2> outside{{{0, -1}, {1, 0}}};
    CHECK_THROWS_AS(invariance_defect(family, 0, z, outside, 1e-12), std::domain_error);
}

TEST_CASE("Rankin-Selberg unfolding closes to quadrature accuracy") {
    const ThetaFamily family(4);
    const RankinSelbergResult check = rankin_selberg_check(family, 0, 2.0, 150);
    CHECK(check.lhs > 0.0);
    CHECK(check.relative_difference < 1e-6);
    const RankinSelbergResult at_s3 = rankin_selberg_check(family, 0, 3.0, 120);
    CHECK(at_s3.relative_difference < 1e-6);
    // Null series short-circuit to exact zeros.
    const RankinSelbergResult null_check = rankin_selberg_check(family, 1, 2.0, 100);
    CHECK(null_check.lhs == 0.0);
    CHECK(null_check.rhs == 0.0);
    CHECK(null_check.relative_difference == 0.0);
    CHECK_THROWS_AS(rankin_selberg_check(family, 0, 1.0, 100), std::domain_error);
}

TEST_CASE("Rankin-Selberg core is quadratic in the coefficients") {
    std::vector<double> coefficients{10.5, -21.0, -84.0, 5.0, 12.0, 0.0, 3.0, -8.0};
    const ThetaGrid grid;
    const RankinSelbergResult base = rankin_selberg_core(coefficients, 4, 2.0, grid);
    for (double& c : coefficients) c *= 2.0;
    const RankinSelbergResult doubled = rankin_selberg_core(coefficients, 4, 2.0, grid);
    CHECK(doubled.lhs == doctest::Approx(4.0 * base.lhs).epsilon(1e-12));
    CHECK(doubled.rhs == doctest::Approx(4.0 * base.rhs).epsilon(1e-10));
}
