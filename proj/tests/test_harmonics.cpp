#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spherevar/arith.hpp"
#include "spherevar/errors.hpp"
#include "spherevar/harmonics.hpp"
#include "spherevar/quadrature.hpp"
#include "spherevar/rng.hpp"

using namespace spherevar;

TEST_CASE("basis members are harmonic, orthonormal, of the right dimension") {
    for (int m = 0; m <= 10; ++m) {
        const HarmonicBasis basis = build_basis(m);
        CHECK(basis.dimension() == 2 * m + 1);
        for (int i = 0; i < basis.dimension(); ++i) {
            const Poly3& p = basis.members[i];
            CHECK(p.degree() == m);
            CHECK(p.laplacian().max_abs_coeff() <= 1e-10 * std::max(1.0, p.max_abs_coeff()));
            for (int j = 0; j <= i; ++j) {
                const double inner = sphere_inner(p, basis.members[j]);
                const double target = (i == j) ? 1.0 : 0.0;
                CHECK(std::fabs(inner - target) < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(build_basis(kBasisDegreeCeiling + 1), capacity_error);
    CHECK_THROWS_AS(build_basis(-1), std::domain_error);
}

TEST_CASE("addition identity: squared basis values sum to the dimension") {
    for (int m = 1; m <= 10; ++m) {
        const HarmonicBasis basis = build_basis(m);
        for (std::uint64_t i = 0; i < 25; ++i) {
            const auto v = sphere_point(42, i);
            const std::vector<double> values = eval_basis(basis, v);
            double sum = 0.0;
            for (double value : values) sum += value * value;
            CHECK(sum == doctest::Approx(2.0 * m + 1.0).epsilon(1e-11));
        }
    }
}

TEST_CASE("two-point addition identity reproduces the Legendre kernel") {
    const int m = 6;
    const HarmonicBasis basis = build_basis(m);
    for (std::uint64_t i = 0; i < 10; ++i) {
        const auto u = sphere_point(7, 2 * i);
        const auto v = sphere_point(7, 2 * i + 1);
        const auto a = eval_basis(basis, u);
        const auto b = eval_basis(basis, v);
        double sum = 0.0;
        for (int j = 0; j < basis.dimension(); ++j) sum += a[j] * b[j];
        const double t = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        CHECK(sum == doctest::Approx((2.0 * m + 1.0) * legendre(m, t)).epsilon(1e-10));
    }
}

TEST_CASE("eval_basis rejects points off the sphere") {
    const HarmonicBasis basis = build_basis(2);
    CHECK_THROWS_AS(eval_basis(basis, {1.0, 1.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(eval_basis(basis, {0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("harmonic projection strips the r^2 component") {
    // p = x^4: projection h satisfies p - h = r^2 q and Laplacian(h) = 0.
    Poly3 p(4);
    p.coeff(4, 0) = 1.0;
    const Poly3 h = harmonic_projection(p);
    CHECK(h.degree() == 4);
    CHECK(h.laplacian().max_abs_coeff() < 1e-12);
    // Projection is idempotent.
    const Poly3 h2 = harmonic_projection(h);
    Poly3 diff = h2;
    diff.add_scaled(h, -1.0);
    CHECK(diff.max_abs_coeff() < 1e-12);
    // The stripped part integrates against h to zero: h is sigma-orthogonal
    // to r^2 times any lower-degree polynomial, so <p, h> = <h, h>.
    CHECK(sphere_inner(p, h) == doctest::Approx(sphere_inner(h, h)).epsilon(1e-12));
}

TEST_CASE("monomial moments: parity and frozen rationals") {
    CHECK(monomial_moment(1, 0, 0) == 0.0);
    CHECK(monomial_moment(1, 2, 2) == 0.0);
    CHECK(monomial_moment(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(monomial_moment(2, 0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(monomial_moment(4, 0, 0) == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
    CHECK(monomial_moment(2, 2, 0) == doctest::Approx(1.0 / 15.0).epsilon(1e-15));
    CHECK(monomial_moment(2, 2, 2) == doctest::Approx(1.0 / 105.0).epsilon(1e-15));
}

TEST_CASE("Legendre recurrence endpoints and bound") {
    std::vector<double> all;
    for (int m = 0; m <= 40; ++m) {
        CHECK(legendre(m, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(legendre(m, -1.0) == doctest::Approx((m % 2 == 0) ? 1.0 : -1.0).epsilon(1e-13));
    }
    for (double t : {-0.9, -0.3, 0.0, 0.25, 0.7, 0.99}) {
        legendre_all(40, t, all);
        for (int m = 0; m <= 40; ++m) {
            CHECK(all[m] == doctest::Approx(legendre(m, t)).epsilon(1e-14));
            CHECK(std::fabs(all[m]) <= 1.0 + 1e-12);
        }
    }
    CHECK(legendre(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK(legendre(4, 0.0) == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("sharp-cap zonal transform matches independent quadrature") {
    // T(m) = (1/2) Integral_{cos r}^{1} P_m(t) dt; the integrand is a
    // polynomial, so a 64-node rule on the subinterval is exact.
    const GaussLegendre& rule = gauss_legendre(64);
    for (double r : {0.3, 0.8, 1.5, 2.9}) {
        const double a = std::cos(r);
        const ZonalKernel cap{ZonalKernel::Kind::sharp_cap, r, 0.0};
        for (int m = 0; m <= 40; ++m) {
            double integral = 0.0;
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                const double t = 0.5 * (a + 1.0) + 0.5 * (1.0 - a) * rule.x[i];
                integral += rule.w[i] * legendre(m, t);
            }
            integral *= 0.25 * (1.0 - a);
            CHECK(zonal_transform(cap, m) == doctest::Approx(integral).epsilon(1e-12));
            CHECK(cap_coefficient_closed_form(r, m)
                  == doctest::Approx(integral).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed-form cap coefficient equals the difference formula") {
    for (double r : {0.2, 0.5, 1.0, 2.0, M_PI}) {
        CHECK(cap_coefficient_closed_form(r, 0)
              == doctest::Approx(0.5 * (1.0 - std::cos(r))).epsilon(1e-14));
        for (int m = 1; m <= 60; ++m) {
            const double t = std::cos(r);
            const double expected = (legendre(m - 1, t) - legendre(m + 1, t))
                                    / (2.0 * (2.0 * m + 1.0));
            CHECK(cap_coefficient_closed_form(r, m) == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("convolution multiplies zonal coefficients") {
    const double r = 0.8, rho = 0.2;
    const ZonalKernel cap{ZonalKernel::Kind::sharp_cap, r, 0.0};
    const ZonalKernel disc{ZonalKernel::Kind::unit_disc, 0.0, rho};
    const ZonalKernel conv{ZonalKernel::Kind::cap_convolved_disc, r, rho};
    CHECK(zonal_transform(disc, 0) == doctest::Approx(1.0).epsilon(1e-12));
    for (int m = 0; m <= 50; ++m) {
        CHECK(zonal_transform(conv, m)
              == doctest::Approx(zonal_transform(cap, m) * zonal_transform(disc, m))
                     .epsilon(1e-12));
    }
}

TEST_CASE("Parseval partial sums increase to the sharp-cap second moment") {
    // For the indicator, Integral f^2 dsigma = sigma(cap), and the spectral
    // side is sum (2m+1) T(m)^2 with positive terms.
    const double r = 0.7;
    const double sigma = 0.5 * (1.0 - std::cos(r));
    const ZonalKernel cap{ZonalKernel::Kind::sharp_cap, r, 0.0};
    const std::vector<double> t = zonal_coefficients(cap, 2000);
    double sum = 0.0, previous = 0.0;
    for (int m = 0; m <= 2000; ++m) {
        sum += (2.0 * m + 1.0) * t[m] * t[m];
        CHECK(sum >= previous);
        previous = sum;
    }
    CHECK(sum < sigma + 1e-12);
    CHECK(sigma - sum < 5.0 / 2000.0);
}

TEST_CASE("signed permutation average: exact annihilation and symmetrization") {
    // Any odd exponent dies exactly.
    Poly3 odd(6);
    odd.coeff(3, 1) = 2.5;  // x^3 y z^2
    CHECK(signed_permutation_average(odd).max_abs_coeff() == 0.0);
    CHECK(lattice_blind(odd));

    // x^2 y^4 spreads over the six exponent permutations with weight 1/6.
    Poly3 even(6);
    even.coeff(2, 4) = 1.0;
    const Poly3 avg = signed_permutation_average(even);
    CHECK(avg.coeff(2, 4) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(avg.coeff(4, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(avg.coeff(0, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(avg.coeff(2, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK_FALSE(lattice_blind(even));
}

TEST_CASE("shell sums of a polynomial equal shell sums of its average") {
    const HarmonicBasis basis = build_basis(4);
    const Poly3& p = basis.members[0];
    const Poly3 avg = signed_permutation_average(p);
    for (std::int64_t n : {1, 2, 3, 5, 6, 9}) {
        const Shell shell = enumerate_shell(n);
        double direct = 0.0, averaged = 0.0;
        for (const auto& q : shell.points) {
            const auto x = static_cast<double>(q[0]);
            const auto y = static_cast<double>(q[1]);
            const auto z = static_cast<double>(q[2]);
            direct += p.evaluate(x, y, z);
            averaged += avg.evaluate(x, y, z);
        }
        CHECK(direct == doctest::Approx(averaged).epsilon(1e-9));
    }
}

TEST_CASE("lattice blindness by degree") {
    // Degree 2: the lattice symmetry group has no invariant harmonic, so the
    // whole space is blind. Degree 4: the invariant component meets exactly
    // two members of this basis. Odd degrees are blind outright.
    for (const Poly3& p : build_basis(2).members) CHECK(lattice_blind(p));
    for (int m : {1, 3, 5, 7}) {
        for (const Poly3& p : build_basis(m).members) CHECK(lattice_blind(p));
    }
    const HarmonicBasis basis4 = build_basis(4);
    for (int j = 0; j < basis4.dimension(); ++j) {
        CHECK(lattice_blind(basis4.members[j]) == (j != 0 && j != 4));
    }
    int seeing6 = 0;
    for (const Poly3& p : build_basis(6).members) {
        if (!lattice_blind(p)) ++seeing6;
    }
    // Degree 6 carries an invariant, so at least one member must see it.
    CHECK(seeing6 >= 1);
}

TEST_CASE("default truncation sanity") {
    CHECK(default_truncation(0.3, 0.0) >= 32);
    CHECK(default_truncation(0.3, 0.1) >= 2);
    // The smallest feature sets the resolution: smoothing with a disc finer
    // than the cap demands at least as many modes as the sharp cap alone.
    CHECK(default_truncation(1.5, 0.3) >= default_truncation(1.5, 0.0));
    CHECK_THROWS_AS(default_truncation(0.0, 0.0), std::domain_error);
}

TEST_CASE("Gauss-Legendre rule integrates high-degree polynomials exactly") {
    const GaussLegendre& rule = gauss_legendre(32);
    REQUIRE(rule.x.size() == 32);
    double weight_sum = 0.0;
    for (double w : rule.w) weight_sum += w;
    CHECK(weight_sum == doctest::Approx(2.0).epsilon(1e-14));
    // Integral of t^62 over [-1, 1] = 2/63, at the edge of exactness.
    double moment = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        moment += rule.w[i] * std::pow(rule.x[i], 62);
    CHECK(moment == doctest::Approx(2.0 / 63.0).epsilon(1e-12));
    // Legendre orthogonality through the rule.
    double cross = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        cross += rule.w[i] * legendre(5, rule.x[i]) * legendre(7, rule.x[i]);
    CHECK(std::fabs(cross) < 1e-14);
}
