#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "spherevar/arith.hpp"
#include "spherevar/capstat.hpp"
#include "spherevar/quadrature.hpp"
#include "spherevar/rng.hpp"

using namespace spherevar;

TEST_CASE("cap area values and domain") {
    CHECK(cap_area(M_PI) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cap_area(M_PI / 2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cap_area(M_PI / 3) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(cap_area(0.0), std::domain_error);
    CHECK_THROWS_AS(cap_area(-0.1), std::domain_error);
    CHECK_THROWS_AS(cap_area(M_PI + 0.1), std::domain_error);
}

TEST_CASE("geodesic distance basics") {
    const std::array<double, 3> e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
    const std::array<double, 3> me3{0, 0, -1};
    CHECK(geodesic_distance(e1, e2) == doctest::Approx(M_PI / 2).epsilon(1e-14));
    CHECK(geodesic_distance(e3, me3) == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(geodesic_distance(e1, e1) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS_AS(geodesic_distance({2, 0, 0}, e1), std::domain_error);
}

TEST_CASE("count_in_cap on small shells") {
    const Shell one = enumerate_shell(1);
    const SphericalCap north_half{{0, 0, 1}, M_PI / 2 + 0.1};
    CHECK(count_in_cap(one, north_half) == 5);  // everything but -e3
    CHECK(count_in_cap(one, {{0, 0, 1}, M_PI}) == 6);
    CHECK(count_in_cap(one, {{0, 0, 1}, 0.1}) == 1);
    // The boundary is closed: the four equatorial points sit at exactly pi/2.
    CHECK(count_in_cap(one, {{0, 0, 1}, M_PI / 2}) == 5);

    // Cross-check against a direct distance loop on a bigger shell.
    const Shell big = enumerate_shell(101);
    const SphericalCap cap{{0.6, 0.0, 0.8}, 0.9};
    std::int64_t direct = 0;
    const double scale = 1.0 / std::sqrt(101.0);
    for (const auto& p : big.points) {
        const std::array<double, 3> v{p[0] * scale, p[1] * scale, p[2] * scale};
        if (geodesic_distance(v, cap.center) <= cap.r + 1e-12) ++direct;
    }
    CHECK(count_in_cap(big, cap) == direct);
    CHECK(direct > 0);
    CHECK(direct < big.count());
}

TEST_CASE("a tiny cap centered on a shell point holds exactly that point") {
    // The radius must sit above the ~1e-8 noise floor that acos imposes near
    // coincident points, and below the distance to any other shell point.
    const Shell shell = enumerate_shell(2);
    const double s = 1.0 / std::sqrt(2.0);
    const SphericalCap tiny{{s, s, 0.0}, 1e-6};
    CHECK(count_in_cap(shell, tiny) == 1);
}

TEST_CASE("cap intersection: containment and disjointness branches") {
    CHECK(cap_intersection_area(0.3, 0.8, 2.0) == 0.0);  // disjoint
    CHECK(cap_intersection_area(0.3, 0.8, 1.1000000001) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(cap_intersection_area(0.3, 0.8, 0.0)
          == doctest::Approx(cap_area(0.3)).epsilon(1e-14));  // concentric
    CHECK(cap_intersection_area(0.3, 0.8, 0.4999999)
          == doctest::Approx(cap_area(0.3)).epsilon(1e-6));  // contained
    // Symmetry in the radii.
    for (double theta : {0.2, 0.5, 0.9, 1.4}) {
        CHECK(cap_intersection_area(0.4, 0.9, theta)
              == doctest::Approx(cap_intersection_area(0.9, 0.4, theta)).epsilon(1e-14));
    }
    // Monotone decreasing in separation.
    double previous = cap_area(0.5);
    for (double theta = 0.05; theta < 1.6; theta += 0.05) {
        const double area = cap_intersection_area(0.5, 1.1, theta);
        CHECK(area <= previous + 1e-14);
        previous = area;
    }
}

TEST_CASE("cap intersection against a Monte Carlo oracle") {
    const struct {
        double r1, r2, theta;
    } cases[] = {
        {0.5, 0.5, 0.4},
        {0.8, 1.2, 1.0},
        {1.5, 1.5, 1.3},
        {2.5, 2.0, 0.7},  // wrapping: r1 + r2 > pi
    };
    const std::int64_t samples = 200'000;
    for (const auto& c : cases) {
        const std::array<double, 3> u{0.0, 0.0, 1.0};
        const std::array<double, 3> v{std::sin(c.theta), 0.0, std::cos(c.theta)};
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < samples; ++i) {
            const auto p = sphere_point(99, static_cast<std::uint64_t>(i));
            const double du = p[0] * u[0] + p[1] * u[1] + p[2] * u[2];
            const double dv = p[0] * v[0] + p[1] * v[1] + p[2] * v[2];
            if (du >= std::cos(c.r1) && dv >= std::cos(c.r2)) ++hits;
        }
        const double mc = static_cast<double>(hits) / static_cast<double>(samples);
        const double exact = cap_intersection_area(c.r1, c.r2, c.theta);
        CHECK(std::fabs(exact - mc) < 6e-3);
        // Inclusion-exclusion lower bound, tight in the wrapping regime.
        CHECK(exact >= cap_area(c.r1) + cap_area(c.r2) - 1.0 - 1e-12);
        CHECK(exact <= std::min(cap_area(c.r1), cap_area(c.r2)) + 1e-12);
    }
}

TEST_CASE("CapOverlap agrees with the scalar entry point") {
    const CapOverlap overlap = CapOverlap::make(0.6, 1.1);
    for (double theta = 0.0; theta <= M_PI; theta += 0.01) {
        CHECK(overlap.at_cos(std::cos(theta))
              == doctest::Approx(cap_intersection_area(0.6, 1.1, theta)).epsilon(1e-12));
    }
    const CapOverlap wraps = CapOverlap::make(2.4, 1.9);
    CHECK(wraps.wraps);
    for (double theta = 0.0; theta <= M_PI; theta += 0.01) {
        CHECK(wraps.at_cos(std::cos(theta))
              == doctest::Approx(cap_intersection_area(2.4, 1.9, theta)).epsilon(1e-12));
    }
}

TEST_CASE("smoothed count approaches the sharp count as rho shrinks") {
    const Shell shell = enumerate_shell(5);
    const SphericalCap cap{{0.48, 0.36, 0.8}, 0.8};  // generic center
    const double sharp = static_cast<double>(count_in_cap(shell, cap));
    CHECK(smoothed_count(shell, cap, 1e-5) == doctest::Approx(sharp).epsilon(1e-6));
    CHECK_THROWS_AS(smoothed_count(shell, cap, 0.0), std::domain_error);
    CHECK_THROWS_AS(smoothed_count(shell, cap, M_PI / 2), std::domain_error);
}

TEST_CASE("smoothed count is bounded by the shell size and positive for wide caps") {
    const Shell shell = enumerate_shell(9);
    const SphericalCap wide{{0, 0, 1}, 3.0};
    const double smoothed = smoothed_count(shell, wide, 0.3);
    CHECK(smoothed > 0.0);
    CHECK(smoothed <= static_cast<double>(shell.count()) + 1e-12);
}

TEST_CASE("Fubini: the center-averaged count equals N times the cap area") {
    // Average over centers drawn from sigma via a product quadrature exact in
    // longitude by symmetry of the integrand sum.
    const struct {
        std::int64_t n;
        double r, rho;
    } cases[] = {{5, 0.8, 0.1}, {2, 0.5, 0.3}};
    const GaussLegendre& rule = gauss_legendre(64);
    const int phi_nodes = 128;
    for (const auto& c : cases) {
        const Shell shell = enumerate_shell(c.n);
        double average = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double z = rule.x[i];
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            double ring = 0.0;
            for (int k = 0; k < phi_nodes; ++k) {
                const double phi = 2.0 * M_PI * (k + 0.5) / phi_nodes;
                const SphericalCap cap{{s * std::cos(phi), s * std::sin(phi), z}, c.r};
                ring += smoothed_count(shell, cap, c.rho);
            }
            average += rule.w[i] * ring / phi_nodes;
        }
        average *= 0.5;  // sigma weight of the z-marginal
        const double expected = static_cast<double>(shell.count()) * cap_area(c.r);
        // The overlap profile has C^1 kinks, so the product rule is not
        // spectrally exact; 2e-4 still pins the normalization chain.
        CHECK(average == doctest::Approx(expected).epsilon(2e-4));
    }
}
