#pragma once

#include <array>
#include <cstdint>

#include "spherevar/arith.hpp"

namespace spherevar {

// Closed spherical cap of geodesic radius r around a unit center.
struct SphericalCap {
    std::array<double, 3> center{0.0, 0.0, 1.0};
    double r = 0.0;  // (0, pi]
};

// sigma-area (1 - cos r) / 2 of a cap of radius r in (0, pi].
double cap_area(double r);

// Geodesic distance between unit vectors; both must be unit to 1e-10.
double geodesic_distance(const std::array<double, 3>& u, const std::array<double, 3>& v);

// Number of normalized shell points x/sqrt(n) within the cap. Points at
// distance r + 1e-12 or less count as inside, so the boundary is closed
// under rounding.
std::int64_t count_in_cap(const Shell& shell, const SphericalCap& cap);

// sigma-area of the intersection of caps of radii r1, r2 in (0, pi) whose
// centers are theta apart. Containment and disjointness are resolved by
// explicit inequality branches before the transcendental formula.
double cap_intersection_area(double r1, double r2, double theta);

// Smoothed cap count: each shell point contributes the fraction of the
// rho-disc around it that falls inside the cap,
// sum_x cap_intersection_area(cap.r, rho, d(x_hat, center)) / cap_area(rho).
// rho must lie in (0, pi/2).
double smoothed_count(const Shell& shell, const SphericalCap& cap, double rho);

// Internal fast path shared with the variance samplers: the intersection
// area as a function of cos(theta), with cap data precomputed.
struct CapOverlap {
    double r1 = 0.0, r2 = 0.0;
    double cos_r1 = 1.0, sin_r1 = 0.0;
    double cos_r2 = 1.0, sin_r2 = 0.0;
    double area1 = 0.0, area2 = 0.0;
    double cos_sum = 1.0;   // cos(r1 + r2)
    double cos_diff = 1.0;  // cos(|r1 - r2|)
    bool wraps = false;     // r1 + r2 > pi

    static CapOverlap make(double r1, double r2);
    double at_cos(double cos_theta) const;
};

}  // namespace spherevar
