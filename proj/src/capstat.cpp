#include "spherevar/capstat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spherevar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBoundarySlack = 1e-12;

void require_radius(double r) {
    if (!(r > 0.0) || !(r <= kPi)) {
        throw std::domain_error("cap radius must lie in (0, pi]");
    }
}

void require_unit(const std::array<double, 3>& v) {
    const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if (std::abs(n2 - 1.0) > 1e-10) {
        throw std::domain_error("direction must be a unit vector");
    }
}

double clamped_acos(double t) { return std::acos(std::clamp(t, -1.0, 1.0)); }

}  // namespace

double cap_area(double r) {
    require_radius(r);
    return 0.5 * (1.0 - std::cos(r));
}

double geodesic_distance(const std::array<double, 3>& u, const std::array<double, 3>& v) {
    require_unit(u);
    require_unit(v);
    return clamped_acos(u[0] * v[0] + u[1] * v[1] + u[2] * v[2]);
}

std::int64_t count_in_cap(const Shell& shell, const SphericalCap& cap) {
    require_radius(cap.r);
    require_unit(cap.center);
    if (shell.points.empty()) return 0;
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(shell.n));
    // d(x_hat, center) <= r + slack  <=>  dot >= cos(min(r + slack, pi)).
    const double threshold = std::cos(std::min(cap.r + kBoundarySlack, kPi));
    std::int64_t inside = 0;
    for (const auto& p : shell.points) {
        const double dot = (static_cast<double>(p[0]) * cap.center[0] +
                            static_cast<double>(p[1]) * cap.center[1] +
                            static_cast<double>(p[2]) * cap.center[2]) *
                           inv_root;
        if (dot >= threshold) ++inside;
    }
    return inside;
}

CapOverlap CapOverlap::make(double r1, double r2) {
    require_radius(r1);
    require_radius(r2);
    // Radii of pi are admitted: the containment and terminal branches then
    // meet at the same cosine, so the lune branch (which would divide by
    // sin r = 0) is unreachable.
    CapOverlap o;
    o.r1 = r1;
    o.r2 = r2;
    o.cos_r1 = std::cos(r1);
    o.sin_r1 = std::sin(r1);
    o.cos_r2 = std::cos(r2);
    o.sin_r2 = std::sin(r2);
    o.area1 = 0.5 * (1.0 - o.cos_r1);
    o.area2 = 0.5 * (1.0 - o.cos_r2);
    o.cos_sum = std::cos(r1 + r2);
    o.cos_diff = std::cos(std::abs(r1 - r2));
    o.wraps = (r1 + r2 > kPi);
    return o;
}

double CapOverlap::at_cos(double cos_theta) const {
    cos_theta = std::clamp(cos_theta, -1.0, 1.0);
    // Containment: theta <= |r1 - r2| puts the smaller cap inside the larger.
    if (cos_theta >= cos_diff) return std::min(area1, area2);
    // Terminal branch. For r1 + r2 <= pi the caps are disjoint once
    // theta >= r1 + r2. For r1 + r2 > pi the same cosine test reads
    // theta >= 2 pi - r1 - r2, which is disjointness of the complement
    // caps, so the union covers the sphere and the inclusion-exclusion
    // area is area1 + area2 - 1.
    if (cos_theta <= cos_sum) return wraps ? (area1 + area2 - 1.0) : 0.0;
    // Proper lune. theta is strictly inside (0, pi) here, so sin(theta) > 0.
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double beta1 = clamped_acos((cos_r2 - cos_r1 * cos_theta) / (sin_r1 * sin_theta));
    const double beta2 = clamped_acos((cos_r1 - cos_r2 * cos_theta) / (sin_r2 * sin_theta));
    const double gamma = clamped_acos((cos_theta - cos_r1 * cos_r2) / (sin_r1 * sin_r2));
    // Solid angle of the intersection via the two circular segments:
    // 2(pi - gamma) - 2 beta1 cos r1 - 2 beta2 cos r2 steradians.
    const double steradians =
        2.0 * (kPi - gamma) - 2.0 * beta1 * cos_r1 - 2.0 * beta2 * cos_r2;
    return std::clamp(steradians / (4.0 * kPi), 0.0, std::min(area1, area2));
}

double cap_intersection_area(double r1, double r2, double theta) {
    if (!(theta >= 0.0) || !(theta <= kPi)) {
        throw std::domain_error("center separation must lie in [0, pi]");
    }
    return CapOverlap::make(r1, r2).at_cos(std::cos(theta));
}

double smoothed_count(const Shell& shell, const SphericalCap& cap, double rho) {
    require_unit(cap.center);
    if (!(rho > 0.0) || !(rho < kPi / 2.0)) {
        throw std::domain_error("mollifier radius must lie in (0, pi/2)");
    }
    require_radius(cap.r);
    const CapOverlap overlap = CapOverlap::make(cap.r, rho);
    const double inv_disc = 1.0 / cap_area(rho);
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(shell.n));
    double total = 0.0;
    for (const auto& p : shell.points) {
        const double dot = (static_cast<double>(p[0]) * cap.center[0] +
                            static_cast<double>(p[1]) * cap.center[1] +
                            static_cast<double>(p[2]) * cap.center[2]) *
                           inv_root;
        total += overlap.at_cos(dot);
    }
    return total * inv_disc;
}

}  // namespace spherevar
