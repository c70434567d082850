#include "spherevar/rng.hpp"

#include <cmath>
#include <numbers>

namespace spherevar {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform_unit(std::uint64_t word) {
    // 53 high bits, offset by half an ulp so the value is never 0 or 1.
    return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

std::array<double, 3> sphere_point(std::uint64_t seed, std::uint64_t index) {
    // Decorrelate the counter from the seed before drawing.
    std::uint64_t state = (index + 1) * 0x9E3779B97F4A7C15ULL ^ seed * 0xD1B54A32D192ED03ULL;
    const double u1 = uniform_unit(splitmix64(state));
    const double u2 = uniform_unit(splitmix64(state));
    const double u3 = uniform_unit(splitmix64(state));
    const double u4 = uniform_unit(splitmix64(state));
    const double two_pi = 2.0 * std::numbers::pi;
    const double m1 = std::sqrt(-2.0 * std::log(u1));
    const double m2 = std::sqrt(-2.0 * std::log(u3));
    std::array<double, 3> g{m1 * std::cos(two_pi * u2), m1 * std::sin(two_pi * u2),
                            m2 * std::cos(two_pi * u4)};
    const double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    if (!(norm > 1e-12)) return {0.0, 0.0, 1.0};
    return {g[0] / norm, g[1] / norm, g[2] / norm};
}

}  // namespace spherevar
