#pragma once

#include <array>
#include <cstdint>

namespace spherevar {

// Counter-based deterministic randomness: every sample is a pure function of
// (seed, index), so a parallel run can hand out disjoint index ranges to
// workers and still reproduce the serial stream byte for byte.

// splitmix64 step on an explicit state word.
std::uint64_t splitmix64(std::uint64_t& state);

// Uniform double in (0, 1), derived from one 64-bit word.
double uniform_unit(std::uint64_t word);

// Uniform point on the unit sphere for the given (seed, index) pair, via
// three Box-Muller Gaussians normalized to unit length.
std::array<double, 3> sphere_point(std::uint64_t seed, std::uint64_t index);

}  // namespace spherevar
