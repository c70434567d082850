#pragma once

#include <vector>

namespace spherevar {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};

// Cached rule with n nodes (exact for polynomials of degree <= 2n-1).
const GaussLegendre& gauss_legendre(int n);

}  // namespace spherevar
