#pragma once

#include <cstdint>

#include "spherevar/modular.hpp"

namespace spherevar {

struct DirichletPartial {
    int degree = 0, index = 0;
    double s = 0.0;
    std::int64_t N = 0;
    double value = 0.0;       // sum_{n<=N} b(n)^2 / (||theta||^2 n^s)
    double tail_bound = 0.0;  // envelope bound on the dropped n > N part
};

// Partial Rankin-Selberg Dirichlet series. Terms are non-negative, so the
// value is monotone in N. The tail uses the empirical envelope
// b(n)^2 <= C sqrt(n) with C = max_{n<=N} b(n)^2/sqrt(n) (the proven
// n^(1/2+eps) shape with the constant read off the computed head), giving
// tail <= C N^(3/2-s)/(s-3/2) for s > 3/2 and infinity otherwise.
// s <= 1, odd degree, or zero norm are domain errors.
DirichletPartial dirichlet_partial(const ThetaFamily& family, int j, double s, std::int64_t N);

// gamma(k, s) = Gamma(s) Gamma(s+k-1); half-integer arguments go through the
// exact half-integer product. Poles (non-positive integer arguments) are
// domain errors.
double gamma_factor(double k, double s);
double log_gamma_factor(double k, double s);

// zeta(s) for s > 1: direct head plus Euler-Maclaurin completion.
double zeta_direct(double s);

// Completed-series head: zeta(2s) (2 pi)^{-2(s+k-1)} gamma(k,s) L_head(s, N).
double completed_lambda_partial(const ThetaFamily& family, int j, double s, std::int64_t N);

// F_X = sum over the full degree-m basis and ALL n <= X of b(n)^2 (the
// completed sum; no eligibility filter here). Odd m gives 0.
double fx_sum(std::int64_t X, int m);

struct ResidueEstimate {
    double raw = 0.0;    // (1/X) sum_{n<=X} b(n)^2 / ||theta||^2
    double c_hat = 0.0;  // raw * (4 pi)^{-k} Gamma(k)
};

// Cesaro residue estimate at s = 1. X >= 100; odd degree or zero norm are
// domain errors.
ResidueEstimate residue_estimate(const ThetaFamily& family, int j, std::int64_t X);

}  // namespace spherevar
