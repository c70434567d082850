#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "spherevar/arith.hpp"
#include "spherevar/harmonics.hpp"

namespace spherevar {

// ---------------------------------------------------------------------------
// Weyl sums and their power spectrum.
// ---------------------------------------------------------------------------

struct WeylSumTable {
    std::int64_t n = 0;
    int degree = 0;
    std::vector<double> values;  // 2m+1 entries, basis order
};

// W_{m,j}(n) = sum over shell points of phi_{m,j}(x / sqrt(n)). Evaluated by
// homogeneity at the lattice points themselves and rescaled by n^{-m/2};
// antipodal points are bracketed together so odd-degree sums vanish exactly.
WeylSumTable weyl_sums(const Shell& shell, const HarmonicBasis& basis);

// Same sums evaluated the literal way, at normalized points. Used to check
// the homogeneity identity; the two paths agree to 1e-10.
WeylSumTable weyl_sums_normalized(const Shell& shell, const HarmonicBasis& basis);

// S(m, n) = sum_j W_{m,j}(n)^2 for m = 0..m_max, computed without any basis
// via the addition identity sum_j phi_{m,j}(u) phi_{m,j}(v) = (2m+1) P_m(u.v):
// S(m) = (2m+1) sum_{x,y} P_m((x.y)/n). The integer dot products are
// histogrammed first, so the cost is one O(N^2) integer pass plus one
// Legendre sweep per distinct dot value. Odd-m entries are exactly zero by
// the antipodal symmetry of the histogram and are emitted as such.
std::vector<double> weyl_power_spectrum(const Shell& shell, int m_max);

// ---------------------------------------------------------------------------
// Cap-count variance.
// ---------------------------------------------------------------------------

struct VarianceResult {
    std::int64_t n = 0;
    double r = 0.0;
    double rho = 0.0;  // 0 means sharp counts
    double value = 0.0;
    double error_estimate = 0.0;  // MC: standard error; spectral: rigorous tail bound
    enum class Method { direct, spectral } method = Method::direct;
    int truncation = 0;             // spectral only
    std::int64_t evaluations = 0;   // direct only: samples or quadrature nodes
};

struct McSampler {
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

struct QuadSampler {
    int n_theta = 0;  // Gauss-Legendre nodes in cos(theta)
    int n_phi = 0;    // uniform nodes in phi
};

using DirectSampler = std::variant<McSampler, QuadSampler>;

// Var(Omega, n) = integral over cap centers of (Z(center) - N sigma)^2,
// where Z is the sharp count (rho = 0) or the smoothed count. Monte Carlo
// works for both; the product quadrature is only admitted for smoothed
// integrands (sharp counts are piecewise constant in the center).
// Deterministic for a fixed sampler spec, independent of worker count.
VarianceResult variance_direct(const Shell& shell, double r, double rho,
                               const DirectSampler& sampler, int workers = 1);

// Spectral identity: Var = sum_{m=1..M} T(m)^2 S(m, n) with T the zonal
// transform of the sharp cap (rho = 0) or of the cap convolved with the
// normalized disc. error_estimate bounds the dropped tail: exact partial
// sums of N^2 (2m+1) T(m)^2 through degree 4M, then the smaller of a
// geometric extrapolation and a Legendre-envelope bound for m > 4M.
VarianceResult variance_spectral(const Shell& shell, double r, double rho, int truncation);

// Var(Omega, n) / (N_n sigma(Omega)); empty shell is a domain error.
double conjecture_ratio(const Shell& shell, double r, const VarianceResult& variance);

// ---------------------------------------------------------------------------
// Windowed averages.
// ---------------------------------------------------------------------------

struct AverageOptions {
    std::int64_t X = 0;
    std::int64_t H = -1;    // negative: full window [1, X], else [X, X+H]
    double delta = 0.0;     // in (-1, 0)
    double c = 1.0;         // positive scale for the target cap area
    double rho = 0.0;       // 0 means sharp caps
    enum class Method { spectral, monte_carlo } method = Method::spectral;
    int truncation = 0;         // 0: derived from the cap scale
    std::int64_t samples = 0;   // MC only
    std::uint64_t seed = 0;     // MC only
    bool complete_sum = false;  // drop the eligibility restriction
    int workers = 1;
};

struct AverageResult {
    std::int64_t X = 0, H = -1;
    double delta = 0.0, c = 0.0, rho = 0.0;
    double sigma = 0.0;       // target cap area c * X^(delta/2)
    double cap_radius = 0.0;  // arccos(1 - 2 sigma)
    double value = 0.0;       // the average A
    double ratio = 0.0;       // A / (X^(1/2) sigma)
    double tail_total = 0.0;  // averaged per-shell error estimates: spectral
                              // tail bounds, or Monte Carlo standard errors
    std::int64_t lo = 0, hi = 0;
    std::int64_t eligible = 0;     // number of summed shells
    std::int64_t denominator = 0;  // max(H,1) or X, exactly as defined
    bool window_warning = false;   // H below the X^(3/4)/sigma^(3/4) guideline
    int truncation = 0;
};

// A_{X,H} = (1/H) sum of Var(Omega_X, n) over eligible n in [X, X+H], or
// A_X = (1/X) over [1, X] when H is absent. The divisor is the window
// length, not the eligible count; H = 0 divides by 1 (single-shell window).
AverageResult average_variance(const AverageOptions& options);

}  // namespace spherevar
