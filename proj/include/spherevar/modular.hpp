#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <mutex>
#include <vector>

#include "spherevar/harmonics.hpp"

namespace spherevar {

// Weight attached to a degree-m harmonic: k = m + 3/2.
inline double theta_weight(int degree) { return degree + 1.5; }

// Documented floor for the public q-series evaluator.
inline constexpr double kThetaYMin = 0.05;

// ---------------------------------------------------------------------------
// Theta series family: the 2m+1 series sharing one harmonic basis.
// ---------------------------------------------------------------------------

// Coefficients a_j(n) = sum over |l|^2 = n of phi_{m,j}(l), computed for all
// j in one pass over each shell and cached immutably. a_j(n) = n^{m/2} W_j(n)
// by homogeneity. Rows extend on demand; shells are enumerated once per n.
class ThetaFamily {
  public:
    explicit ThetaFamily(int degree);

    int degree() const { return basis_.degree; }
    double weight() const { return theta_weight(basis_.degree); }
    int dimension() const { return basis_.dimension(); }
    const HarmonicBasis& basis() const { return basis_; }

    // Extend the coefficient cache through n_max (throws capacity_error past
    // the documented ceiling; the cost is one shell enumeration per n).
    void ensure(std::int64_t n_max) const;
    std::int64_t cached_limit() const;

    // a_j(n); extends the cache as needed.
    double coefficient(int j, std::int64_t n) const;
    // b_j(n) = a_j(n) n^{-(k-1)/2}.
    double normalized_coefficient(int j, std::int64_t n) const;
    // Copy of the row a_j(1..n_max), for sweep consumers.
    std::vector<double> coefficient_row(int j, std::int64_t n_max) const;

    // Whether theta_j is the zero function, certified at construction by the
    // signed-permutation average of phi_j vanishing (all odd degrees; every
    // degree-2 harmonic; the lattice-blind part of higher even degrees).
    // Certified series get exact-zero coefficients and zero norm.
    bool identically_zero(int j) const;

    // Squared L2 norm over the level-4 fundamental domain, computed once per
    // j with the default grid and cached.
    double l2_norm_squared(int j) const;

  private:
    void require_index(int j) const;
    void extend_locked(std::int64_t n_max) const;

    HarmonicBasis basis_;
    std::vector<char> null_;
    mutable std::mutex mutex_;
    mutable std::vector<std::vector<double>> rows_;  // [j][n-1]
    mutable std::vector<double> norms_;
    mutable std::vector<char> norm_known_;
};

// Spec operation names, thin wrappers over the family.
double theta_coefficient(const ThetaFamily& family, int j, std::int64_t n);
double normalized_coefficient(const ThetaFamily& family, int j, std::int64_t n);

// ---------------------------------------------------------------------------
// q-series evaluation.
// ---------------------------------------------------------------------------

// Smallest cutoff N such that the proven envelope tail
// sum_{n>N} 9.1 sqrt(2m+1) n^{m/2+1} e^{-2 pi n y} is below tol.
// Throws capacity_error when no admissible N exists below the cache ceiling.
std::int64_t q_truncation(int degree, double y, double tol);

// theta_j(z) = sum_{n>=1} a_j(n) e^{2 pi i n z}, truncated so the proven
// tail bound is below tol. Requires Im z >= 0.05 (documented floor); x is
// reduced mod 1 first, so the period-1 identity is exact in floating point.
std::complex<double> theta_eval(const ThetaFamily& family, int j, std::complex<double> z,
                                double tol);

// ---------------------------------------------------------------------------
// Level-4 coset geometry.
// ---------------------------------------------------------------------------

struct CosetRep {
    // Row-major [[a, b], [c, d]], determinant 1.
    std::array<std::array<int, 2>, 2> mat;

    std::complex<double> apply(std::complex<double> z) const;
};

// The 6 canonical representatives of Gamma_0(4) \ SL2(Z).
std::array<CosetRep, 6> coset_reps();

// Whether g1 g2^{-1} lies in Gamma_0(4) (c-entry divisible by 4).
bool same_coset(const CosetRep& g1, const CosetRep& g2);

// ---------------------------------------------------------------------------
// Norms, invariance, Rankin-Selberg.
// ---------------------------------------------------------------------------

struct ThetaGrid {
    int x_nodes = 20;       // Gauss-Legendre nodes across a unit x-interval
    int y_nodes = 12;       // Gauss-Legendre nodes per y panel
    double y_max = 8.0;     // height at which the tail handling takes over
    double y_min = 0.05;    // strip floor for the Rankin-Selberg quadrature
    double q_tol = 1e-12;   // absolute q-series tail target
};

// Squared norm int |theta|^2 y^(k-2) dx dy over the level-4 fundamental
// domain, realized as the 6 coset translates of the standard SL2(Z) domain.
// y above y_max: the identity coset is finished analytically from the
// q-expansion; the other cosets get adaptive extension panels. Throws
// capacity_error when the required q-truncation exceeds the cache ceiling.
double theta_l2(const ThetaFamily& family, int j, const ThetaGrid& grid = {});

// | |theta(gz)|^2 Im(gz)^k - |theta(z)|^2 Im(z)^k | for g in Gamma_0(4).
// Both z and gz must satisfy the Im floor of theta_eval.
double invariance_defect(const ThetaFamily& family, int j, std::complex<double> z,
                         const std::array<std::array<int, 2>, 2>& gamma, double tol);

struct RankinSelbergResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_difference = 0.0;
};

// Truncation-consistent unfolding identity: with the series cut at N on both
// sides, lhs = (4 pi)^{-(s+k-1)} Gamma(s+k-1) sum_{n<=N} a(n)^2 n^{-(s+k-1)}
// must equal the strip integral int_0^1 int_0^inf |theta_N|^2 y^(s+k) dy/y^2,
// computed by quadrature on [y_min, y_max] plus exact incomplete-gamma
// corrections outside. Identically zero series yield (0, 0, 0).
RankinSelbergResult rankin_selberg_check(const ThetaFamily& family, int j, double s,
                                         std::int64_t N, const ThetaGrid& grid = {});

// Synthetic hook: the same computation on an explicit coefficient vector
// (a[0] is a(1)). Exposes the bilinearity of both sides to tests.
RankinSelbergResult rankin_selberg_core(const std::vector<double>& coefficients,
                                        int degree, double s, const ThetaGrid& grid);

}  // namespace spherevar
