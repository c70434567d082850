#pragma once

#include <array>
#include <vector>

namespace spherevar {

// Largest degree build_basis accepts.
inline constexpr int kBasisDegreeCeiling = 20;

// Homogeneous polynomial in (x, y, z), stored as a dense coefficient table
// over monomials x^a y^b z^c with a + b + c = degree.
class Poly3 {
  public:
    explicit Poly3(int degree);

    int degree() const { return degree_; }
    double coeff(int a, int b) const { return coeffs_[index(a, b)]; }
    double& coeff(int a, int b) { return coeffs_[index(a, b)]; }
    const std::vector<double>& table() const { return coeffs_; }

    double evaluate(double x, double y, double z) const;

    // Symbolic Laplacian; result has degree - 2 (degree < 2 gives the zero
    // polynomial of degree 0).
    Poly3 laplacian() const;

    // Multiplication by x^2 + y^2 + z^2; result has degree + 2.
    Poly3 times_r2() const;

    void add_scaled(const Poly3& other, double scale);
    void scale(double factor);
    double max_abs_coeff() const;

  private:
    int index(int a, int b) const;
    int degree_;
    std::vector<double> coeffs_;
};

// sigma-integral of the monomial x^a y^b z^c over the unit sphere, where
// sigma is the rotation-invariant probability measure. Zero unless all
// exponents are even; otherwise a double-factorial ratio, exact as a rational.
double monomial_moment(int a, int b, int c);

// sigma-inner product of two homogeneous polynomials restricted to the sphere.
double sphere_inner(const Poly3& p, const Poly3& q);

// Top harmonic component of a homogeneous polynomial: the unique harmonic h
// of the same degree with p = h + r^2 q.
Poly3 harmonic_projection(const Poly3& p);

// Average of p over the 48 signed coordinate permutations, the symmetry
// group of the integer lattice. Lattice shells are unions of orbits of that
// group, so every shell sum of p equals the shell sum of this average; a
// vanishing average therefore certifies that all shell sums of p are zero.
// The sign part is exact (monomials with any odd exponent are annihilated
// outright); only the 6-fold permutation average rounds.
Poly3 signed_permutation_average(const Poly3& p);

// True when the signed-permutation average of p vanishes coefficient-wise
// (below 1e-12 relative to the input's largest coefficient). Such p has
// exactly zero sum over every lattice shell, so consumers pin those sums to
// 0.0 instead of accumulating rounding noise.
bool lattice_blind(const Poly3& p);

// Orthonormal basis of real harmonic homogeneous polynomials of one degree,
// orthonormal with respect to sigma. Dimension is 2 degree + 1.
struct HarmonicBasis {
    int degree = 0;
    std::vector<Poly3> members;

    int dimension() const { return static_cast<int>(members.size()); }
};

// Deterministic basis: harmonic projections of the monomial seeds
// x^(m-b) y^b and x^(m-1-b) y^b z, orthonormalized by modified Gram-Schmidt
// (two passes) against exact sphere moments. Throws capacity_error above
// kBasisDegreeCeiling.
HarmonicBasis build_basis(int m);

// Same space, different conditioning path (reversed seed order); used to
// check basis independence of quadratic functionals.
HarmonicBasis build_basis_reversed(int m);

// Values of all members at a point of the unit sphere (|v| must be 1 up to
// 1e-10 or the call throws std::domain_error).
std::vector<double> eval_basis(const HarmonicBasis& basis, const std::array<double, 3>& v);

// Legendre polynomial P_m(t) on [-1, 1] by the three-term recurrence.
double legendre(int m, double t);

// P_0(t) .. P_mmax(t) in one pass.
void legendre_all(int m_max, double t, std::vector<double>& out);

// Zonal kernels on the sphere, parameterized by cos(distance). All are
// normalized against the probability measure sigma.
struct ZonalKernel {
    enum class Kind {
        sharp_cap,           // indicator of a cap of radius r; mass (1-cos r)/2
        unit_disc,           // indicator of radius rho scaled to unit mass
        cap_convolved_disc,  // sigma-convolution of the two
    };
    Kind kind = Kind::sharp_cap;
    double r = 0.0;    // cap radius, (0, pi]
    double rho = 0.0;  // disc radius, (0, pi/2)
};

// Transform coefficient T(f)(m) = (1/2) Integral_{-1}^{1} f(t) P_m(t) dt.
// Under sigma-convolution of zonal kernels these coefficients multiply.
double zonal_transform(const ZonalKernel& kernel, int m);

// T(f)(0..m_max) in one call.
std::vector<double> zonal_coefficients(const ZonalKernel& kernel, int m_max);

// (P_{m-1} - P_{m+1})(cos r) / (2 (2m+1)) for m >= 1; the cap mass for m = 0.
double cap_coefficient_closed_form(double r, int m);

// Default spectral truncation for experiments with cap radius r and optional
// smoothing radius rho (pass 0 for a sharp cap).
int default_truncation(double r, double rho);

}  // namespace spherevar
