#include "spherevar/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spherevar/errors.hpp"

namespace spherevar {

Poly3::Poly3(int degree) : degree_(degree) {
    if (degree < 0) throw std::domain_error("Poly3: negative degree");
    coeffs_.assign(static_cast<std::size_t>((degree + 1) * (degree + 2) / 2), 0.0);
}

int Poly3::index(int a, int b) const {
    // Row offset for fixed a, then b; c = degree - a - b is implied.
    return a * (2 * degree_ - a + 3) / 2 + b;
}

double Poly3::evaluate(double x, double y, double z) const {
    const int d = degree_;
    // Power tables keep the evaluation exact in the sign-symmetry sense:
    // parity of each exponent factors out of products of the same doubles.
    std::array<double, 64> px, py, pz;
    px[0] = py[0] = pz[0] = 1.0;
    for (int i = 1; i <= d; ++i) {
        px[i] = px[i - 1] * x;
        py[i] = py[i - 1] * y;
        pz[i] = pz[i - 1] * z;
    }
    double sum = 0.0;
    int idx = 0;
    for (int a = 0; a <= d; ++a) {
        for (int b = 0; b <= d - a; ++b, ++idx) {
            const double c = coeffs_[idx];
            if (c != 0.0) sum += c * px[a] * py[b] * pz[d - a - b];
        }
    }
    return sum;
}

Poly3 Poly3::laplacian() const {
    const int d = degree_;
    Poly3 out(d >= 2 ? d - 2 : 0);
    if (d < 2) return out;
    for (int a = 0; a <= d; ++a) {
        for (int b = 0; b <= d - a; ++b) {
            const double v = coeff(a, b);
            if (v == 0.0) continue;
            const int c = d - a - b;
            if (a >= 2) out.coeff(a - 2, b) += v * a * (a - 1);
            if (b >= 2) out.coeff(a, b - 2) += v * b * (b - 1);
            if (c >= 2) out.coeff(a, b) += v * c * (c - 1);
        }
    }
    return out;
}

Poly3 Poly3::times_r2() const {
    const int d = degree_;
    Poly3 out(d + 2);
    for (int a = 0; a <= d; ++a) {
        for (int b = 0; b <= d - a; ++b) {
            const double v = coeff(a, b);
            if (v == 0.0) continue;
            out.coeff(a + 2, b) += v;
            out.coeff(a, b + 2) += v;
            out.coeff(a, b) += v;  // z^2 slot: c grows by 2 implicitly
        }
    }
    return out;
}

void Poly3::add_scaled(const Poly3& other, double s) {
    if (other.degree_ != degree_) throw std::domain_error("Poly3: degree mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
}

void Poly3::scale(double factor) {
    for (auto& c : coeffs_) c *= factor;
}

double Poly3::max_abs_coeff() const {
    double m = 0.0;
    for (auto c : coeffs_) m = std::max(m, std::fabs(c));
    return m;
}

// (2k-1)!! with (-1)!! = 1, as long double to keep the moment ratios exact
// to the last bit for the degrees we use.
static long double double_factorial_odd(int k) {
    long double v = 1.0L;
    for (int i = 1; i <= k; ++i) v *= static_cast<long double>(2 * i - 1);
    return v;
}

double monomial_moment(int a, int b, int c) {
    if (a < 0 || b < 0 || c < 0) throw std::domain_error("monomial_moment: negative exponent");
    if (a % 2 || b % 2 || c % 2) return 0.0;
    const int s = (a + b + c) / 2;
    const long double num = double_factorial_odd(a / 2) * double_factorial_odd(b / 2) *
                            double_factorial_odd(c / 2);
    return static_cast<double>(num / double_factorial_odd(s + 1));
}

double sphere_inner(const Poly3& p, const Poly3& q) {
    const int dp = p.degree(), dq = q.degree();
    long double sum = 0.0L;
    for (int a = 0; a <= dp; ++a) {
        for (int b = 0; b <= dp - a; ++b) {
            const double cp = p.coeff(a, b);
            if (cp == 0.0) continue;
            const int c = dp - a - b;
            for (int a2 = 0; a2 <= dq; ++a2) {
                // Parity screen: only even total exponents contribute.
                if ((a + a2) % 2) continue;
                for (int b2 = 0; b2 <= dq - a2; ++b2) {
                    if ((b + b2) % 2) continue;
                    const int c2 = dq - a2 - b2;
                    if ((c + c2) % 2) continue;
                    const double cq = q.coeff(a2, b2);
                    if (cq == 0.0) continue;
                    sum += static_cast<long double>(cp) * cq *
                           monomial_moment(a + a2, b + b2, c + c2);
                }
            }
        }
    }
    return static_cast<double>(sum);
}

Poly3 harmonic_projection(const Poly3& p) {
    const int m = p.degree();
    Poly3 h = p;
    Poly3 lap = p;
    double cj = 1.0;
    for (int j = 1; 2 * j <= m; ++j) {
        lap = lap.laplacian();
        // Coefficient ladder c_j = -c_{j-1} / (2 j (2m - 2j + 1)) makes the
        // alternating series annihilate the Laplacian term by term.
        cj = -cj / (2.0 * j * (2.0 * m - 2.0 * j + 1.0));
        Poly3 term = lap;
        for (int t = 0; t < j; ++t) term = term.times_r2();
        h.add_scaled(term, cj);
    }
    return h;
}

Poly3 signed_permutation_average(const Poly3& p) {
    const int m = p.degree();
    Poly3 out(m);
    for (int a = 0; a <= m; ++a) {
        for (int b = 0; a + b <= m; ++b) {
            const int c = m - a - b;
            const double coef = p.coeff(a, b);
            if (coef == 0.0) continue;
            // Averaging over the 8 sign choices keeps a monomial only when
            // every exponent is even.
            if (a % 2 != 0 || b % 2 != 0 || c % 2 != 0) continue;
            const double w = coef / 6.0;
            out.coeff(a, b) += w;
            out.coeff(a, c) += w;
            out.coeff(b, a) += w;
            out.coeff(b, c) += w;
            out.coeff(c, a) += w;
            out.coeff(c, b) += w;
        }
    }
    return out;
}

bool lattice_blind(const Poly3& p) {
    // Polynomial-identity test at working precision: the threshold sits far
    // above the ~1e-16 rounding of the average and far below any genuine
    // invariant component.
    const Poly3 average = signed_permutation_average(p);
    return average.max_abs_coeff() <= 1e-12 * std::max(1.0, p.max_abs_coeff());
}

static HarmonicBasis build_basis_impl(int m, bool reversed) {
    if (m < 0) throw std::domain_error("build_basis: negative degree");
    if (m > kBasisDegreeCeiling) throw capacity_error("build_basis: degree exceeds ceiling");

    HarmonicBasis basis;
    basis.degree = m;
    if (m == 0) {
        Poly3 one(0);
        one.coeff(0, 0) = 1.0;
        basis.members.push_back(one);
        return basis;
    }

    // Monomial seeds x^(m-b) y^b (b = 0..m) and x^(m-1-b) y^b z (b = 0..m-1):
    // their harmonic projections span the full 2m+1 dimensional space.
    std::vector<Poly3> seeds;
    for (int b = 0; b <= m; ++b) {
        Poly3 s(m);
        s.coeff(m - b, b) = 1.0;
        seeds.push_back(harmonic_projection(s));
    }
    for (int b = 0; b <= m - 1; ++b) {
        Poly3 s(m);
        s.coeff(m - 1 - b, b) = 1.0;  // remaining exponent 1 goes to z
        seeds.push_back(harmonic_projection(s));
    }
    if (reversed) std::reverse(seeds.begin(), seeds.end());

    // Modified Gram-Schmidt with one re-orthogonalization pass per vector;
    // this keeps the Gram defect at the rounding level even for degree 16+.
    for (auto& v : seeds) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : basis.members) {
                v.add_scaled(e, -sphere_inner(v, e));
            }
        }
        const double nrm2 = sphere_inner(v, v);
        if (!(nrm2 > 1e-24)) throw capacity_error("build_basis: seed set degenerated");
        v.scale(1.0 / std::sqrt(nrm2));
        basis.members.push_back(v);
    }
    return basis;
}

HarmonicBasis build_basis(int m) { return build_basis_impl(m, false); }
HarmonicBasis build_basis_reversed(int m) { return build_basis_impl(m, true); }

std::vector<double> eval_basis(const HarmonicBasis& basis, const std::array<double, 3>& v) {
    const double norm2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if (std::fabs(norm2 - 1.0) > 2e-10)
        throw std::domain_error("eval_basis: point not on the unit sphere");
    std::vector<double> out;
    out.reserve(basis.members.size());
    for (const auto& p : basis.members) out.push_back(p.evaluate(v[0], v[1], v[2]));
    return out;
}

double legendre(int m, double t) {
    if (m < 0) throw std::domain_error("legendre: negative degree");
    if (std::fabs(t) > 1.0 + 1e-12) throw std::domain_error("legendre: |t| > 1");
    t = std::clamp(t, -1.0, 1.0);
    double p0 = 1.0;
    if (m == 0) return p0;
    double p1 = t;
    for (int j = 1; j < m; ++j) {
        const double p2 = ((2.0 * j + 1.0) * t * p1 - j * p0) / (j + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

void legendre_all(int m_max, double t, std::vector<double>& out) {
    if (m_max < 0) throw std::domain_error("legendre_all: negative degree");
    if (std::fabs(t) > 1.0 + 1e-12) throw std::domain_error("legendre_all: |t| > 1");
    t = std::clamp(t, -1.0, 1.0);
    out.resize(static_cast<std::size_t>(m_max) + 1);
    out[0] = 1.0;
    if (m_max == 0) return;
    out[1] = t;
    for (int j = 1; j < m_max; ++j) {
        out[j + 1] = ((2.0 * j + 1.0) * t * out[j] - j * out[j - 1]) / (j + 1.0);
    }
}

double cap_coefficient_closed_form(double r, int m) {
    if (!(r > 0.0) || r > M_PI) throw std::domain_error("cap_coefficient_closed_form: r outside (0, pi]");
    if (m < 0) throw std::domain_error("cap_coefficient_closed_form: negative degree");
    const double c = std::cos(r);
    if (m == 0) return 0.5 * (1.0 - c);
    return (legendre(m - 1, c) - legendre(m + 1, c)) / (2.0 * (2.0 * m + 1.0));
}

static void check_kernel(const ZonalKernel& kernel) {
    switch (kernel.kind) {
        case ZonalKernel::Kind::sharp_cap:
            if (!(kernel.r > 0.0) || kernel.r > M_PI)
                throw std::domain_error("zonal kernel: cap radius outside (0, pi]");
            break;
        case ZonalKernel::Kind::unit_disc:
            if (!(kernel.rho > 0.0) || !(kernel.rho < M_PI / 2))
                throw std::domain_error("zonal kernel: disc radius outside (0, pi/2)");
            break;
        case ZonalKernel::Kind::cap_convolved_disc:
            if (!(kernel.r > 0.0) || kernel.r > M_PI)
                throw std::domain_error("zonal kernel: cap radius outside (0, pi]");
            if (!(kernel.rho > 0.0) || !(kernel.rho < M_PI / 2))
                throw std::domain_error("zonal kernel: disc radius outside (0, pi/2)");
            break;
    }
}

double zonal_transform(const ZonalKernel& kernel, int m) {
    check_kernel(kernel);
    if (m < 0) throw std::domain_error("zonal_transform: negative degree");
    switch (kernel.kind) {
        case ZonalKernel::Kind::sharp_cap:
            return cap_coefficient_closed_form(kernel.r, m);
        case ZonalKernel::Kind::unit_disc: {
            if (m == 0) return 1.0;
            const double mass = 0.5 * (1.0 - std::cos(kernel.rho));
            return cap_coefficient_closed_form(kernel.rho, m) / mass;
        }
        case ZonalKernel::Kind::cap_convolved_disc: {
            const double mass = 0.5 * (1.0 - std::cos(kernel.rho));
            const double disc = (m == 0) ? 1.0 : cap_coefficient_closed_form(kernel.rho, m) / mass;
            return cap_coefficient_closed_form(kernel.r, m) * disc;
        }
    }
    throw std::domain_error("zonal_transform: unknown kernel kind");
}

std::vector<double> zonal_coefficients(const ZonalKernel& kernel, int m_max) {
    check_kernel(kernel);
    if (m_max < 0) throw std::domain_error("zonal_coefficients: negative degree");
    // One Legendre sweep serves every coefficient: T(m) needs P_{m-1}, P_{m+1}.
    std::vector<double> p_r, p_rho;
    const double cr = std::cos(kernel.kind == ZonalKernel::Kind::unit_disc ? kernel.rho : kernel.r);
    legendre_all(m_max + 1, cr, p_r);
    const bool with_disc = kernel.kind == ZonalKernel::Kind::cap_convolved_disc;
    if (with_disc) legendre_all(m_max + 1, std::cos(kernel.rho), p_rho);

    const double cap_mass = 0.5 * (1.0 - cr);
    const double disc_mass = with_disc ? 0.5 * (1.0 - std::cos(kernel.rho)) : 1.0;

    std::vector<double> out(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        double base = (m == 0) ? cap_mass : (p_r[m - 1] - p_r[m + 1]) / (2.0 * (2.0 * m + 1.0));
        if (kernel.kind == ZonalKernel::Kind::unit_disc) {
            base = (m == 0) ? 1.0 : base / cap_mass;
        } else if (with_disc) {
            const double disc =
                (m == 0) ? 1.0
                         : (p_rho[m - 1] - p_rho[m + 1]) / (2.0 * (2.0 * m + 1.0) * disc_mass);
            base *= disc;
        }
        out[static_cast<std::size_t>(m)] = base;
    }
    return out;
}

int default_truncation(double r, double rho) {
    const double scale = (rho > 0.0) ? std::min(r, rho) : r;
    if (!(scale > 0.0)) throw std::domain_error("default_truncation: nonpositive radius");
    return std::max(64, static_cast<int>(std::ceil(20.0 / scale)));
}

}  // namespace spherevar
