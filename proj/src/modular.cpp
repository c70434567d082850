#include "spherevar/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spherevar/arith.hpp"
#include "spherevar/errors.hpp"
#include "spherevar/quadrature.hpp"
#include "spherevar/specfun.hpp"

namespace spherevar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Coefficient rows are extended by one shell enumeration per n, so the cache
// cost is O(n_max^2) integer work; the ceiling keeps that near a second.
constexpr std::int64_t kCoefficientCeiling = 20000;

// Envelope |a(n)| <= 9.1 sqrt(2m+1) n^(m/2+1): the shell has at most 9n
// points for n >= 1, each |phi| bounded by sqrt(2m+1) via the addition
// identity, and |phi(l)| = n^(m/2) |phi(l/sqrt(n))| by homogeneity.
double coefficient_envelope_constant(int degree) {
    return 9.1 * std::sqrt(2.0 * degree + 1.0);
}

// Tail bound for the q-series cut after N terms at height y; infinity when
// the term ratio has not yet fallen under 1.
double q_tail_bound(int degree, double y, std::int64_t N) {
    const double power = 0.5 * degree + 1.0;
    const double n1 = static_cast<double>(N + 1);
    const double ratio = std::pow((n1 + 1.0) / n1, power) * std::exp(-kTwoPi * y);
    if (!(ratio < 0.999)) return std::numeric_limits<double>::infinity();
    const double head =
        coefficient_envelope_constant(degree) * std::pow(n1, power) * std::exp(-kTwoPi * y * n1);
    return head / (1.0 - ratio);
}

}  // namespace

std::int64_t q_truncation(int degree, double y, double tol) {
    if (!(y > 0.0)) throw std::domain_error("q-series height must be positive");
    if (!(tol > 0.0)) throw std::domain_error("q-series tolerance must be positive");
    if (degree < 0) throw std::domain_error("degree must be non-negative");
    // Exponential search, then binary refinement; the bound is monotone in N.
    std::int64_t hi = 1;
    while (hi < kCoefficientCeiling && !(q_tail_bound(degree, y, hi) <= tol)) hi *= 2;
    if (!(q_tail_bound(degree, y, hi) <= tol)) {
        throw capacity_error("q-series truncation exceeds the coefficient ceiling");
    }
    std::int64_t lo = hi / 2;  // bound(lo) > tol or lo == 0
    while (lo + 1 < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (q_tail_bound(degree, y, mid) <= tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// ---------------------------------------------------------------------------
// ThetaFamily
// ---------------------------------------------------------------------------

ThetaFamily::ThetaFamily(int degree)
    : basis_(build_basis(degree)),
      null_(static_cast<std::size_t>(basis_.dimension()), 0),
      rows_(static_cast<std::size_t>(basis_.dimension())),
      norms_(static_cast<std::size_t>(basis_.dimension()), 0.0),
      norm_known_(static_cast<std::size_t>(basis_.dimension()), 0) {
    // Shell sums of phi equal shell sums of its signed-permutation average,
    // so a vanishing average certifies a = 0 for every n.
    for (int j = 0; j < basis_.dimension(); ++j) {
        if (lattice_blind(basis_.members[static_cast<std::size_t>(j)])) {
            null_[static_cast<std::size_t>(j)] = 1;
        }
    }
}

void ThetaFamily::require_index(int j) const {
    if (j < 0 || j >= dimension()) throw std::domain_error("harmonic index out of range");
}

void ThetaFamily::extend_locked(std::int64_t n_max) const {
    if (n_max > kCoefficientCeiling) {
        throw capacity_error("theta coefficient cache ceiling exceeded");
    }
    const auto have = static_cast<std::int64_t>(rows_[0].size());
    if (n_max <= have) return;
    for (auto& row : rows_) row.resize(static_cast<std::size_t>(n_max), 0.0);
    const int dim = dimension();
    for (std::int64_t n = have + 1; n <= n_max; ++n) {
        const Shell shell = enumerate_shell(n);
        // Certified-null series keep exact zeros; the rest accumulate lattice
        // sums with antipodal bracketing so odd-degree cancellation would be
        // exact too (for even degrees the bracket simply doubles).
        for (const auto& p : shell.points) {
            if (p[0] != 0 ? p[0] < 0 : (p[1] != 0 ? p[1] < 0 : p[2] < 0)) continue;
            const double x = static_cast<double>(p[0]);
            const double y = static_cast<double>(p[1]);
            const double z = static_cast<double>(p[2]);
            for (int j = 0; j < dim; ++j) {
                if (null_[static_cast<std::size_t>(j)]) continue;
                const auto& poly = basis_.members[static_cast<std::size_t>(j)];
                rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(n - 1)] +=
                    poly.evaluate(x, y, z) + poly.evaluate(-x, -y, -z);
            }
        }
    }
}

void ThetaFamily::ensure(std::int64_t n_max) const {
    if (n_max < 1) return;
    std::lock_guard<std::mutex> lock(mutex_);
    extend_locked(n_max);
}

std::int64_t ThetaFamily::cached_limit() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<std::int64_t>(rows_[0].size());
}

double ThetaFamily::coefficient(int j, std::int64_t n) const {
    require_index(j);
    if (n < 1) throw std::domain_error("theta coefficients are indexed by n >= 1");
    std::lock_guard<std::mutex> lock(mutex_);
    extend_locked(n);
    return rows_[static_cast<std::size_t>(j)][static_cast<std::size_t>(n - 1)];
}

double ThetaFamily::normalized_coefficient(int j, std::int64_t n) const {
    const double a = coefficient(j, n);
    const double exponent = -0.5 * (weight() - 1.0);
    return a * std::pow(static_cast<double>(n), exponent);
}

std::vector<double> ThetaFamily::coefficient_row(int j, std::int64_t n_max) const {
    require_index(j);
    if (n_max < 0) throw std::domain_error("coefficient cutoff must be non-negative");
    std::lock_guard<std::mutex> lock(mutex_);
    if (n_max > 0) extend_locked(n_max);
    const auto& row = rows_[static_cast<std::size_t>(j)];
    return std::vector<double>(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n_max));
}

bool ThetaFamily::identically_zero(int j) const {
    require_index(j);
    return null_[static_cast<std::size_t>(j)] != 0;
}

double ThetaFamily::l2_norm_squared(int j) const {
    require_index(j);
    if (null_[static_cast<std::size_t>(j)]) return 0.0;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (norm_known_[static_cast<std::size_t>(j)]) {
            return norms_[static_cast<std::size_t>(j)];
        }
    }
    const double value = theta_l2(*this, j, ThetaGrid{});
    std::lock_guard<std::mutex> lock(mutex_);
    norms_[static_cast<std::size_t>(j)] = value;
    norm_known_[static_cast<std::size_t>(j)] = 1;
    return value;
}

double theta_coefficient(const ThetaFamily& family, int j, std::int64_t n) {
    return family.coefficient(j, n);
}

double normalized_coefficient(const ThetaFamily& family, int j, std::int64_t n) {
    return family.normalized_coefficient(j, n);
}

// ---------------------------------------------------------------------------
// q-series evaluation
// ---------------------------------------------------------------------------

namespace {

// Core evaluator without the public Im floor; the fundamental-domain
// quadrature visits heights below it and compensates with longer series.
std::complex<double> eval_series(const ThetaFamily& family, int j, std::complex<double> z,
                                 double tol) {
    const double y = z.imag();
    if (!(y > 0.0)) throw std::domain_error("theta series need Im z > 0");
    const std::int64_t cut = q_truncation(family.degree(), y, tol);
    const std::vector<double> row = family.coefficient_row(j, cut);
    // Reduce x mod 1 so the period-1 identity is exact bit for bit.
    const double xr = z.real() - std::floor(z.real());
    const double decay = std::exp(-kTwoPi * y);
    const std::complex<double> rot = std::polar(1.0, kTwoPi * xr);
    std::complex<double> phase = rot;
    double radial = decay;
    std::complex<double> sum{0.0, 0.0};
    for (std::int64_t n = 1; n <= cut; ++n) {
        const double a = row[static_cast<std::size_t>(n - 1)];
        if (a != 0.0) sum += a * radial * phase;
        phase *= rot;
        radial *= decay;
    }
    return sum;
}

}  // namespace

std::complex<double> theta_eval(const ThetaFamily& family, int j, std::complex<double> z,
                                double tol) {
    if (!(z.imag() >= kThetaYMin - 1e-15)) {
        throw std::domain_error("theta_eval requires Im z >= 0.05");
    }
    if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
    return eval_series(family, j, z, tol);
}

// ---------------------------------------------------------------------------
// Coset geometry
// ---------------------------------------------------------------------------

std::complex<double> CosetRep::apply(std::complex<double> z) const {
    const double a = mat[0][0], b = mat[0][1], c = mat[1][0], d = mat[1][1];
    return (a * z + b) / (c * z + d);
}

std::array<CosetRep, 6> coset_reps() {
    // Images of P1(Z/4): the identity, S, ST, ST^2, ST^3, and ST^2 S.
    return {CosetRep{{{{1, 0}, {0, 1}}}},   CosetRep{{{{0, -1}, {1, 0}}}},
            CosetRep{{{{0, -1}, {1, 1}}}},  CosetRep{{{{0, -1}, {1, 2}}}},
            CosetRep{{{{0, -1}, {1, 3}}}},  CosetRep{{{{-1, 0}, {2, -1}}}}};
}

bool same_coset(const CosetRep& g1, const CosetRep& g2) {
    // c-entry of g1 g2^{-1}, with g2^{-1} = [[d, -b], [-c, a]].
    const long long c = static_cast<long long>(g1.mat[1][0]) * g2.mat[1][1] -
                        static_cast<long long>(g1.mat[1][1]) * g2.mat[1][0];
    return c % 4 == 0;
}

// ---------------------------------------------------------------------------
// L2 norm over the level-4 fundamental domain
// ---------------------------------------------------------------------------

namespace {

void validate_grid(const ThetaGrid& grid) {
    if (grid.x_nodes < 2 || grid.y_nodes < 2) {
        throw std::domain_error("grid needs at least 2 nodes per axis");
    }
    if (!(grid.y_max > 2.0)) throw std::domain_error("y_max must exceed the domain bulk");
    if (!(grid.y_min > 0.0) || !(grid.y_min < 1.0)) {
        throw std::domain_error("y_min must lie in (0, 1)");
    }
    if (!(grid.q_tol > 0.0)) throw std::domain_error("q_tol must be positive");
}

// Panel breakpoints from `start` upward: two quarter-width steps, then
// doubling, clipped at `stop`. Resolves the e^(-4 pi y) decay scale.
std::vector<double> panel_breaks(double start, double stop) {
    std::vector<double> breaks{start};
    double step = 0.25;
    double next = start + step;
    while (next < stop) {
        breaks.push_back(next);
        step *= 2.0;
        next += step;
    }
    breaks.push_back(stop);
    return breaks;
}

}  // namespace

double theta_l2(const ThetaFamily& family, int j, const ThetaGrid& grid) {
    validate_grid(grid);
    if (family.identically_zero(j)) return 0.0;

    const double k = family.weight();
    const auto cosets = coset_reps();
    const GaussLegendre& gx = gauss_legendre(grid.x_nodes);
    const GaussLegendre& gy = gauss_legendre(grid.y_nodes);

    // Integrand in unfolded form: sum over coset translates gamma_i of
    // |theta(gamma_i w)|^2 Im(gamma_i w)^k / (Im w)^2, integrated over the
    // truncated standard fundamental domain in w. `first` skips the identity
    // term for the extension panels above y_max.
    const auto integrand = [&](std::complex<double> w, std::size_t first) {
        double total = 0.0;
        for (std::size_t i = first; i < cosets.size(); ++i) {
            const std::complex<double> gw = cosets[i].apply(w);
            const double value = std::abs(eval_series(family, j, gw, grid.q_tol));
            total += value * value * std::pow(gw.imag(), k);
        }
        return total / (w.imag() * w.imag());
    };

    double base = 0.0;
    for (int ix = 0; ix < grid.x_nodes; ++ix) {
        const double u = 0.5 * gx.x[static_cast<std::size_t>(ix)];  // [-1/2, 1/2]
        const double wu = 0.5 * gx.w[static_cast<std::size_t>(ix)];
        const double y0 = std::sqrt(std::max(0.0, 1.0 - u * u));
        const std::vector<double> breaks = panel_breaks(y0, grid.y_max);
        double column = 0.0;
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
            const double half = 0.5 * (breaks[p + 1] - breaks[p]);
            const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
            for (int iy = 0; iy < grid.y_nodes; ++iy) {
                const double y = mid + half * gy.x[static_cast<std::size_t>(iy)];
                column += half * gy.w[static_cast<std::size_t>(iy)] * integrand({u, y}, 0);
            }
        }
        base += wu * column;
    }

    // Identity coset above y_max: the x-integral over the unit period is
    // Parseval-exact, leaving sum_n a(n)^2 int_{y_max}^inf y^(k-2) e^(-4 pi n y) dy.
    const std::int64_t cut = q_truncation(family.degree(), grid.y_max, grid.q_tol);
    const std::vector<double> row = family.coefficient_row(j, cut);
    double tail = 0.0;
    for (std::int64_t n = 1; n <= cut; ++n) {
        const double a = row[static_cast<std::size_t>(n - 1)];
        if (a == 0.0) continue;
        const double g = 4.0 * kPi * static_cast<double>(n);
        tail += a * a * upper_gamma(k - 1.0, g * grid.y_max) * std::pow(g, -(k - 1.0));
    }

    // Non-identity cosets above y_max: adaptive doubling panels until the
    // contribution is negligible against the running total.
    double extension = 0.0;
    double lo = grid.y_max;
    for (int round = 0; round < 5; ++round) {
        const double hi = 2.0 * lo;
        double panel = 0.0;
        for (int ix = 0; ix < grid.x_nodes; ++ix) {
            const double u = 0.5 * gx.x[static_cast<std::size_t>(ix)];
            const double wu = 0.5 * gx.w[static_cast<std::size_t>(ix)];
            const double half = 0.5 * (hi - lo);
            const double mid = 0.5 * (hi + lo);
            double column = 0.0;
            for (int iy = 0; iy < grid.y_nodes; ++iy) {
                const double y = mid + half * gy.x[static_cast<std::size_t>(iy)];
                column += half * gy.w[static_cast<std::size_t>(iy)] * integrand({u, y}, 1);
            }
            panel += wu * column;
        }
        extension += panel;
        const double scale = std::max(base + tail + extension, 1e-300);
        if (panel <= 5e-4 * scale) break;
        lo = hi;
    }
    return base + tail + extension;
}

double invariance_defect(const ThetaFamily& family, int j, std::complex<double> z,
                         const std::array<std::array<int, 2>, 2>& gamma, double tol) {
    const long long det = static_cast<long long>(gamma[0][0]) * gamma[1][1] -
                          static_cast<long long>(gamma[0][1]) * gamma[1][0];
    if (det != 1) throw std::domain_error("gamma must have determinant 1");
    if (gamma[1][0] % 4 != 0) throw std::domain_error("gamma must have c divisible by 4");
    const CosetRep rep{gamma};
    const std::complex<double> gz = rep.apply(z);
    const double k = family.weight();
    const double at_z = std::abs(theta_eval(family, j, z, tol));
    const double at_gz = std::abs(theta_eval(family, j, gz, tol));
    return std::abs(at_gz * at_gz * std::pow(gz.imag(), k) -
                    at_z * at_z * std::pow(z.imag(), k));
}

// ---------------------------------------------------------------------------
// Rankin-Selberg
// ---------------------------------------------------------------------------

RankinSelbergResult rankin_selberg_core(const std::vector<double>& coefficients, int degree,
                                        double s, const ThetaGrid& grid) {
    validate_grid(grid);
    if (!(s > 1.0)) throw std::domain_error("Rankin-Selberg check needs s > 1");
    const double k = theta_weight(degree);
    const double w = s + k - 1.0;  // Dirichlet exponent; y-power is w - 1
    const auto N = static_cast<std::int64_t>(coefficients.size());

    double head = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double a = coefficients[static_cast<std::size_t>(n - 1)];
        head += a * a * std::pow(static_cast<double>(n), -w);
    }
    if (head == 0.0) return {0.0, 0.0, 0.0};
    const double lhs = std::exp(std::lgamma(w) - w * std::log(4.0 * kPi)) * head;

    // Strip quadrature of int_0^1 int_{y_min}^{y_max} |theta_N|^2 y^(w-1) dx dy.
    // The x-integral of the truncated series is a trigonometric polynomial
    // with frequencies below N_act, so the equispaced x-average with more
    // than 2 N_act points is exact; only the y-quadrature carries error.
    const GaussLegendre& gy = gauss_legendre(grid.y_nodes);
    std::vector<double> breaks{grid.y_min};
    while (breaks.back() < grid.y_max) {
        breaks.push_back(std::min(breaks.back() * 2.0, grid.y_max));
    }
    double strip = 0.0;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        const double mid = 0.5 * (breaks[p + 1] + breaks[p]);
        for (int iy = 0; iy < grid.y_nodes; ++iy) {
            const double y = mid + half * gy.x[static_cast<std::size_t>(iy)];
            const std::int64_t n_act =
                std::min<std::int64_t>(N, q_truncation(degree, y, grid.q_tol * 1e-2));
            const auto nx = static_cast<std::int64_t>(2 * n_act + 2);
            // Radial parts and per-n unit rotations for the equispaced sweep.
            std::vector<double> radial(static_cast<std::size_t>(n_act));
            std::vector<std::complex<double>> step(static_cast<std::size_t>(n_act));
            std::vector<std::complex<double>> phase(static_cast<std::size_t>(n_act),
                                                    {1.0, 0.0});
            const double decay = std::exp(-kTwoPi * y);
            double q = decay;
            for (std::int64_t n = 1; n <= n_act; ++n) {
                radial[static_cast<std::size_t>(n - 1)] =
                    coefficients[static_cast<std::size_t>(n - 1)] * q;
                q *= decay;
                step[static_cast<std::size_t>(n - 1)] =
                    std::polar(1.0, kTwoPi * static_cast<double>(n) / static_cast<double>(nx));
            }
            double mean_sq = 0.0;
            for (std::int64_t t = 0; t < nx; ++t) {
                std::complex<double> theta{0.0, 0.0};
                for (std::size_t idx = 0; idx < radial.size(); ++idx) {
                    if (radial[idx] != 0.0) theta += radial[idx] * phase[idx];
                    phase[idx] *= step[idx];
                }
                mean_sq += std::norm(theta);
            }
            mean_sq /= static_cast<double>(nx);
            strip += half * gy.w[static_cast<std::size_t>(iy)] * mean_sq * std::pow(y, w - 1.0);
        }
    }

    // Exact incomplete-gamma corrections for y outside [y_min, y_max]:
    // int y^(w-1) e^(-4 pi n y) dy over each missing range.
    double corrections = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double a = coefficients[static_cast<std::size_t>(n - 1)];
        if (a == 0.0) continue;
        const double g = 4.0 * kPi * static_cast<double>(n);
        const double scale = a * a * std::exp(-w * std::log(g));
        corrections += scale * (lower_gamma(w, g * grid.y_min) + upper_gamma(w, g * grid.y_max));
    }

    const double rhs = strip + corrections;
    const double denom = std::max(std::abs(lhs), std::abs(rhs));
    return {lhs, rhs, denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0};
}

RankinSelbergResult rankin_selberg_check(const ThetaFamily& family, int j, double s,
                                         std::int64_t N, const ThetaGrid& grid) {
    if (N < 0) throw std::domain_error("coefficient cutoff must be non-negative");
    if (!(s > 1.0)) throw std::domain_error("Rankin-Selberg check needs s > 1");
    const std::vector<double> row = family.coefficient_row(j, N);
    return rankin_selberg_core(row, family.degree(), s, grid);
}

}  // namespace spherevar
