#include "spherevar/lseries.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spherevar/arith.hpp"
#include "spherevar/variance.hpp"

namespace spherevar {

namespace {

constexpr double kPi = std::numbers::pi;

bool near_integer(double t) { return std::abs(t - std::round(t)) < 1e-12; }

bool near_half_integer(double t) { return near_integer(2.0 * t) && !near_integer(t); }

double gamma_value(double t) {
    if (t <= 0.0 && near_integer(t)) {
        throw std::domain_error("gamma factor evaluated at a pole");
    }
    if (t > 0.0 && near_half_integer(t)) return gamma_half(t);
    if (t > 0.0 && near_integer(t)) return gamma_half(std::round(t));
    return std::tgamma(t);
}

double log_gamma_value(double t) {
    if (t <= 0.0 && near_integer(t)) {
        throw std::domain_error("gamma factor evaluated at a pole");
    }
    if (t > 0.0 && near_half_integer(t)) return log_gamma_half(t);
    if (t > 0.0 && near_integer(t)) return log_gamma_half(std::round(t));
    return std::lgamma(t);
}

void require_even_degree(const ThetaFamily& family) {
    if (family.degree() % 2 == 1) {
        throw std::domain_error("odd degree: the theta series vanishes identically");
    }
}

double positive_norm(const ThetaFamily& family, int j) {
    const double norm2 = family.l2_norm_squared(j);
    if (!(norm2 > 0.0)) throw std::domain_error("zero theta norm");
    return norm2;
}

}  // namespace

DirichletPartial dirichlet_partial(const ThetaFamily& family, int j, double s,
                                   std::int64_t N) {
    if (!(s > 1.0)) throw std::domain_error("Dirichlet series needs s > 1");
    if (N < 0) throw std::domain_error("cutoff must be non-negative");
    require_even_degree(family);
    const double norm2 = positive_norm(family, j);

    DirichletPartial partial;
    partial.degree = family.degree();
    partial.index = j;
    partial.s = s;
    partial.N = N;

    const double k = family.weight();
    family.ensure(N);
    double envelope = 0.0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double a = family.coefficient(j, n);
        const double nn = static_cast<double>(n);
        const double b2 = a * a * std::pow(nn, -(k - 1.0));
        partial.value += b2 / (norm2 * std::pow(nn, s));
        envelope = std::max(envelope, b2 / std::sqrt(nn));
    }
    if (N == 0) {
        partial.tail_bound = std::numeric_limits<double>::infinity();
    } else if (s > 1.5) {
        partial.tail_bound = envelope / norm2 *
                             std::pow(static_cast<double>(N), 1.5 - s) / (s - 1.5);
    } else {
        partial.tail_bound = std::numeric_limits<double>::infinity();
    }
    return partial;
}

double gamma_factor(double k, double s) { return gamma_value(s) * gamma_value(s + k - 1.0); }

double log_gamma_factor(double k, double s) {
    return log_gamma_value(s) + log_gamma_value(s + k - 1.0);
}

double zeta_direct(double s) {
    if (!(s > 1.0)) throw std::domain_error("zeta by direct summation needs s > 1");
    constexpr std::int64_t kHead = 20000;
    double sum = 0.0;
    // Ascending n would be natural; descending adds the small terms first.
    for (std::int64_t n = kHead; n >= 1; --n) {
        sum += std::pow(static_cast<double>(n), -s);
    }
    // Euler-Maclaurin completion; the next omitted term is O(s^3 N^{-s-3}).
    const double N = static_cast<double>(kHead);
    sum += std::pow(N, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(N, -s) +
           s / 12.0 * std::pow(N, -s - 1.0);
    return sum;
}

double completed_lambda_partial(const ThetaFamily& family, int j, double s, std::int64_t N) {
    const DirichletPartial partial = dirichlet_partial(family, j, s, N);
    const double k = family.weight();
    const double scale = std::exp(-2.0 * (s + k - 1.0) * std::log(2.0 * kPi));
    return zeta_direct(2.0 * s) * scale * gamma_factor(k, s) * partial.value;
}

double fx_sum(std::int64_t X, int m) {
    if (X < 1) throw std::domain_error("fx_sum needs X >= 1");
    if (m < 0) throw std::domain_error("degree must be non-negative");
    if (m % 2 == 1) return 0.0;
    // Through the theta family so certified-null members contribute exact
    // zeros: sum_j b_j(n)^2 = sum_j a_j(n)^2 n^{-(k-1)} = S(m,n)/sqrt(n).
    const ThetaFamily family(m);
    family.ensure(X);
    const double k = theta_weight(m);
    double total = 0.0;
    for (std::int64_t n = 1; n <= X; ++n) {
        const double scale = std::pow(static_cast<double>(n), -(k - 1.0));
        for (int j = 0; j < family.dimension(); ++j) {
            if (family.identically_zero(j)) continue;
            const double a = family.coefficient(j, n);
            total += a * a * scale;
        }
    }
    return total;
}

ResidueEstimate residue_estimate(const ThetaFamily& family, int j, std::int64_t X) {
    if (X < 100) throw std::domain_error("residue estimate needs X >= 100");
    require_even_degree(family);
    const double norm2 = positive_norm(family, j);
    const double k = family.weight();
    family.ensure(X);
    double sum = 0.0;
    for (std::int64_t n = 1; n <= X; ++n) {
        const double a = family.coefficient(j, n);
        sum += a * a * std::pow(static_cast<double>(n), -(k - 1.0));
    }
    ResidueEstimate estimate;
    estimate.raw = sum / (norm2 * static_cast<double>(X));
    estimate.c_hat = estimate.raw * std::pow(4.0 * kPi, -k) * gamma_half(k);
    return estimate;
}

}  // namespace spherevar
