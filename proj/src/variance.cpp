#include "spherevar/variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "spherevar/capstat.hpp"
#include "spherevar/errors.hpp"
#include "spherevar/parallel.hpp"
#include "spherevar/quadrature.hpp"
#include "spherevar/rng.hpp"

namespace spherevar {

namespace {

constexpr double kPi = std::numbers::pi;

// Dense dot-product histograms keep the spectrum pass O(N^2 + n M); the
// bucket vector is the memory ceiling.
constexpr std::int64_t kSpectrumShellCeiling = 20'000'000;

void require_positive_shell(const Shell& shell) {
    if (shell.n < 1) throw std::domain_error("shell statistics need n >= 1");
}

std::vector<std::array<double, 3>> unit_points(const Shell& shell) {
    std::vector<std::array<double, 3>> units;
    units.reserve(shell.points.size());
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(shell.n));
    for (const auto& p : shell.points) {
        units.push_back({p[0] * inv_root, p[1] * inv_root, p[2] * inv_root});
    }
    return units;
}

// True for the representative of each antipodal pair {x, -x}.
bool lexicographically_positive(const std::array<std::int64_t, 3>& p) {
    if (p[0] != 0) return p[0] > 0;
    if (p[1] != 0) return p[1] > 0;
    return p[2] > 0;
}

WeylSumTable weyl_table_skeleton(const Shell& shell, const HarmonicBasis& basis) {
    WeylSumTable table;
    table.n = shell.n;
    table.degree = basis.degree;
    table.values.assign(static_cast<std::size_t>(basis.dimension()), 0.0);
    return table;
}

}  // namespace

// Members whose signed-permutation average vanishes have exactly zero shell
// sums; their slots are skipped so they hold 0.0 instead of rounding noise.
std::vector<char> blind_member_flags(const HarmonicBasis& basis) {
    std::vector<char> flags(static_cast<std::size_t>(basis.dimension()), 0);
    for (std::size_t j = 0; j < flags.size(); ++j) {
        if (lattice_blind(basis.members[j])) flags[j] = 1;
    }
    return flags;
}

WeylSumTable weyl_sums(const Shell& shell, const HarmonicBasis& basis) {
    require_positive_shell(shell);
    WeylSumTable table = weyl_table_skeleton(shell, basis);
    const std::vector<char> blind = blind_member_flags(basis);
    // Antipodal bracketing: phi(-x) is the exact IEEE negation of phi(x) for
    // odd degrees (every monomial flips sign with identical rounding), so
    // each bracket is exactly 0 for odd m and exactly 2 phi(x) for even m.
    for (const auto& p : shell.points) {
        if (!lexicographically_positive(p)) continue;
        const double x = static_cast<double>(p[0]);
        const double y = static_cast<double>(p[1]);
        const double z = static_cast<double>(p[2]);
        for (std::size_t j = 0; j < table.values.size(); ++j) {
            if (blind[j]) continue;
            const double plus = basis.members[j].evaluate(x, y, z);
            const double minus = basis.members[j].evaluate(-x, -y, -z);
            table.values[j] += plus + minus;
        }
    }
    const double scale = std::pow(static_cast<double>(shell.n), -0.5 * basis.degree);
    for (double& v : table.values) v *= scale;
    return table;
}

WeylSumTable weyl_sums_normalized(const Shell& shell, const HarmonicBasis& basis) {
    require_positive_shell(shell);
    WeylSumTable table = weyl_table_skeleton(shell, basis);
    const std::vector<char> blind = blind_member_flags(basis);
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(shell.n));
    for (const auto& p : shell.points) {
        if (!lexicographically_positive(p)) continue;
        const double x = p[0] * inv_root, y = p[1] * inv_root, z = p[2] * inv_root;
        for (std::size_t j = 0; j < table.values.size(); ++j) {
            if (blind[j]) continue;
            const double plus = basis.members[j].evaluate(x, y, z);
            const double minus = basis.members[j].evaluate(-x, -y, -z);
            table.values[j] += plus + minus;
        }
    }
    return table;
}

std::vector<double> weyl_power_spectrum(const Shell& shell, int m_max) {
    require_positive_shell(shell);
    if (m_max < 0) throw std::domain_error("spectrum degree must be non-negative");
    if (shell.n > kSpectrumShellCeiling) {
        throw capacity_error("shell too large for the dense dot histogram");
    }
    std::vector<double> spectrum(static_cast<std::size_t>(m_max) + 1, 0.0);
    const auto& pts = shell.points;
    const std::int64_t count = shell.count();
    if (count == 0) return spectrum;

    // bucket[|t|] = number of ordered pairs with dot product +t or -t
    // (t > 0), and with dot exactly 0 for t = 0. The histogram is built from
    // unordered pairs, each standing for two ordered ones, plus the diagonal.
    std::vector<std::int64_t> bucket(static_cast<std::size_t>(shell.n) + 1, 0);
    const std::size_t total = pts.size();
    for (std::size_t i = 0; i < total; ++i) {
        const std::int64_t xi = pts[i][0], yi = pts[i][1], zi = pts[i][2];
        for (std::size_t j = i + 1; j < total; ++j) {
            const std::int64_t dot = xi * pts[j][0] + yi * pts[j][1] + zi * pts[j][2];
            bucket[static_cast<std::size_t>(dot >= 0 ? dot : -dot)] += 2;
        }
    }
    bucket[static_cast<std::size_t>(shell.n)] += count;  // diagonal pairs, dot = n

    // One Legendre recurrence per occupied bucket. For odd m the histogram
    // symmetry c_t = c_{-t} cancels the sum exactly, so odd entries are
    // pinned to zero rather than accumulating rounding noise.
    const double inv_n = 1.0 / static_cast<double>(shell.n);
    std::vector<double> legendre_values(static_cast<std::size_t>(m_max) + 1, 0.0);
    for (std::size_t t = 0; t < bucket.size(); ++t) {
        if (bucket[t] == 0) continue;
        const double weight = static_cast<double>(bucket[t]);
        legendre_all(m_max, static_cast<double>(t) * inv_n, legendre_values);
        for (int m = 0; m <= m_max; m += 2) {
            spectrum[static_cast<std::size_t>(m)] += weight * legendre_values[static_cast<std::size_t>(m)];
        }
    }
    for (int m = 0; m <= m_max; ++m) {
        auto& s = spectrum[static_cast<std::size_t>(m)];
        s = (m % 2 == 1) ? 0.0 : s * (2.0 * m + 1.0);
        // S(m) is a sum of squares; tiny negative rounding is clipped.
        if (s < 0.0) s = 0.0;
    }
    return spectrum;
}

namespace {

// Deviation Z(center) - N sigma for one cap center, sharp or smoothed.
struct DeviationKernel {
    const std::vector<std::array<double, 3>>& units;
    double expected;
    bool sharp;
    double threshold = -2.0;  // sharp: dot cutoff including the boundary slack
    CapOverlap overlap;       // smoothed: intersection profile
    double inv_disc = 0.0;

    double operator()(const std::array<double, 3>& center) const {
        double z = 0.0;
        if (sharp) {
            std::int64_t inside = 0;
            for (const auto& u : units) {
                const double dot = u[0] * center[0] + u[1] * center[1] + u[2] * center[2];
                if (dot >= threshold) ++inside;
            }
            z = static_cast<double>(inside);
        } else {
            for (const auto& u : units) {
                const double dot = u[0] * center[0] + u[1] * center[1] + u[2] * center[2];
                z += overlap.at_cos(dot);
            }
            z *= inv_disc;
        }
        return z - expected;
    }
};

DeviationKernel make_kernel(const Shell& shell, double r, double rho,
                            const std::vector<std::array<double, 3>>& units) {
    if (!(r > 0.0) || !(r <= kPi)) throw std::domain_error("cap radius must lie in (0, pi]");
    if (rho < 0.0) throw std::domain_error("mollifier radius must be non-negative");
    const double sigma = cap_area(r);
    DeviationKernel kernel{units, shell.count() * sigma, rho == 0.0, -2.0, CapOverlap{}, 0.0};
    if (kernel.sharp) {
        kernel.threshold = std::cos(std::min(r + 1e-12, kPi));
    } else {
        if (!(rho < kPi / 2.0)) throw std::domain_error("mollifier radius must lie in (0, pi/2)");
        kernel.overlap = CapOverlap::make(r, rho);
        kernel.inv_disc = 1.0 / cap_area(rho);
    }
    return kernel;
}

}  // namespace

VarianceResult variance_direct(const Shell& shell, double r, double rho,
                               const DirectSampler& sampler, int workers) {
    require_positive_shell(shell);
    const auto units = unit_points(shell);
    const DeviationKernel kernel = make_kernel(shell, r, rho, units);
    const int pool = resolve_workers(workers);

    VarianceResult result;
    result.n = shell.n;
    result.r = r;
    result.rho = rho;
    result.method = VarianceResult::Method::direct;

    if (std::holds_alternative<McSampler>(sampler)) {
        const auto& mc = std::get<McSampler>(sampler);
        if (mc.samples < 1) throw std::domain_error("sample count must be positive");
        constexpr std::int64_t kBlock = 4096;
        const std::int64_t blocks = (mc.samples + kBlock - 1) / kBlock;
        std::vector<std::array<double, 2>> partial(static_cast<std::size_t>(blocks), {0.0, 0.0});
        parallel_indexed(blocks, pool, [&](std::int64_t b) {
            const std::int64_t begin = b * kBlock;
            const std::int64_t end = std::min(mc.samples, begin + kBlock);
            double sum = 0.0, sumsq = 0.0;
            for (std::int64_t i = begin; i < end; ++i) {
                const double d = kernel(sphere_point(mc.seed, static_cast<std::uint64_t>(i)));
                const double g = d * d;
                sum += g;
                sumsq += g * g;
            }
            partial[static_cast<std::size_t>(b)] = {sum, sumsq};
        });
        // Reduce in block order: the result is a pure function of (seed,
        // samples), not of the worker count.
        double sum = 0.0, sumsq = 0.0;
        for (const auto& p : partial) {
            sum += p[0];
            sumsq += p[1];
        }
        const double count = static_cast<double>(mc.samples);
        result.value = sum / count;
        if (mc.samples > 1) {
            const double centered = std::max(0.0, (sumsq - sum * sum / count) / (count - 1.0));
            result.error_estimate = std::sqrt(centered / count);
        }
        result.evaluations = mc.samples;
        return result;
    }

    const auto& quad = std::get<QuadSampler>(sampler);
    if (rho == 0.0) {
        throw std::domain_error(
            "sharp counts require the monte_carlo sampler; the quadrature "
            "integrand must be smooth");
    }
    if (quad.n_theta < 2 || quad.n_phi < 2) {
        throw std::domain_error("quadrature needs at least 2 nodes per axis");
    }
    const GaussLegendre& rule = gauss_legendre(quad.n_theta);
    std::vector<double> rows(static_cast<std::size_t>(quad.n_theta), 0.0);
    parallel_indexed(quad.n_theta, pool, [&](std::int64_t i) {
        const double t = rule.x[static_cast<std::size_t>(i)];
        const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
        double row = 0.0;
        for (int k = 0; k < quad.n_phi; ++k) {
            const double phi = (k + 0.5) * (2.0 * kPi / quad.n_phi);
            const double d = kernel({s * std::cos(phi), s * std::sin(phi), t});
            row += d * d;
        }
        rows[static_cast<std::size_t>(i)] =
            rule.w[static_cast<std::size_t>(i)] * row / quad.n_phi;
    });
    double total = 0.0;
    for (double v : rows) total += v;
    result.value = 0.5 * total;  // GL weights integrate dt over [-1,1], mass 2
    result.error_estimate = 0.0;
    result.evaluations = static_cast<std::int64_t>(quad.n_theta) * quad.n_phi;
    return result;
}

VarianceResult variance_spectral(const Shell& shell, double r, double rho, int truncation) {
    require_positive_shell(shell);
    if (truncation < 2) throw std::domain_error("spectral truncation must be at least 2");
    if (truncation > 100000) throw capacity_error("spectral truncation too large");
    ZonalKernel kernel;
    if (rho == 0.0) {
        kernel = ZonalKernel{ZonalKernel::Kind::sharp_cap, r, 0.0};
    } else {
        kernel = ZonalKernel{ZonalKernel::Kind::cap_convolved_disc, r, rho};
    }
    const int M = truncation;
    const std::vector<double> transform = zonal_coefficients(kernel, 4 * M);
    const std::vector<double> spectrum = weyl_power_spectrum(shell, M);

    VarianceResult result;
    result.n = shell.n;
    result.r = r;
    result.rho = rho;
    result.method = VarianceResult::Method::spectral;
    result.truncation = M;

    double value = 0.0;
    for (int m = 1; m <= M; ++m) {
        const double t = transform[static_cast<std::size_t>(m)];
        value += t * t * spectrum[static_cast<std::size_t>(m)];
    }
    result.value = std::max(0.0, value);

    // Tail bound: S(m, n) <= (2m+1) N^2 for every m, so the dropped tail is
    // at most N^2 sum_{m>M} (2m+1) T(m)^2. Degrees (M, 4M] are summed
    // exactly; beyond 4M we take the smaller of a geometric extrapolation of
    // the two dyadic blocks and the Legendre-envelope bound
    // sum_{m>4M} (2m+1) T(m)^2 <= 1 / (pi sin(r) 4M).
    long double block1 = 0.0L, block2 = 0.0L;
    for (int m = M + 1; m <= 2 * M; ++m) {
        const long double t = transform[static_cast<std::size_t>(m)];
        block1 += (2.0L * m + 1.0L) * t * t;
    }
    for (int m = 2 * M + 1; m <= 4 * M; ++m) {
        const long double t = transform[static_cast<std::size_t>(m)];
        block2 += (2.0L * m + 1.0L) * t * t;
    }
    double rest = 0.0;
    if (block2 > 0.0L) {
        const double inf = std::numeric_limits<double>::infinity();
        double geometric = inf;
        if (block1 > 0.0L) {
            const double q = static_cast<double>(block2 / block1);
            if (q < 0.95) geometric = static_cast<double>(block2) * q / (1.0 - q);
        }
        const double sin_r = std::sin(r);
        const double envelope = sin_r > 0.0 ? 1.0 / (kPi * sin_r * 4.0 * M) : inf;
        rest = std::min(geometric, envelope);
        if (!std::isfinite(rest)) rest = static_cast<double>(block2);  // last resort
    }
    const double nn = static_cast<double>(shell.count());
    result.error_estimate = nn * nn * (static_cast<double>(block1 + block2) + rest);
    return result;
}

double conjecture_ratio(const Shell& shell, double r, const VarianceResult& variance) {
    if (shell.count() == 0) throw std::domain_error("conjecture ratio needs a nonempty shell");
    const double sigma = cap_area(r);
    return variance.value / (static_cast<double>(shell.count()) * sigma);
}

AverageResult average_variance(const AverageOptions& options) {
    if (options.X < 2) throw std::domain_error("window base X must be at least 2");
    if (!(options.delta > -1.0) || !(options.delta < 0.0)) {
        throw std::domain_error("delta must lie in (-1, 0)");
    }
    if (!(options.c > 0.0)) throw std::domain_error("cap-area scale c must be positive");
    if (options.H >= 0 && options.X + options.H > kShellCeiling) {
        throw capacity_error("window extends past the shell ceiling");
    }

    AverageResult result;
    result.X = options.X;
    result.H = options.H;
    result.delta = options.delta;
    result.c = options.c;
    result.rho = options.rho;
    result.sigma = options.c * std::pow(static_cast<double>(options.X), options.delta / 2.0);
    if (!(result.sigma > 0.0) || !(result.sigma < 1.0)) {
        throw std::domain_error("target cap area must lie in (0, 1)");
    }
    result.cap_radius = std::acos(1.0 - 2.0 * result.sigma);

    if (options.H >= 0) {
        result.lo = options.X;
        result.hi = options.X + options.H;
        result.denominator = std::max<std::int64_t>(options.H, 1);
        const double guideline =
            std::pow(static_cast<double>(options.X), 0.75) / std::pow(result.sigma, 0.75);
        result.window_warning = static_cast<double>(options.H) < guideline;
    } else {
        result.lo = 1;
        result.hi = options.X;
        result.denominator = options.X;
    }

    std::vector<std::int64_t> shells;
    for (std::int64_t n = result.lo; n <= result.hi; ++n) {
        if (options.complete_sum || residue_class_member(n)) shells.push_back(n);
    }
    if (shells.empty()) throw std::domain_error("empty window");
    result.eligible = static_cast<std::int64_t>(shells.size());

    result.truncation = options.truncation > 0
                            ? options.truncation
                            : default_truncation(result.cap_radius, options.rho);

    // One slot per shell; reduction in index order keeps the average a pure
    // function of the parameters regardless of the worker count.
    std::vector<std::array<double, 2>> slots(shells.size(), {0.0, 0.0});
    const int pool = resolve_workers(options.workers);
    parallel_indexed(static_cast<std::int64_t>(shells.size()), pool, [&](std::int64_t i) {
        const Shell shell = enumerate_shell(shells[static_cast<std::size_t>(i)]);
        VarianceResult var;
        if (options.method == AverageOptions::Method::spectral) {
            var = variance_spectral(shell, result.cap_radius, options.rho, result.truncation);
        } else {
            std::int64_t samples = options.samples > 0 ? options.samples : 100000;
            const std::uint64_t seed =
                options.seed ^ (static_cast<std::uint64_t>(shell.n) * 0x9E3779B97F4A7C15ULL);
            var = variance_direct(shell, result.cap_radius, options.rho,
                                  McSampler{samples, seed}, 1);
        }
        slots[static_cast<std::size_t>(i)] = {var.value, var.error_estimate};
    });

    double sum = 0.0, tails = 0.0;
    for (const auto& s : slots) {
        sum += s[0];
        tails += s[1];
    }
    result.value = sum / static_cast<double>(result.denominator);
    result.tail_total = tails / static_cast<double>(result.denominator);
    result.ratio = result.value / (std::sqrt(static_cast<double>(options.X)) * result.sigma);
    return result;
}

}  // namespace spherevar
