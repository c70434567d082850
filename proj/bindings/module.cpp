#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spherevar/arith.hpp"
#include "spherevar/capstat.hpp"
#include "spherevar/errors.hpp"
#include "spherevar/harmonics.hpp"
#include "spherevar/kloosterman.hpp"
#include "spherevar/lseries.hpp"
#include "spherevar/modular.hpp"
#include "spherevar/variance.hpp"

namespace py = pybind11;
using namespace spherevar;

namespace {

ZonalKernel make_kernel(const std::string& kind, double r, double rho) {
    ZonalKernel kernel;
    if (kind == "sharp_cap") {
        kernel.kind = ZonalKernel::Kind::sharp_cap;
    } else if (kind == "unit_disc") {
        kernel.kind = ZonalKernel::Kind::unit_disc;
    } else if (kind == "cap_convolved_disc") {
        kernel.kind = ZonalKernel::Kind::cap_convolved_disc;
    } else {
        throw std::domain_error("kernel kind must be sharp_cap, unit_disc, or cap_convolved_disc");
    }
    kernel.r = r;
    kernel.rho = rho;
    return kernel;
}

const char* method_name(VarianceResult::Method method) {
    return method == VarianceResult::Method::direct ? "direct" : "spectral";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lattice points on spheres: shell enumeration, cap-count variance, "
              "theta series, Kloosterman sums.";

    py::register_exception<capacity_error>(m, "CapacityError", PyExc_RuntimeError);

    // ------------------------------------------------------------------ arith
    py::class_<Shell>(m, "Shell")
        .def_readonly("n", &Shell::n)
        .def_readonly("points", &Shell::points)
        .def("count", &Shell::count)
        .def("eligible", &Shell::eligible)
        .def("__len__", &Shell::count)
        .def("__repr__", [](const Shell& shell) {
            std::ostringstream out;
            out << "Shell(n=" << shell.n << ", count=" << shell.count() << ")";
            return out.str();
        });

    m.def("enumerate_shell", &enumerate_shell, py::arg("n"),
          py::call_guard<py::gil_scoped_release>(),
          "All integer points on x^2 + y^2 + z^2 = n, lexicographic.");
    m.def("residue_class_member", &residue_class_member, py::arg("n"),
          "True iff n >= 1 and n mod 8 is none of 0, 4, 7.");
    m.def("isqrt64", &isqrt64, py::arg("n"));
    m.def("divisor_count", &divisor_count, py::arg("n"));
    m.def("jacobi_symbol", &jacobi_symbol, py::arg("a"), py::arg("d"));
    m.def("mod_inverse", &mod_inverse, py::arg("d"), py::arg("c"));
    m.def("gamma_half", &gamma_half, py::arg("t"),
          "Gamma(t) for t > 0 with 2t integral.");

    // -------------------------------------------------------------- harmonics
    m.def("legendre", &legendre, py::arg("m"), py::arg("t"));
    m.def("basis_dimension", [](int degree) { return build_basis(degree).dimension(); },
          py::arg("degree"), "Dimension 2m+1 of the degree-m harmonic space.");
    m.def("zonal_transform",
          [](const std::string& kind, double r, double rho, int order) {
              return zonal_transform(make_kernel(kind, r, rho), order);
          },
          py::arg("kind"), py::arg("r"), py::arg("rho"), py::arg("m"),
          "T(f)(m) = (1/2) Integral f(t) P_m(t) dt for a zonal kernel.");
    m.def("zonal_coefficients",
          [](const std::string& kind, double r, double rho, int m_max) {
              return zonal_coefficients(make_kernel(kind, r, rho), m_max);
          },
          py::arg("kind"), py::arg("r"), py::arg("rho"), py::arg("m_max"));
    m.def("cap_coefficient_closed_form", &cap_coefficient_closed_form,
          py::arg("r"), py::arg("m"));
    m.def("default_truncation", &default_truncation, py::arg("r"), py::arg("rho"));

    // ---------------------------------------------------------------- capstat
    m.def("cap_area", &cap_area, py::arg("r"),
          "sigma-area (1 - cos r) / 2 of a cap of radius r in (0, pi].");
    m.def("geodesic_distance", &geodesic_distance, py::arg("u"), py::arg("v"));
    m.def("count_in_cap",
          [](const Shell& shell, const std::array<double, 3>& center, double r) {
              return count_in_cap(shell, SphericalCap{center, r});
          },
          py::arg("shell"), py::arg("center"), py::arg("r"),
          "Number of normalized shell points inside the closed cap.");
    m.def("smoothed_count",
          [](const Shell& shell, const std::array<double, 3>& center, double r, double rho) {
              return smoothed_count(shell, SphericalCap{center, r}, rho);
          },
          py::arg("shell"), py::arg("center"), py::arg("r"), py::arg("rho"));
    m.def("cap_intersection_area", &cap_intersection_area,
          py::arg("r1"), py::arg("r2"), py::arg("theta"));

    // --------------------------------------------------------------- variance
    py::class_<VarianceResult>(m, "VarianceResult")
        .def_readonly("n", &VarianceResult::n)
        .def_readonly("r", &VarianceResult::r)
        .def_readonly("rho", &VarianceResult::rho)
        .def_readonly("value", &VarianceResult::value)
        .def_readonly("error_estimate", &VarianceResult::error_estimate)
        .def_readonly("truncation", &VarianceResult::truncation)
        .def_readonly("evaluations", &VarianceResult::evaluations)
        .def_property_readonly("method",
                               [](const VarianceResult& result) {
                                   return method_name(result.method);
                               })
        .def("__repr__", [](const VarianceResult& result) {
            std::ostringstream out;
            out << "VarianceResult(n=" << result.n << ", value=" << result.value
                << ", error_estimate=" << result.error_estimate << ", method="
                << method_name(result.method) << ")";
            return out.str();
        });

    m.def("weyl_power_spectrum", &weyl_power_spectrum, py::arg("shell"), py::arg("m_max"),
          py::call_guard<py::gil_scoped_release>(),
          "S(m, n) = sum_j W_{m,j}(n)^2 for m = 0..m_max.");
    m.def("variance_spectral", &variance_spectral,
          py::arg("shell"), py::arg("r"), py::arg("rho") = 0.0, py::arg("truncation") = 0,
          py::call_guard<py::gil_scoped_release>(),
          "Var = sum_{m>=1} T(m)^2 S(m, n), truncation 0 meaning the default rule.");
    m.def("variance_mc",
          [](const Shell& shell, double r, double rho, std::int64_t samples,
             std::uint64_t seed, int workers) {
              return variance_direct(shell, r, rho, McSampler{samples, seed}, workers);
          },
          py::arg("shell"), py::arg("r"), py::arg("rho") = 0.0, py::arg("samples") = 100000,
          py::arg("seed") = 0, py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "Monte Carlo cap-count variance; deterministic in (samples, seed), "
          "independent of worker count.");
    m.def("variance_quadrature",
          [](const Shell& shell, double r, double rho, int n_theta, int n_phi) {
              return variance_direct(shell, r, rho, QuadSampler{n_theta, n_phi});
          },
          py::arg("shell"), py::arg("r"), py::arg("rho"), py::arg("n_theta") = 64,
          py::arg("n_phi") = 128, py::call_guard<py::gil_scoped_release>(),
          "Product-quadrature variance; smoothed integrands only.");
    m.def("conjecture_ratio", &conjecture_ratio,
          py::arg("shell"), py::arg("r"), py::arg("variance"),
          "Var / (N_n sigma(Omega)).");

    py::class_<AverageResult>(m, "AverageResult")
        .def_readonly("X", &AverageResult::X)
        .def_readonly("H", &AverageResult::H)
        .def_readonly("delta", &AverageResult::delta)
        .def_readonly("c", &AverageResult::c)
        .def_readonly("rho", &AverageResult::rho)
        .def_readonly("sigma", &AverageResult::sigma)
        .def_readonly("cap_radius", &AverageResult::cap_radius)
        .def_readonly("value", &AverageResult::value)
        .def_readonly("ratio", &AverageResult::ratio)
        .def_readonly("tail_total", &AverageResult::tail_total)
        .def_readonly("lo", &AverageResult::lo)
        .def_readonly("hi", &AverageResult::hi)
        .def_readonly("eligible", &AverageResult::eligible)
        .def_readonly("denominator", &AverageResult::denominator)
        .def_readonly("window_warning", &AverageResult::window_warning)
        .def_readonly("truncation", &AverageResult::truncation)
        .def("__repr__", [](const AverageResult& result) {
            std::ostringstream out;
            out << "AverageResult(X=" << result.X << ", H=" << result.H
                << ", value=" << result.value << ", ratio=" << result.ratio << ")";
            return out.str();
        });

    m.def(
        "average_variance",
        [](std::int64_t X, std::int64_t H, double delta, double c, double rho,
           const std::string& method, int truncation, std::int64_t samples,
           std::uint64_t seed, bool complete_sum, int workers) {
            AverageOptions options;
            options.X = X;
            options.H = H;
            options.delta = delta;
            options.c = c;
            options.rho = rho;
            if (method == "spectral") {
                options.method = AverageOptions::Method::spectral;
            } else if (method == "mc") {
                options.method = AverageOptions::Method::monte_carlo;
            } else {
                throw std::domain_error("method must be spectral or mc");
            }
            options.truncation = truncation;
            options.samples = samples;
            options.seed = seed;
            options.complete_sum = complete_sum;
            options.workers = workers;
            return average_variance(options);
        },
        py::arg("X"), py::arg("H") = -1, py::arg("delta") = -0.5, py::arg("c") = 1.0,
        py::arg("rho") = 0.0, py::arg("method") = "spectral", py::arg("truncation") = 0,
        py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("complete_sum") = false,
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>(),
        "Windowed average of Var over eligible n in [X, X+H], or [1, X] when H < 0; "
        "the divisor is the window length. Cap area is c X^(delta/2).");

    // ---------------------------------------------------------------- modular
    py::class_<ThetaFamily>(m, "ThetaFamily")
        .def(py::init<int>(), py::arg("degree"),
             "The 2m+1 theta series attached to one degree-m harmonic basis.")
        .def_property_readonly("degree", &ThetaFamily::degree)
        .def_property_readonly("weight", &ThetaFamily::weight)
        .def_property_readonly("dimension", &ThetaFamily::dimension)
        .def("ensure", &ThetaFamily::ensure, py::arg("n_max"),
             py::call_guard<py::gil_scoped_release>())
        .def("cached_limit", &ThetaFamily::cached_limit)
        .def("coefficient", &ThetaFamily::coefficient, py::arg("j"), py::arg("n"),
             py::call_guard<py::gil_scoped_release>(),
             "a_j(n) = sum over |l|^2 = n of phi_{m,j}(l).")
        .def("normalized_coefficient", &ThetaFamily::normalized_coefficient,
             py::arg("j"), py::arg("n"), py::call_guard<py::gil_scoped_release>(),
             "b_j(n) = a_j(n) n^{-(k-1)/2}.")
        .def("coefficient_row", &ThetaFamily::coefficient_row, py::arg("j"), py::arg("n_max"),
             py::call_guard<py::gil_scoped_release>())
        .def("identically_zero", &ThetaFamily::identically_zero, py::arg("j"))
        .def("l2_norm_squared", &ThetaFamily::l2_norm_squared, py::arg("j"),
             py::call_guard<py::gil_scoped_release>())
        .def("__repr__", [](const ThetaFamily& family) {
            std::ostringstream out;
            out << "ThetaFamily(degree=" << family.degree() << ", weight=" << family.weight()
                << ", dimension=" << family.dimension() << ")";
            return out.str();
        });

    m.def("theta_eval", &theta_eval,
          py::arg("family"), py::arg("j"), py::arg("z"), py::arg("tol") = 1e-12,
          py::call_guard<py::gil_scoped_release>(),
          "theta_j(z) with the proven tail below tol; requires Im z >= 0.05.");
    m.def("invariance_defect", &invariance_defect,
          py::arg("family"), py::arg("j"), py::arg("z"), py::arg("gamma"),
          py::arg("tol") = 1e-12, py::call_guard<py::gil_scoped_release>(),
          "| |theta(gz)|^2 Im(gz)^k - |theta(z)|^2 Im z^k | for g with c = 0 mod 4.");

    py::class_<RankinSelbergResult>(m, "RankinSelbergResult")
        .def_readonly("lhs", &RankinSelbergResult::lhs)
        .def_readonly("rhs", &RankinSelbergResult::rhs)
        .def_readonly("relative_difference", &RankinSelbergResult::relative_difference)
        .def("__repr__", [](const RankinSelbergResult& result) {
            std::ostringstream out;
            out << "RankinSelbergResult(lhs=" << result.lhs << ", rhs=" << result.rhs
                << ", relative_difference=" << result.relative_difference << ")";
            return out.str();
        });

    m.def("rankin_selberg_check",
          [](const ThetaFamily& family, int j, double s, std::int64_t N) {
              return rankin_selberg_check(family, j, s, N);
          },
          py::arg("family"), py::arg("j"), py::arg("s"), py::arg("N"),
          py::call_guard<py::gil_scoped_release>(),
          "Truncation-consistent unfolding identity at real s > 1.");

    // ------------------------------------------------------------ kloosterman
    m.def("kloosterman_sum", &kloosterman_sum,
          py::arg("a"), py::arg("b"), py::arg("c"), py::arg("two_k"),
          "K(a, b; c) with the eps_d^{-two_k} (c/d) multiplier; c = 0 mod 4.");
    m.def("kloosterman_bound", &kloosterman_bound, py::arg("n"), py::arg("c"),
          "(n,c)^(1/2) c^(1/2) tau(c).");
    m.def("kloosterman_bound_margin", &kloosterman_bound_margin,
          py::arg("n"), py::arg("c"), py::arg("two_k"));
    m.def("bessel_half_integer", &bessel_half_integer, py::arg("order"), py::arg("x"),
          "J_nu for half-integer nu >= 1/2, x > 0.");

    py::class_<PeterssonCheck>(m, "PeterssonCheck")
        .def_readonly("lhs", &PeterssonCheck::lhs)
        .def_readonly("rhs", &PeterssonCheck::rhs)
        .def_readonly("margin", &PeterssonCheck::margin)
        .def_readonly("tail", &PeterssonCheck::tail)
        .def("__repr__", [](const PeterssonCheck& check) {
            std::ostringstream out;
            out << "PeterssonCheck(lhs=" << check.lhs << ", rhs=" << check.rhs
                << ", margin=" << check.margin << ", tail=" << check.tail << ")";
            return out.str();
        });

    m.def("petersson_bound_check", &petersson_bound_check,
          py::arg("family"), py::arg("j"), py::arg("n"), py::arg("c_max"),
          py::call_guard<py::gil_scoped_release>(),
          "Bessel-inequality form of the Petersson bound; margin >= 0 expected.");

    // ---------------------------------------------------------------- lseries
    m.def("zeta", &zeta_direct, py::arg("s"), "zeta(s) for s > 1.");
    m.def("gamma_factor", &gamma_factor, py::arg("k"), py::arg("s"),
          "Gamma(s) Gamma(s + k - 1).");

    py::class_<DirichletPartial>(m, "DirichletPartial")
        .def_readonly("degree", &DirichletPartial::degree)
        .def_readonly("index", &DirichletPartial::index)
        .def_readonly("s", &DirichletPartial::s)
        .def_readonly("N", &DirichletPartial::N)
        .def_readonly("value", &DirichletPartial::value)
        .def_readonly("tail_bound", &DirichletPartial::tail_bound)
        .def("__repr__", [](const DirichletPartial& partial) {
            std::ostringstream out;
            out << "DirichletPartial(s=" << partial.s << ", N=" << partial.N
                << ", value=" << partial.value << ", tail_bound=" << partial.tail_bound << ")";
            return out.str();
        });

    m.def("dirichlet_partial", &dirichlet_partial,
          py::arg("family"), py::arg("j"), py::arg("s"), py::arg("N"),
          py::call_guard<py::gil_scoped_release>(),
          "Partial Rankin-Selberg Dirichlet series with an envelope tail bound.");
    m.def("completed_lambda_partial", &completed_lambda_partial,
          py::arg("family"), py::arg("j"), py::arg("s"), py::arg("N"),
          py::call_guard<py::gil_scoped_release>());
    m.def("fx_sum", &fx_sum, py::arg("X"), py::arg("m"),
          py::call_guard<py::gil_scoped_release>(),
          "F_X = sum over the degree-m basis and all n <= X of b(n)^2.");

    py::class_<ResidueEstimate>(m, "ResidueEstimate")
        .def_readonly("raw", &ResidueEstimate::raw)
        .def_readonly("c_hat", &ResidueEstimate::c_hat)
        .def("__repr__", [](const ResidueEstimate& estimate) {
            std::ostringstream out;
            out << "ResidueEstimate(raw=" << estimate.raw << ", c_hat=" << estimate.c_hat
                << ")";
            return out.str();
        });

    m.def("residue_estimate", &residue_estimate,
          py::arg("family"), py::arg("j"), py::arg("X"),
          py::call_guard<py::gil_scoped_release>(),
          "Cesaro residue estimate at s = 1; X >= 100.");
}
