"""Lattice points on spheres: shells, cap-count variance, theta machinery.

Thin re-export of the compiled extension. Variance comes in two independent
routes (direct sampling and the spectral identity); theta families expose
Fourier coefficients, q-series evaluation, norms, and the Rankin-Selberg
unfolding check; Kloosterman sums back the Petersson-type bound.
"""

from ._core import (
    AverageResult,
    CapacityError,
    DirichletPartial,
    PeterssonCheck,
    RankinSelbergResult,
    ResidueEstimate,
    Shell,
    ThetaFamily,
    VarianceResult,
    average_variance,
    basis_dimension,
    bessel_half_integer,
    cap_area,
    cap_coefficient_closed_form,
    cap_intersection_area,
    completed_lambda_partial,
    conjecture_ratio,
    count_in_cap,
    default_truncation,
    dirichlet_partial,
    divisor_count,
    enumerate_shell,
    fx_sum,
    gamma_factor,
    gamma_half,
    geodesic_distance,
    invariance_defect,
    isqrt64,
    jacobi_symbol,
    kloosterman_bound,
    kloosterman_bound_margin,
    kloosterman_sum,
    legendre,
    mod_inverse,
    petersson_bound_check,
    rankin_selberg_check,
    residue_estimate,
    residue_class_member,
    smoothed_count,
    theta_eval,
    variance_mc,
    variance_quadrature,
    variance_spectral,
    weyl_power_spectrum,
    zeta,
    zonal_coefficients,
    zonal_transform,
)

__version__ = "0.1.0"
