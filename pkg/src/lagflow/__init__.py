"""Numerical laboratory for Lagrangian self-similar solutions of mean curvature flow."""

from __future__ import annotations

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    Immersion,
    TangentFrame,
    angle_laplacian,
    lagrangian_angle,
    laplace_beltrami_of_position,
    mean_curvature,
    normal_projection,
    symplectic_pairing,
    tangent_frame,
)
from .integer_family import IntegerSlice, LambdaSpec, classify, density_closed_form, immerse  # noqa: E402
from .ode_family import (  # noqa: E402
    OdeParams,
    OdeSlice,
    OdeState,
    PeriodicOrbit,
    density_closed_form_ode,
    find_periodic,
    immerse_ode,
    integrate,
    load_seeds,
    rhs,
)
from .quadrature import FunctionalReport, GridSpec, TestFunction, first_variation, functionals, mass  # noqa: E402

__all__ = [
    "FunctionalReport",
    "GridSpec",
    "Immersion",
    "IntegerSlice",
    "LambdaSpec",
    "OdeParams",
    "OdeSlice",
    "OdeState",
    "PeriodicOrbit",
    "TangentFrame",
    "TestFunction",
    "angle_laplacian",
    "classify",
    "density_closed_form",
    "density_closed_form_ode",
    "find_periodic",
    "first_variation",
    "functionals",
    "immerse",
    "immerse_ode",
    "integrate",
    "lagrangian_angle",
    "laplace_beltrami_of_position",
    "load_seeds",
    "mass",
    "mean_curvature",
    "normal_projection",
    "rhs",
    "symplectic_pairing",
    "tangent_frame",
]
