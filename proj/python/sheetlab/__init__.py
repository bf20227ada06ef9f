"""Brownian-time and inverse-stable-time sheet computations."""

from ._core import (
    NumericalError,
    Clock,
    FractionalOrder,
    Functional,
    InitialFunction,
    MomentRoute,
    QuadratureSpec,
    VerifyGrid,
    __version__,
    caputo_l1,
    caputo_power,
    clock_moment,
    equivalence_residual,
    eval_functional,
    inv_subordinator_density,
    mc_expectation,
    moment_E,
    oracle_polynomial,
    residual_fourth_order,
    residual_fractional,
    residual_order_2nu,
    stable_g,
)

__all__ = [
    "NumericalError",
    "Clock",
    "FractionalOrder",
    "Functional",
    "InitialFunction",
    "MomentRoute",
    "QuadratureSpec",
    "VerifyGrid",
    "__version__",
    "caputo_l1",
    "caputo_power",
    "clock_moment",
    "equivalence_residual",
    "eval_functional",
    "inv_subordinator_density",
    "mc_expectation",
    "moment_E",
    "oracle_polynomial",
    "residual_fourth_order",
    "residual_fractional",
    "residual_order_2nu",
    "stable_g",
]
