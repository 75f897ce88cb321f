from offdelta.specfun.gamma import gamma_real, rgamma
from offdelta.specfun.hermite import hermite_roots, hermite_scale, hermite_value
from offdelta.specfun.parabolic import (
    EvalResult,
    crossover_radius,
    kummer_solution,
    parabolic_d,
    parabolic_d_prime,
    pcf_D,
    pcf_D_prime,
)

__all__ = [
    "EvalResult",
    "crossover_radius",
    "gamma_real",
    "hermite_roots",
    "hermite_scale",
    "hermite_value",
    "kummer_solution",
    "parabolic_d",
    "parabolic_d_prime",
    "pcf_D",
    "pcf_D_prime",
    "rgamma",
]
