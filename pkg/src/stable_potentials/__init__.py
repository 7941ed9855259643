"""Potential densities and exit laws of stable Levy processes.

Closed forms for the process killed on leaving an interval and for the
process reflected at its running infimum, plus the special-function and
quadrature layer they rest on.  The Monte Carlo oracle lives in
:mod:`stable_potentials.mc` and is imported on demand (it compiles numba
kernels).
"""

__version__ = "0.1.0"

from .errors import DivergenceError, DomainError, PoleError, QuadratureWarning
from .exit_laws import (
    exit_down_prob,
    exit_up_prob,
    infimum_before_passage_cdf,
    infimum_before_passage_density,
    supremum_at_passage_density,
    supremum_at_passage_survival,
)
from .killed import (
    DensityGrid,
    Interval,
    TabulationError,
    exit_triple_density,
    interior_grid,
    tabulate,
    u1_density,
    u1_endpoint_exponents,
    uA_density,
    u_xyz_density,
)
from .marginals import TripleLaw
from .params import StableParams, char_exponent, char_function, dual, levy_density, make_params
from .reflected import (
    expected_passage_time,
    mean_exit_time,
    r1_density,
    r1_zero_density,
    r_xyz_density,
    reflected_triple_density,
)
from .special import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    beta_fn,
    inc_beta,
    integrate_algebraic,
    integrate_singular,
    j_integral,
    log_beta,
    log_gamma,
    reg_inc_beta,
)

__all__ = [
    "DEFAULT_QUADRATURE",
    "DensityGrid",
    "DivergenceError",
    "DomainError",
    "Interval",
    "PoleError",
    "QuadratureSpec",
    "QuadratureWarning",
    "StableParams",
    "TabulationError",
    "TripleLaw",
    "beta_fn",
    "char_exponent",
    "char_function",
    "dual",
    "exit_down_prob",
    "exit_triple_density",
    "exit_up_prob",
    "expected_passage_time",
    "inc_beta",
    "infimum_before_passage_cdf",
    "infimum_before_passage_density",
    "integrate_algebraic",
    "integrate_singular",
    "interior_grid",
    "j_integral",
    "levy_density",
    "log_beta",
    "log_gamma",
    "make_params",
    "mean_exit_time",
    "r1_density",
    "r1_zero_density",
    "r_xyz_density",
    "reflected_triple_density",
    "reg_inc_beta",
    "supremum_at_passage_density",
    "supremum_at_passage_survival",
    "tabulate",
    "u1_density",
    "u1_endpoint_exponents",
    "uA_density",
    "u_xyz_density",
]
