"""Potentials of the stable process reflected at its running infimum.

``Y = X - min(0, inf X)`` is killed on first passage above 1.  Its
occupation density decomposes as the killed density on ``[0, 1]`` plus the
excursions that restart from zero, weighted by the chance of leaving
through the bottom first.
"""

from __future__ import annotations

import math

from .errors import DomainError
from .exit_laws import exit_down_prob
from .killed import _log_norm, u1_density
from .params import StableParams
from .special import DEFAULT_QUADRATURE, QuadratureSpec, inc_beta


def r1_zero_density(p: StableParams, y: float) -> float:
    """Occupation density at ``y`` before passage above 1, started at 0."""
    if not 0.0 < y < 1.0:
        raise DomainError(f"r1_zero_density requires y in (0,1), got y={y}")
    return math.exp(
        -math.lgamma(p.alpha) + (p.a_rho - 1.0) * math.log(y) + p.a_rho_hat * math.log1p(-y)
    )


def r1_density(p: StableParams, x: float, y: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Occupation density at ``y`` before passage above 1, started at ``x``."""
    if not (0.0 <= x < 1.0 and 0.0 < y < 1.0):
        raise DomainError(f"r1_density requires x in [0,1), y in (0,1), got x={x}, y={y}")
    if x == 0.0:
        return r1_zero_density(p, y)
    return u1_density(p, x, y, spec) + exit_down_prob(p, x) * r1_zero_density(p, y)


def r_xyz_density(
    p: StableParams, x: float, y: float, z: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Joint occupation density of position ``y`` and supremum ``z`` for the
    reflected process, started at ``x`` and never killed."""
    if not (x >= 0.0 and 0.0 < y < z and z >= x):
        raise DomainError(f"r_xyz_density requires x >= 0, 0 < y < z, z >= x; got x={x}, y={y}, z={z}")
    ar, arh = p.a_rho, p.a_rho_hat
    shape = (ar - 1.0) * math.log(y) + (arh - 1.0) * math.log(z - y)
    if x == 0.0:
        return arh * math.exp(shape - math.lgamma(p.alpha))
    if z == x:
        return math.inf
    direct = math.exp(arh * math.log(x) + (ar - 1.0) * math.log(z - x) + (1.0 - p.alpha) * math.log(z))
    restart = arh * inc_beta(1.0 - x / z, ar, arh, spec, w_complement=x / z)
    return math.exp(_log_norm(p) + shape) * (direct + restart)


def reflected_triple_density(
    p: StableParams,
    x: float,
    u: float,
    v: float,
    y: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Joint density of (1 - sup, 1 - pre-passage position, overshoot) at
    first passage of the reflected process above 1, started at ``x``."""
    ar, arh, a = p.a_rho, p.a_rho_hat, p.alpha
    if x == 0.0:
        if not (0.0 < u <= 1.0 and u < v < 1.0 and y >= 0.0):
            raise DomainError(
                f"reflected_triple_density at x=0 requires u in (0,1], v in (u,1), y >= 0; "
                f"got u={u}, v={v}, y={y}"
            )
        log_val = (
            math.log(a * arh)
            - math.lgamma(ar)
            - math.lgamma(1.0 - ar)
            + (ar - 1.0) * math.log1p(-v)
            + (arh - 1.0) * math.log(v - u)
            - (a + 1.0) * math.log(v + y)
        )
        return math.exp(log_val)
    if not (0.0 < x < 1.0 and 0.0 <= u < 1.0 - x and u < v < 1.0 and y >= 0.0):
        raise DomainError(
            f"reflected_triple_density requires x in [0,1), u in [0,1-x), v in (u,1), y >= 0; "
            f"got x={x}, u={u}, v={v}, y={y}"
        )
    top = 1.0 - u
    direct = math.exp(arh * math.log(x) + (ar - 1.0) * math.log(top - x) + (1.0 - a) * math.log(top))
    restart = arh * inc_beta(1.0 - x / top, ar, arh, spec, w_complement=x / top)
    log_val = (
        math.log(p.c_plus)
        + _log_norm(p)
        + (ar - 1.0) * math.log1p(-v)
        + (arh - 1.0) * math.log(v - u)
        - (a + 1.0) * math.log(v + y)
    )
    return math.exp(log_val) * (direct + restart)


def expected_passage_time(p: StableParams, x: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Mean first-passage time above 1 of the reflected process from ``x``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"expected_passage_time requires x in [0,1], got x={x}")
    ar, arh = p.a_rho, p.a_rho_hat
    if x == 1.0:
        return 0.0
    if x == 0.0:
        return math.exp(math.lgamma(ar) + math.lgamma(arh + 1.0) - math.lgamma(p.alpha) - math.lgamma(p.alpha + 1.0))
    direct = math.exp(arh * math.log(x) + ar * math.log1p(-x))
    restart = arh * inc_beta(1.0 - x, ar, arh, spec, w_complement=x)
    return (direct + restart) / math.gamma(p.alpha + 1.0)


def mean_exit_time(p: StableParams, x: float) -> float:
    """Mean exit time from ``[0, 1]`` of the killed process started at ``x``.

    This is the ``direct`` part of :func:`expected_passage_time`; it equals
    the integral of ``u1_density(x, .)`` over ``(0, 1)``.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"mean_exit_time requires x in [0,1], got x={x}")
    if x in (0.0, 1.0):
        return 0.0
    return math.exp(p.a_rho_hat * math.log(x) + p.a_rho * math.log1p(-x) - math.lgamma(p.alpha + 1.0))
