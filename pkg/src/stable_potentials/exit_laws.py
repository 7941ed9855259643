"""Explicit exit-problem laws of the stable process.

These are the two-sided exit probability from ``[0, 1]`` and the laws of
the pre-passage infimum and the supremum at passage below zero when started
from 1.  They feed the potential formulas and double as independent targets
for the Monte Carlo oracle.
"""

from __future__ import annotations

import math

from .errors import DomainError
from .params import StableParams
from .special import DEFAULT_QUADRATURE, QuadratureSpec, inc_beta, log_gamma, reg_inc_beta


def exit_up_prob(p: StableParams, x: float) -> float:
    """P_x(first passage above 1 happens before first passage below 0)."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"exit_up_prob requires x in [0,1], got x={x}")
    return reg_inc_beta(x, p.a_rho_hat, p.a_rho)


def exit_down_prob(p: StableParams, x: float) -> float:
    """Complement of :func:`exit_up_prob`, evaluated without cancellation."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"exit_down_prob requires x in [0,1], got x={x}")
    return reg_inc_beta(1.0 - x, p.a_rho, p.a_rho_hat)


def infimum_before_passage_density(p: StableParams, y: float) -> float:
    """Density at ``y`` of the infimum just before first passage below 0, from 1."""
    if not 0.0 < y < 1.0:
        raise DomainError(f"infimum_before_passage_density requires y in (0,1), got y={y}")
    e = p.a_rho_hat
    return math.sin(math.pi * e) / math.pi * math.exp(-e * math.log(y) + (e - 1.0) * math.log1p(-y))


def infimum_before_passage_cdf(
    p: StableParams, y: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"infimum_before_passage_cdf requires y in [0,1], got y={y}")
    e = p.a_rho_hat
    return math.sin(math.pi * e) / math.pi * inc_beta(y, 1.0 - e, e, spec)


def _sup_constant(p: StableParams) -> float:
    lg, _ = log_gamma(p.alpha)
    return math.exp(lg - math.lgamma(p.a_rho) - math.lgamma(p.a_rho_hat))


def supremum_at_passage_density(p: StableParams, t: float) -> float:
    """Density at ``t > 1`` of the supremum at first passage below 0, from 1."""
    if not t > 1.0:
        raise DomainError(f"supremum_at_passage_density requires t > 1, got t={t}")
    return _sup_constant(p) * math.exp(-p.alpha * math.log(t) + (p.a_rho - 1.0) * math.log(t - 1.0))


def supremum_at_passage_survival(
    p: StableParams, y: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """P_1(sup before passage below 0 >= y) for ``y >= 1``."""
    if not y >= 1.0:
        raise DomainError(f"supremum_at_passage_survival requires y >= 1, got y={y}")
    if math.isinf(y):
        return 0.0
    return _sup_constant(p) * inc_beta(1.0 / y, p.a_rho_hat, p.a_rho, spec)
