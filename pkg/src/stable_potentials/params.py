"""Parameters and elementary descriptors of a strictly stable Levy process.

The process is indexed by the scaling index ``alpha`` and the positivity
parameter ``rho = P_0(X_t > 0)``.  Only two-sided jump cases are admitted:

* ``0 < alpha < 1`` with ``0 < rho < 1``;
* ``alpha == 1`` with ``rho == 1/2`` (symmetric Cauchy);
* ``1 < alpha < 2`` with ``1 - 1/alpha < rho < 1/alpha``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class StableParams:
    alpha: float
    rho: float
    rho_hat: float
    c: float
    beta: float
    c_plus: float
    c_minus: float
    q: float

    @property
    def a_rho(self) -> float:
        return self.alpha * self.rho

    @property
    def a_rho_hat(self) -> float:
        return self.alpha * self.rho_hat

    def __str__(self) -> str:
        return f"StableParams(alpha={self.alpha!r}, rho={self.rho!r})"


def _jump_constant(alpha: float, a: float) -> float:
    """Gamma(alpha + 1) / (Gamma(a) Gamma(1 - a)), by the reflection formula."""
    return math.gamma(alpha + 1.0) * math.sin(math.pi * a) / math.pi


def _check_admissible(alpha: float, rho: float) -> None:
    if not (math.isfinite(alpha) and math.isfinite(rho)):
        raise DomainError(f"alpha and rho must be finite, got alpha={alpha}, rho={rho}")
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0,2), got alpha={alpha}")
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0,1), got rho={rho}")


def make_params(alpha: float, rho: float, *, strict: bool = True) -> StableParams:
    """Validate ``(alpha, rho)`` and compute the derived constants.

    With ``strict=False`` only ``alpha in (0,2)`` and ``rho in (0,1)`` are
    enforced.  That mode exists for building deliberately wrong targets in
    verification runs; the formulas are not meaningful there.
    """
    alpha = float(alpha)
    rho = float(rho)
    _check_admissible(alpha, rho)
    if strict:
        if alpha == 1.0 and rho != 0.5:
            raise DomainError(f"alpha=1 requires rho=1/2, got rho={rho}")
        if alpha > 1.0 and not (1.0 - 1.0 / alpha < rho < 1.0 / alpha):
            raise DomainError(
                f"alpha>1 requires rho in (1-1/alpha, 1/alpha) = "
                f"({1.0 - 1.0 / alpha:.12g}, {1.0 / alpha:.12g}), got rho={rho}"
            )

    rho_hat = 1.0 - rho
    skew = math.pi * alpha * (rho - 0.5)
    c = math.cos(skew)
    beta = 0.0 if alpha == 1.0 else math.tan(skew) / math.tan(math.pi * alpha / 2.0)
    c_plus = _jump_constant(alpha, alpha * rho)
    c_minus = _jump_constant(alpha, alpha * rho_hat)
    return StableParams(alpha, rho, rho_hat, c, beta, c_plus, c_minus, c_minus / alpha)


def dual(p: StableParams) -> StableParams:
    """Parameters of ``-X``: ``rho`` and ``rho_hat`` exchange roles.

    Fields are swapped rather than recomputed so that ``dual(dual(p)) == p``
    holds exactly.
    """
    return StableParams(
        alpha=p.alpha,
        rho=p.rho_hat,
        rho_hat=p.rho,
        c=p.c,
        beta=-p.beta,
        c_plus=p.c_minus,
        c_minus=p.c_plus,
        q=p.c_plus / p.alpha,
    )


def levy_density(p: StableParams, x: float) -> float:
    if x == 0.0:
        raise DomainError("the Levy density is not defined at x=0")
    coeff = p.c_plus if x > 0 else p.c_minus
    return coeff * abs(x) ** (-(p.alpha + 1.0))


def char_exponent(p: StableParams, theta: float) -> complex:
    """Psi(theta) with ``E exp(i theta X_t) = exp(-t Psi(theta))``."""
    if theta == 0.0:
        return 0j
    mag = p.c * abs(theta) ** p.alpha
    if p.alpha == 1.0:
        return complex(mag, 0.0)
    sgn = 1.0 if theta > 0 else -1.0
    skew = p.beta * math.tan(math.pi * p.alpha / 2.0) * sgn
    return mag * (1.0 - 1j * skew)


def char_function(p: StableParams, theta: float, t: float = 1.0) -> complex:
    return cmath.exp(-t * char_exponent(p, theta))
