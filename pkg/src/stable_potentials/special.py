"""Gamma/beta helpers and quadrature for integrands with power-law endpoints.

Every analytic quantity in the package reduces to incomplete beta type
integrals whose integrands blow up like a power at one or both ends.  Those
singularities are removed by a change of variables before the integral is
handed to QUADPACK, so the adaptive routine only ever sees bounded, smooth
integrands.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy import integrate
from scipy import special as sp

from .errors import DivergenceError, DomainError, PoleError, QuadratureWarning


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``."""
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at x={x}")
    sign = 1 if x > 0 or math.floor(x) % 2 == 0 else -1
    return math.lgamma(x), sign


def log_beta(a: float, b: float) -> float:
    """log B(a, b) for positive ``a`` and ``b``."""
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _quad(f, a, b, spec: QuadratureSpec, vector: bool):
    if vector:
        val, _err = integrate.quad_vec(
            f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions
        )
        return val
    out = integrate.quad(
        f, a, b, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
        limit=spec.max_subdivisions, full_output=1,
    )
    if len(out) == 4:
        warnings.warn(
            f"quadrature on [{a!r}, {b!r}] did not converge cleanly: {out[3].splitlines()[0]}",
            QuadratureWarning,
            stacklevel=3,
        )
    return out[0]


def integrate_algebraic(
    h: Callable,
    lo: float,
    hi: float,
    lo_exp: float = 0.0,
    hi_exp: float = 0.0,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    vector: bool = False,
    with_distances: bool = False,
):
    """Integrate ``(t - lo)**lo_exp * (hi - t)**hi_exp * h(t)`` over ``[lo, hi]``.

    ``h`` must be bounded near the endpoints; the power factors are handled
    analytically.  The interval is split at its midpoint and, on the half
    touching an endpoint with a nonzero exponent ``e``, the substitution
    ``t - lo = s**(1/(1+e))`` turns ``(t - lo)**e dt`` into a constant times
    ``ds``.  With ``vector=True`` ``h`` may return arrays.

    With ``with_distances=True`` ``h`` is called as ``h(t, t - lo, hi - t)``
    where the distance to the substituted endpoint is exact even when ``t``
    itself rounds onto that endpoint.
    """
    if lo_exp <= -1 or hi_exp <= -1:
        raise DivergenceError(f"endpoint exponents must exceed -1, got {lo_exp}, {hi_exp}")
    if hi < lo:
        raise DomainError(f"empty interval [{lo}, {hi}]")
    if hi == lo:
        return 0.0
    half = 0.5 * (hi - lo)
    mid = lo + half
    if not with_distances:
        g = h

        def h(t, _d_lo, _d_hi):
            return g(t)

    if lo_exp != 0.0:
        p = 1.0 / (1.0 + lo_exp)

        def left(s):
            d = s**p
            t = lo + d
            return p * (hi - t) ** hi_exp * h(t, d, hi - t)

        total = _quad(left, 0.0, half ** (1.0 + lo_exp), spec, vector)
    else:
        total = _quad(lambda t: (hi - t) ** hi_exp * h(t, t - lo, hi - t), lo, mid, spec, vector)

    if hi_exp != 0.0:
        p = 1.0 / (1.0 + hi_exp)

        def right(s):
            d = s**p
            t = hi - d
            return p * (t - lo) ** lo_exp * h(t, t - lo, d)

        total = total + _quad(right, 0.0, half ** (1.0 + hi_exp), spec, vector)
    else:
        total = total + _quad(lambda t: (t - lo) ** lo_exp * h(t, t - lo, hi - t), mid, hi, spec, vector)
    return total


def integrate_singular(
    f: Callable,
    lo: float,
    hi: float,
    lo_exp: float = 0.0,
    hi_exp: float = 0.0,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Integrate ``f`` over ``[lo, hi]`` where ``f(t)`` behaves like
    ``(t - lo)**lo_exp`` and ``(hi - t)**hi_exp`` at the ends.

    The power factors are divided out at the same rounded abscissa that
    ``f`` sees, so ``f`` can be any public density function.  Abscissae that
    round onto an endpoint are moved one ulp inside.
    """
    lo_in = math.nextafter(lo, hi)
    hi_in = math.nextafter(hi, lo)

    def regular(t):
        t = min(max(t, lo_in), hi_in)
        return f(t) / ((t - lo) ** lo_exp * (hi - t) ** hi_exp)

    return integrate_algebraic(regular, lo, hi, lo_exp, hi_exp, spec)


def _beta_integral(w: float, wc: float, a: float, b: float, spec: QuadratureSpec) -> float:
    """B(w; a, b) with ``wc = 1 - w`` supplied separately to keep precision near 1."""
    if a <= 0:
        raise DomainError(f"incomplete beta requires a > 0, got a={a}")
    if not (0.0 <= w <= 1.0 and 0.0 <= wc <= 1.0):
        raise DomainError(f"incomplete beta requires w in [0,1], got w={w}")
    if wc == 0.0 and b <= 0:
        raise DivergenceError(f"B(1; a, b) diverges for b={b} <= 0")
    if w == 0.0:
        return 0.0

    head = min(w, 0.5)
    total = integrate_algebraic(lambda t: (1.0 - t) ** (b - 1.0), 0.0, head, a - 1.0, 0.0, spec)
    if w <= 0.5:
        return total

    # Remaining piece in s = 1 - t over [wc, 1/2], integrand s**(b-1) (1-s)**(a-1).
    # The s**(b-1) part is integrated exactly; the bounded remainder
    # s**(b-1) ((1-s)**(a-1) - 1) = O(s**b) is integrated in r = log s.
    log_half = math.log(0.5)
    if wc == 0.0:
        exact = 0.5**b / b
    else:
        span = log_half - math.log(wc)
        exact = span if b == 0.0 else wc**b * math.expm1(b * span) / b

    def remainder(r):
        s = math.exp(r)
        return math.exp(b * r) * math.expm1((a - 1.0) * math.log1p(-s))

    lo_r = -math.inf if wc == 0.0 else math.log(wc)
    rest = _quad(remainder, lo_r, log_half, spec, False)
    return total + exact + rest


def inc_beta(
    w: float,
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    w_complement: float | None = None,
) -> float:
    """Incomplete beta integral ``int_0^w t**(a-1) (1-t)**(b-1) dt``.

    ``b`` may be zero or negative as long as ``w < 1``.  Pass
    ``w_complement`` when ``1 - w`` is known more accurately than its
    floating-point difference.
    """
    wc = 1.0 - w if w_complement is None else w_complement
    return _beta_integral(w, wc, a, b, spec)


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta ``I_x(a, b)``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"I_x(a,b) requires x in [0,1], got x={x}")
    if a <= 0 or b <= 0:
        raise DomainError(f"I_x(a,b) requires a, b > 0, got a={a}, b={b}")
    return float(sp.betainc(a, b, x))


def j_integral(w: float, a: float, b: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """``int_0^w s**(a-1) (1+s)**(b-1) ds`` via ``t = s/(1+s)``.

    The substitution gives ``B(w/(1+w); a, 1-a-b)``.
    """
    if a <= 0:
        raise DomainError(f"J(w; a, b) requires a > 0, got a={a}")
    if not w >= 0:
        raise DomainError(f"J(w; a, b) requires w >= 0, got w={w}")
    if math.isinf(w):
        if a + b >= 0:
            raise DivergenceError(f"J(inf; a, b) diverges for a+b={a + b} >= 0")
        return _beta_integral(1.0, 0.0, a, 1.0 - a - b, spec)
    return _beta_integral(w / (1.0 + w), 1.0 / (1.0 + w), a, 1.0 - a - b, spec)


def beta_fn(a: float, b: float) -> float:
    return math.exp(log_beta(a, b))


__all__ = [
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "log_gamma",
    "log_beta",
    "beta_fn",
    "integrate_algebraic",
    "integrate_singular",
    "inc_beta",
    "reg_inc_beta",
    "j_integral",
]
