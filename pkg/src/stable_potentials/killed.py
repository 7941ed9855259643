"""Potentials of the stable process killed on leaving a bounded interval.

Covers the occupation density before exit from ``[0, 1]`` (and, by
translation and scaling, from any ``[a, b]``), its refinement by the running
supremum, and the joint law of undershoot-from-maximum, undershoot and
overshoot at exit across the upper end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import DomainError
from .params import StableParams
from .special import DEFAULT_QUADRATURE, QuadratureSpec, _beta_integral


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise DomainError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass
class DensityGrid:
    """Density values on strictly increasing interior abscissae.

    ``singular_endpoints`` maps ``"lo"``/``"hi"`` to the power-law exponent
    of the density at that end (``None`` when unknown or regular).
    """

    points: list[float]
    values: list[float]
    singular_endpoints: dict[str, float | None] = field(default_factory=lambda: {"lo": None, "hi": None})

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise ValueError("points and values differ in length")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("grid points must be strictly increasing")
        if any(v < 0 or math.isnan(v) for v in self.values):
            raise ValueError("density values must be nonnegative")

    def __len__(self) -> int:
        return len(self.points)


class TabulationError(DomainError):
    def __init__(self, abscissa: float, cause: Exception):
        super().__init__(f"at abscissa {abscissa!r}: {cause}")
        self.abscissa = abscissa


def interior_grid(lo: float, hi: float, count: int, margin: float = 0.0) -> list[float]:
    """``count`` equally spaced points strictly inside ``[lo + margin, hi - margin]``."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    a, b = lo + margin, hi - margin
    if count and not a < b:
        raise DomainError(f"margin {margin} leaves no room inside [{lo}, {hi}]")
    return [a + (b - a) * k / (count + 1) for k in range(1, count + 1)]


def tabulate(
    fn: Callable[[float], float],
    points: Sequence[float],
    singular_endpoints: dict[str, float | None] | None = None,
) -> DensityGrid:
    values = []
    for t in points:
        try:
            values.append(float(fn(t)))
        except DomainError as exc:
            raise TabulationError(t, exc) from exc
    ends = {"lo": None, "hi": None}
    if singular_endpoints:
        ends.update(singular_endpoints)
    return DensityGrid(list(points), values, ends)


def _log_norm(p: StableParams) -> float:
    """log of 1 / (Gamma(alpha rho) Gamma(alpha rho_hat))."""
    return -math.lgamma(p.a_rho) - math.lgamma(p.a_rho_hat)


def u1_density(p: StableParams, x: float, y: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Occupation density at ``y`` before exit from ``[0, 1]``, started at ``x``."""
    if not (0.0 < x < 1.0 and 0.0 < y < 1.0):
        raise DomainError(f"u1_density requires x, y in (0,1), got x={x}, y={y}")
    if x == y:
        raise DomainError(f"u1_density is not evaluated on the diagonal x=y={x}")
    # After s = t/(1-t) the inner integral is B(t; a, 1 - alpha) with
    # t = y(1-x) / (x(1-y)) when y < x, and the mirror image when x < y.
    if y < x:
        gap, den = x - y, x * (1.0 - y)
        t, tc, a = y * (1.0 - x) / den, gap / den, p.a_rho
    else:
        gap, den = y - x, y * (1.0 - x)
        t, tc, a = x * (1.0 - y) / den, gap / den, p.a_rho_hat
    integral = _beta_integral(t, tc, a, 1.0 - p.alpha, spec)
    return math.exp(_log_norm(p) + (p.alpha - 1.0) * math.log(gap)) * integral


def uA_density(
    p: StableParams, A: Interval, x: float, y: float, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Occupation density before exit from ``A``, by translation and scaling."""
    if not (A.lo < x < A.hi and A.lo < y < A.hi):
        raise DomainError(f"uA_density requires x, y inside ({A.lo}, {A.hi}), got x={x}, y={y}")
    w = A.width
    return w ** (p.alpha - 1.0) * u1_density(p, (x - A.lo) / w, (y - A.lo) / w, spec)


def u_xyz_density(p: StableParams, x: float, y: float, z: float) -> float:
    """Joint occupation density of position ``y`` and running supremum ``z``
    before first passage below 0, started at ``x``."""
    if not (x > 0 and z > x and 0.0 <= y < z):
        raise DomainError(f"u_xyz_density requires x > 0, z > x, 0 <= y < z; got x={x}, y={y}, z={z}")
    if y == x:
        raise DomainError(f"u_xyz_density is not evaluated at y=x={x}")
    if y == 0.0:
        return 0.0
    ar, arh = p.a_rho, p.a_rho_hat
    log_val = (
        _log_norm(p)
        + arh * math.log(x)
        + ar * math.log(y)
        + (ar - 1.0) * math.log(z - x)
        + (arh - 1.0) * math.log(z - y)
        - p.alpha * math.log(z)
    )
    return math.exp(log_val)


def exit_triple_density(p: StableParams, x: float, u: float, v: float, y: float) -> float:
    """Joint density at exit above 1 (before passage below 0), started at ``x``.

    Coordinates are ``u = 1 - sup before exit``, ``v = 1 - position just
    before exit`` and ``y = overshoot``.  The density equals
    ``u_xyz_density(x, 1-v, 1-u) * levy_density(v+y)``.
    """
    if not (0.0 < x < 1.0 and 0.0 <= u < 1.0 - x and u < v <= 1.0 and y >= 0.0):
        raise DomainError(
            f"exit_triple_density requires x in (0,1), u in [0,1-x), v in (u,1], y >= 0; "
            f"got x={x}, u={u}, v={v}, y={y}"
        )
    if v == 1.0:
        return 0.0
    ar, arh, a = p.a_rho, p.a_rho_hat, p.alpha
    log_val = (
        math.log(p.c_plus)
        + _log_norm(p)
        + arh * math.log(x)
        + ar * math.log1p(-v)
        + (ar - 1.0) * math.log(1.0 - u - x)
        + (arh - 1.0) * math.log(v - u)
        - a * math.log1p(-u)
        - (a + 1.0) * math.log(v + y)
    )
    return math.exp(log_val)


def u1_endpoint_exponents(p: StableParams) -> dict[str, float]:
    """Power-law exponents of ``y -> u1_density(x, y)`` at ``y = 0`` and ``y = 1``."""
    return {"lo": p.a_rho, "hi": p.a_rho_hat}
