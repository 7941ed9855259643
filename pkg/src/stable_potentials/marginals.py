"""Total mass and one-dimensional marginals of the exit triple laws.

Both triple laws (killed and reflected) share the shape

    C * A(u) * (1 - v)**k * (v - u)**(alpha rho_hat - 1) * (v + y)**(-alpha - 1)

on ``0 <= u < min(v, 1 - x)``, ``0 < v < 1``, ``y >= 0``, where ``A`` may
carry a factor ``(1 - x - u)**(alpha rho - 1)``.  The overshoot coordinate
``y`` is integrated in closed form; the remaining ``(u, v)`` integral is done
by nested singular quadrature with the power-law factors removed
analytically.
"""

from __future__ import annotations

import functools
import math
import warnings

import numpy as np
from scipy import special as sp

from .errors import QuadratureWarning
from .killed import _log_norm
from .params import StableParams
from .special import QuadratureSpec, integrate_algebraic

INNER_SPEC = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-13, max_subdivisions=200)
OUTER_SPEC = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-12, max_subdivisions=200)


def _quiet(method):
    # Nested integrals hit roundoff well below the accuracy the callers need.
    @functools.wraps(method)
    def wrapper(*args, **kwargs):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", QuadratureWarning)
            return method(*args, **kwargs)

    return wrapper


class TripleLaw:
    """Exit triple law from ``x``: killed (``reflected=False``) or reflected."""

    def __init__(self, p: StableParams, x: float, reflected: bool = False):
        if reflected and not 0.0 <= x < 1.0:
            raise ValueError(f"reflected triple law needs x in [0,1), got {x}")
        if not reflected and not 0.0 < x < 1.0:
            raise ValueError(f"killed triple law needs x in (0,1), got {x}")
        self.p, self.x, self.reflected = p, x, reflected
        ar, arh, a = p.a_rho, p.a_rho_hat, p.alpha
        self.top = 1.0 - x
        if reflected and x == 0.0:
            self.const = a * arh * math.exp(-math.lgamma(ar) - math.lgamma(1.0 - ar))
        else:
            self.const = p.c_plus * math.exp(_log_norm(p))
        self.k = ar - 1.0 if reflected else ar
        self.has_sing = x > 0.0
        self.has_reg = reflected
        self.mid_exp = min(a - 1.0, 0.0)
        self._beta_scale = arh * math.exp(math.lgamma(ar) + math.lgamma(arh) - math.lgamma(a))
        self._mass = None

    # -- pieces of A(u) ---------------------------------------------------
    def _a_sing(self, u):
        """Coefficient of (1 - x - u)**(alpha rho - 1) in A(u)."""
        p, x = self.p, self.x
        power = 1.0 - p.alpha if self.reflected else -p.alpha
        return x**p.a_rho_hat * (1.0 - u) ** power

    def _a_reg(self, u, d_top=None):
        if not self.has_reg:
            return 0.0
        if self.x == 0.0:
            return 1.0
        w = (self.top - u if d_top is None else d_top) / (1.0 - u)
        return self._beta_scale * float(sp.betainc(self.p.a_rho, self.p.a_rho_hat, w))

    def _a_full(self, u):
        val = self._a_reg(u)
        if self.has_sing:
            val += self._a_sing(u) * (self.top - u) ** (self.p.a_rho - 1.0)
        return val

    def kernel(self, u: float, v: float, y: float) -> float:
        """Pointwise density, for checking against the public density functions."""
        p = self.p
        return (
            self.const
            * self._a_full(u)
            * (1.0 - v) ** self.k
            * (v - u) ** (p.a_rho_hat - 1.0)
            * (v + y) ** (-p.alpha - 1.0)
        )

    # -- inner integral over u ----------------------------------------------
    def inner(self, v: float) -> float:
        """H(v) = int A(u) (v - u)**(alpha rho_hat - 1) du over [0, min(v, 1-x))."""
        e_v = self.p.a_rho_hat - 1.0
        if v < self.top:
            return integrate_algebraic(self._a_full, 0.0, v, 0.0, e_v, INNER_SPEC)
        total = 0.0
        if self.has_sing:
            total += integrate_algebraic(
                lambda u: self._a_sing(u) * (v - u) ** e_v,
                0.0, self.top, 0.0, self.p.a_rho - 1.0, INNER_SPEC,
            )
        if self.has_reg:
            # B(w; a rho, a rho_hat) vanishes like w**(a rho) at u = 1 - x
            ar = self.p.a_rho
            total += integrate_algebraic(
                lambda u, _dl, dh: self._a_reg(u, dh) / dh**ar * (v - u) ** e_v,
                0.0, self.top, 0.0, ar, INNER_SPEC, with_distances=True,
            )
        return total

    # -- outer integral over v ----------------------------------------------
    def _breaks(self) -> list[float]:
        return [0.0, self.top, 1.0] if self.has_sing and self.top < 1.0 else [0.0, 1.0]

    def _exponent_at(self, point: float) -> float:
        if point == 0.0:
            return -self.p.a_rho
        if point == 1.0:
            return self.k
        if self.has_sing and point == self.top:
            return self.mid_exp
        return 0.0

    def _outer(self, weight, lo: float, hi: float, vector: bool = False):
        """int_lo^hi C H(v) (1-v)**k weight(v) dv with endpoint powers removed."""
        lo_exp, hi_exp = self._exponent_at(lo), self._exponent_at(hi)

        def h(v, d_lo, d_hi):
            val = self.const * self.inner(min(v, 1.0)) * weight(v)
            if hi == 1.0:
                return val / d_lo**lo_exp
            return val * (1.0 - v) ** self.k / (d_lo**lo_exp * d_hi**hi_exp)

        return integrate_algebraic(
            h, lo, hi, lo_exp, hi_exp, OUTER_SPEC, vector=vector, with_distances=True
        )

    def _tail_weight(self, v):
        return v ** (-self.p.alpha) / self.p.alpha

    @_quiet
    def mass(self) -> float:
        """Total probability of the triple law (P_x(exit above 1) when killed)."""
        if self._mass is None:
            b = self._breaks()
            self._mass = sum(self._outer(self._tail_weight, lo, hi) for lo, hi in zip(b, b[1:]))
        return self._mass

    @_quiet
    def overshoot_cdf(self, ys) -> np.ndarray:
        """P(overshoot <= y | exit above 1) at each ``y``."""
        ys = np.asarray(ys, dtype=float)
        a = self.p.alpha

        def weight(v):
            return (v ** (-a) - (v + ys) ** (-a)) / a

        b = self._breaks()
        total = sum(self._outer(weight, lo, hi, vector=True) for lo, hi in zip(b, b[1:]))
        return np.clip(total / self.mass(), 0.0, 1.0)

    @_quiet
    def undershoot_cdf(self, vs) -> np.ndarray:
        """P(1 - pre-exit position <= v | exit above 1) at each ``v``."""
        vs = np.asarray(vs, dtype=float)
        cuts = sorted(set(self._breaks()) | {float(v) for v in vs if 0.0 < v < 1.0})
        pieces = [self._outer(self._tail_weight, lo, hi) for lo, hi in zip(cuts, cuts[1:])]
        cum = np.concatenate([[0.0], np.cumsum(pieces)])
        out = np.interp(vs, cuts, cum)
        return np.clip(out / self.mass(), 0.0, 1.0)
