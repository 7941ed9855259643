"""Verification suites: analytic identities and Monte Carlo agreement.

Each suite returns a list of :class:`Check` records.  A report is a JSON
object ``{"tool", "version", "suite", "checks"}`` where ``checks`` holds one
``{"check", "params", "observed", "threshold", "pass"}`` object per check.  For most checks ``pass`` means ``observed <= threshold``;
the exceptions are spelled out in the check's docstring.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from .exit_laws import (
    exit_up_prob,
    infimum_before_passage_density,
    supremum_at_passage_density,
)
from .killed import exit_triple_density, u1_density, u_xyz_density
from .marginals import TripleLaw
from .params import StableParams, dual, levy_density, make_params
from .reflected import expected_passage_time, mean_exit_time, r1_density, r1_zero_density, r_xyz_density
from .special import QuadratureSpec, integrate_singular

GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
MARGINAL_SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-14, max_subdivisions=200)


@dataclass
class Check:
    check: str
    params: dict
    observed: float
    threshold: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "observed": self.observed,
            "threshold": self.threshold,
            "pass": self.passed,
        }


def _check(name, params, observed, threshold) -> Check:
    observed = float(observed)
    return Check(name, params, observed, threshold, bool(observed <= threshold))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


# -- identities ---------------------------------------------------------------


def duality_errors(p: StableParams, n: int = 1000, seed: int = 0) -> tuple[float, float]:
    """Max relative errors of the duality relations for ``u1`` and the exit probability."""
    rng = np.random.default_rng(seed)
    q = dual(p)
    err_u = err_e = 0.0
    for x, y in rng.uniform(0.0, 1.0, size=(n, 2)):
        if x == y:
            continue
        err_u = max(err_u, _rel(u1_density(q, 1.0 - x, 1.0 - y), u1_density(p, x, y)))
        err_e = max(err_e, abs(exit_up_prob(p, x) - (1.0 - exit_up_prob(q, 1.0 - x))))
    return err_u, err_e


def _z_exponents(p: StableParams, x: float, y: float) -> tuple[float, float]:
    # behaviour of the z-integrands of u and r at z = max(x, y)
    if x > y:
        return max(x, y), p.a_rho - 1.0
    return max(x, y), p.a_rho_hat - 1.0


def marginal_u_error(p: StableParams, x: float, y: float) -> float:
    lo, e = _z_exponents(p, x, y)
    total = integrate_singular(lambda z: u_xyz_density(p, x, y, z), lo, 1.0, e, 0.0, MARGINAL_SPEC)
    return _rel(total, u1_density(p, x, y))


def marginal_r_error(p: StableParams, x: float, y: float) -> float:
    lo, e = _z_exponents(p, x, y) if x > 0 else (y, p.a_rho_hat - 1.0)
    total = integrate_singular(lambda z: r_xyz_density(p, x, y, z), lo, 1.0, e, 0.0, MARGINAL_SPEC)
    return _rel(total, r1_density(p, x, y))


def marginal_r1_error(p: StableParams, x: float) -> float:
    """Relative error of the integral of ``r1(x, .)`` against the mean passage time."""

    def f(y):
        return r1_density(p, x, y)

    e0, e1 = p.a_rho - 1.0, p.a_rho_hat
    if x == 0.0:
        total = integrate_singular(f, 0.0, 1.0, e0, e1, MARGINAL_SPEC)
    else:
        ex = min(p.alpha - 1.0, 0.0)
        total = integrate_singular(f, 0.0, x, e0, ex, MARGINAL_SPEC) + integrate_singular(
            f, x, 1.0, ex, e1, MARGINAL_SPEC
        )
    return _rel(total, expected_passage_time(p, x))


def law_normalization_errors(p: StableParams) -> tuple[float, float]:
    """|mass - 1| for the infimum-before-passage and supremum-at-passage laws."""
    arh, ar = p.a_rho_hat, p.a_rho
    inf_mass = integrate_singular(
        lambda y: infimum_before_passage_density(p, y), 0.0, 1.0, -arh, arh - 1.0, MARGINAL_SPEC
    )
    # directly on (1, 2); t = 1/s maps (2, inf) onto (0, 1/2)
    sup_mass = integrate_singular(
        lambda t: supremum_at_passage_density(p, t), 1.0, 2.0, ar - 1.0, 0.0, MARGINAL_SPEC
    ) + integrate_singular(
        lambda s: supremum_at_passage_density(p, 1.0 / s) / s / s, 0.0, 0.5, arh - 1.0, 0.0, MARGINAL_SPEC
    )
    return abs(inf_mass - 1.0), abs(sup_mass - 1.0)


def limit_error(p: StableParams, y: float, z: float = 1e-4) -> float:
    """Relative gap between ``u1(z, y) / P_z(exit up)`` and ``r1(0, y)``."""
    return _rel(u1_density(p, z, y) / exit_up_prob(p, z), r1_zero_density(p, y))


def factorization_error(p: StableParams, points=((0.5, 0.25, 0.6, 0.5), (0.3, 0.1, 0.6, 0.2), (0.8, 0.05, 0.9, 2.0))) -> float:
    """Triple law against position/supremum density times jump density."""
    err = 0.0
    for x, u, v, y in points:
        direct = exit_triple_density(p, x, u, v, y)
        product = u_xyz_density(p, x, 1.0 - v, 1.0 - u) * levy_density(p, v + y)
        err = max(err, _rel(direct, product))
    return err


def _params_dict(p: StableParams, **extra) -> dict:
    d = {"alpha": p.alpha, "rho": p.rho}
    d.update(extra)
    return d


def identity_suite(p: StableParams, *, grid=GRID, seed: int = 0, n_duality: int = 1000) -> list[Check]:
    checks = []
    pd = _params_dict(p)
    err_u, err_e = duality_errors(p, n_duality, seed)
    checks.append(_check("duality.u1", _params_dict(p, n=n_duality, seed=seed), err_u, 1e-10))
    checks.append(_check("duality.exit_up_prob", _params_dict(p, n=n_duality, seed=seed), err_e, 1e-10))

    pairs = [(x, y) for x in grid for y in grid if x != y]
    checks.append(_check("marginal.u_xyz", pd, max(marginal_u_error(p, x, y) for x, y in pairs), 1e-6))
    checks.append(_check("marginal.r_xyz", pd, max(marginal_r_error(p, x, y) for x, y in pairs), 1e-6))
    checks.append(_check("marginal.r_xyz_zero", pd, max(marginal_r_error(p, 0.0, y) for y in grid), 1e-6))
    checks.append(
        _check("marginal.r1_mean_passage", pd, max(marginal_r1_error(p, x) for x in (0.0,) + tuple(grid)), 1e-6)
    )

    inf_err, sup_err = law_normalization_errors(p)
    checks.append(_check("normalization.infimum_law", pd, inf_err, 1e-8))
    checks.append(_check("normalization.supremum_law", pd, sup_err, 1e-8))
    for x in (0.0, 0.3, 0.7):
        mass = TripleLaw(p, x, reflected=True).mass()
        checks.append(_check("normalization.reflected_triple", _params_dict(p, x=x), abs(mass - 1.0), 1e-4))
    for x in (0.3, 0.7):
        mass = TripleLaw(p, x).mass()
        checks.append(_check("normalization.killed_triple", _params_dict(p, x=x), abs(mass - exit_up_prob(p, x)), 1e-4))

    checks.append(
        _check("limit.r1_zero", _params_dict(p, z=1e-4), max(limit_error(p, y) for y in (0.2, 0.5, 0.8)), 1e-2)
    )
    checks.append(_check("factorization.killed_triple", pd, factorization_error(p), 1e-12))
    return checks


# -- Monte Carlo ----------------------------------------------------------------


@dataclass(frozen=True)
class MCPlan:
    n_paths: int = 100_000
    step: float = 1e-4
    seed: int = 0
    x_killed: float = 0.5
    x_reflected: float = 0.3
    n_cells: int = 50
    central: float = 0.8
    density_threshold: float = 0.05
    ks_threshold: float = 0.02
    perturbation: float = 0.1
    max_steps: int = 10_000_000
    budget: int | None = None


def _u1_singular(p: StableParams, x: float) -> dict:
    return {0.0: p.a_rho, x: min(p.alpha - 1.0, 0.0), 1.0: p.a_rho_hat}


def _r1_singular(p: StableParams, x: float) -> dict:
    d = {0.0: p.a_rho - 1.0, 1.0: p.a_rho_hat}
    if x > 0.0:
        d[x] = min(p.alpha - 1.0, 0.0)
    return d


def u1_cell_averages(p: StableParams, x: float, edges) -> np.ndarray:
    from .mc import cell_averages

    return cell_averages(lambda y: u1_density(p, x, y), edges, _u1_singular(p, x))


def r1_cell_averages(p: StableParams, x: float, edges) -> np.ndarray:
    from .mc import cell_averages

    return cell_averages(lambda y: r1_density(p, x, y), edges, _r1_singular(p, x))


def _cdf_grids(top: float):
    """Abscissae for tabulating the overshoot and undershoot CDFs.

    The undershoot density is singular at 0, at 1 and at ``top = 1 - x``,
    so points cluster geometrically towards each of them.
    """
    ys = np.concatenate([[0.0], np.geomspace(1e-5, 1e5, 121)])
    tail = np.geomspace(1e-7, 0.5, 60)
    pts = [[0.0, 1.0], tail, 1.0 - tail]
    if 0.0 < top < 1.0:
        near = np.geomspace(1e-8, 0.25, 40) * min(top, 1.0 - top) * 2.0
        pts += [[top], top - near, top + near]
    vs = np.unique(np.clip(np.concatenate(pts), 0.0, 1.0))
    return ys, vs


def _ks_checks(tag: str, p: StableParams, x: float, records, reflected: bool, plan: MCPlan, pd: dict) -> list[Check]:
    from .mc import interpolated_cdf, ks_distance

    law = TripleLaw(p, x, reflected=reflected)
    ys, vs = _cdf_grids(1.0 - x)
    over = interpolated_cdf(ys, np.concatenate([[0.0], law.overshoot_cdf(ys[1:])]))
    under = interpolated_cdf(vs, law.undershoot_cdf(vs))
    return [
        _check(f"mc.{tag}.overshoot_ks", pd, ks_distance(records.overshoots(), over), plan.ks_threshold),
        _check(f"mc.{tag}.undershoot_ks", pd, ks_distance(records.undershoots(), under), plan.ks_threshold),
    ]


def _mean_check(name: str, est, exact: float, step: float, alpha: float, pd: dict) -> Check:
    """Passes when ``-3 SE <= mc - exact <= 3 SE + step**(1/alpha)``.

    ``observed`` is ``mc - exact`` and ``threshold`` the upper allowance.
    """
    diff = est.value - exact
    upper = 3.0 * est.std_error + step ** (1.0 / alpha)
    ok = -3.0 * est.std_error <= diff <= upper
    return Check(name, dict(pd, mc=est.value, std_error=est.std_error, exact=exact), float(diff), float(upper), bool(ok))


def _guard(name: str, observed: float, threshold: float, pd: dict) -> Check:
    """Perturbation guard: passes when the perturbed comparison FAILS."""
    return Check(name, pd, float(observed), threshold, bool(observed > threshold))


def perturbed(p: StableParams, delta: float) -> StableParams:
    """Same alpha with rho shifted by ``delta``; may leave the admissible set."""
    return make_params(p.alpha, p.rho + delta, strict=False)


def mc_suite(p: StableParams, plan: MCPlan = MCPlan()) -> list[Check]:
    from .mc import MCConfig, compare, estimate_density, mean_time, simulate_exit, simulate_reflected

    kwargs = {}
    if plan.budget is not None:
        kwargs["budget"] = plan.budget
    cfg = MCConfig(
        n_paths=plan.n_paths, step=plan.step, seed=plan.seed, n_cells=plan.n_cells,
        max_steps=plan.max_steps, **kwargs,
    )
    base = _params_dict(p, seed=plan.seed, n_paths=plan.n_paths, step=plan.step)
    checks = []
    deltas = (-plan.perturbation, plan.perturbation)

    runs = (
        ("killed", plan.x_killed, False, simulate_exit, u1_cell_averages, mean_exit_time, "mean_exit_time"),
        ("reflected", plan.x_reflected, True, simulate_reflected, r1_cell_averages, expected_passage_time,
         "mean_passage_time"),
    )
    for tag, x, reflected, simulate, averages, mean_fn, mean_name in runs:
        pd = dict(base, x=x)
        rec = simulate(p, x, config=cfg)
        n_capped = int(rec.capped.sum())
        checks.append(_check(f"mc.{tag}.capped_paths", pd, n_capped, 0))
        est = estimate_density(rec)
        target = averages(p, x, rec.edges)
        rep = compare(target, est, edges=rec.edges, central=plan.central, threshold=plan.density_threshold)
        checks.append(_check(f"mc.{tag}.occupation_sup_rel", pd, rep.sup_rel_deviation, plan.density_threshold))
        checks.extend(_ks_checks(tag, p, x, rec, reflected, plan, pd))
        checks.append(_mean_check(f"mc.{tag}.{mean_name}", mean_time(rec), mean_fn(p, x), plan.step, p.alpha, pd))
        for d in deltas:
            q = perturbed(p, d)
            bad = compare(averages(q, x, rec.edges), est, edges=rec.edges, central=plan.central,
                          threshold=plan.density_threshold)
            checks.append(
                _guard(f"mc.{tag}.perturbed_rho_{d:+g}", bad.sup_rel_deviation, plan.density_threshold,
                       dict(pd, rho_perturbed=q.rho))
            )
    return checks


# -- reports ---------------------------------------------------------------------


def report_dict(checks: list[Check], suite: str) -> dict:
    from . import __version__

    return {
        "tool": "stable-potentials",
        "version": __version__,
        "suite": suite,
        "checks": [c.to_dict() for c in checks],
    }


def write_report(checks: list[Check], path, suite: str) -> None:
    """Write the JSON report atomically; floats keep full precision."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".report-", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(report_dict(checks, suite), fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def all_passed(checks: list[Check]) -> bool:
    return all(c.passed for c in checks)


__all__ = [
    "Check",
    "MCPlan",
    "all_passed",
    "identity_suite",
    "mc_suite",
    "perturbed",
    "report_dict",
    "write_report",
]
