"""Command-line front end: ``eval``, ``grid`` and ``verify``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Callable

from . import __version__
from .errors import DomainError
from .exit_laws import exit_up_prob, infimum_before_passage_density, supremum_at_passage_density
from .killed import Interval, exit_triple_density, interior_grid, tabulate, u1_density, uA_density, u_xyz_density
from .params import StableParams, levy_density, make_params
from .reflected import expected_passage_time, r1_density, r_xyz_density, reflected_triple_density

ACCEPTANCE_PARAMS = ((0.7, 0.6), (1.0, 0.5), (1.5, 0.4))


@dataclass(frozen=True)
class Quantity:
    coords: tuple[str, ...]
    formula: str
    fn: Callable


def _u1(p, c):
    if c.get("lo") is not None or c.get("hi") is not None:
        lo = 0.0 if c.get("lo") is None else c["lo"]
        hi = 1.0 if c.get("hi") is None else c["hi"]
        return uA_density(p, Interval(lo, hi), c["x"], c["y"])
    return u1_density(p, c["x"], c["y"])


QUANTITIES = {
    "u1": Quantity(("x", "y"), "occupation density before exit from [0,1] (or [lo,hi])", _u1),
    "uxyz": Quantity(
        ("x", "y", "z"), "joint occupation density of position y and supremum z before passage below 0",
        lambda p, c: u_xyz_density(p, c["x"], c["y"], c["z"]),
    ),
    "triple": Quantity(
        ("x", "u", "v", "y"), "joint law of (1-sup, 1-pre-exit position, overshoot) at exit above 1",
        lambda p, c: exit_triple_density(p, c["x"], c["u"], c["v"], c["y"]),
    ),
    "r1": Quantity(
        ("x", "y"), "occupation density of the reflected process before passage above 1",
        lambda p, c: r1_density(p, c["x"], c["y"]),
    ),
    "rxyz": Quantity(
        ("x", "y", "z"), "joint occupation density of position y and supremum z, reflected process",
        lambda p, c: r_xyz_density(p, c["x"], c["y"], c["z"]),
    ),
    "rtriple": Quantity(
        ("x", "u", "v", "y"), "joint law of (1-sup, 1-pre-passage position, overshoot), reflected process",
        lambda p, c: reflected_triple_density(p, c["x"], c["u"], c["v"], c["y"]),
    ),
    "exit-prob": Quantity(
        ("x",), "probability of leaving [0,1] upwards (regularized incomplete beta)",
        lambda p, c: exit_up_prob(p, c["x"]),
    ),
    "epass": Quantity(
        ("x",), "mean first-passage time above 1 of the reflected process",
        lambda p, c: expected_passage_time(p, c["x"]),
    ),
    "law-inf": Quantity(
        ("y",), "density of the infimum before passage below 0, started at 1",
        lambda p, c: infimum_before_passage_density(p, c["y"]),
    ),
    "law-sup": Quantity(
        ("y",), "density of the supremum at passage below 0, started at 1 (y > 1)",
        lambda p, c: supremum_at_passage_density(p, c["y"]),
    ),
    "levy": Quantity(("y",), "Levy density at jump size y", lambda p, c: levy_density(p, c["y"])),
    "q": Quantity((), "killing rate of the Lamperti-transformed process absorbed below 0", lambda p, c: p.q),
}


class UsageError(Exception):
    pass


def _float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _pair(text: str) -> tuple[float, float]:
    try:
        a, r = text.split(",")
        return float(a), float(r)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected alpha,rho but got {text!r}") from None


def _add_quantity_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    for name in QUANTITIES:
        group.add_argument(f"--{name}", dest="quantity", action="store_const", const=name)
    parser.add_argument("--alpha", type=_float, required=True)
    parser.add_argument("--rho", type=_float, required=True)
    for c in ("x", "y", "z", "u", "v"):
        parser.add_argument(f"--{c}", type=_float)
    parser.add_argument("--lo", type=_float, help="u1 only: lower end of the interval")
    parser.add_argument("--hi", type=_float, help="u1 only: upper end of the interval")


def _coords(args, quantity: Quantity, skip: str | None = None) -> dict:
    coords = {}
    for c in quantity.coords:
        if c == skip:
            continue
        value = getattr(args, c)
        if value is None:
            raise UsageError(f"--{args.quantity} needs --{c}")
        coords[c] = value
    if args.quantity == "u1" and (args.lo is not None or args.hi is not None):
        coords["lo"], coords["hi"] = args.lo, args.hi
    return coords


def _provenance(name: str, p: StableParams, **extra) -> str:
    bits = [f"alpha={p.alpha!r}", f"rho={p.rho!r}"]
    bits += [f"{k}={v!r}" for k, v in extra.items()]
    return f"# {name}: {QUANTITIES[name].formula}; {' '.join(bits)}; stable-potentials {__version__}"


def cmd_eval(args) -> int:
    quantity = QUANTITIES[args.quantity]
    coords = _coords(args, quantity)
    p = make_params(args.alpha, args.rho)
    value = quantity.fn(p, coords)
    print(f"{value:.15g}")
    print(_provenance(args.quantity, p, **{k: v for k, v in coords.items() if v is not None}))
    return 0


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


PLOT_TEMPLATE = """# gnuplot script for {csv}
# {provenance}
set datafile separator ','
set key off
set xlabel '{vary}'
set ylabel '{quantity}'
plot '{csv}' skip 1 using 1:2 with linespoints
"""


def cmd_grid(args) -> int:
    quantity = QUANTITIES[args.quantity]
    if not quantity.coords:
        raise UsageError(f"--{args.quantity} has no coordinate to vary")
    vary = args.vary or ("y" if "y" in quantity.coords else quantity.coords[0])
    if vary not in quantity.coords:
        raise UsageError(f"--vary {vary} is not a coordinate of --{args.quantity} {quantity.coords}")
    fixed = _coords(args, quantity, skip=vary)
    p = make_params(args.alpha, args.rho)
    points = interior_grid(args.range_lo, args.range_hi, args.count, args.margin)
    grid = tabulate(lambda t: quantity.fn(p, dict(fixed, **{vary: t})), points)

    rows = ["abscissa,value"] + [f"{t!r},{v!r}" for t, v in zip(grid.points, grid.values)]
    _atomic_write(args.out, "\n".join(rows) + "\n")
    meta = {
        "tool": "stable-potentials",
        "version": __version__,
        "quantity": args.quantity,
        "formula": quantity.formula,
        "alpha": p.alpha,
        "rho": p.rho,
        "fixed": fixed,
        "vary": vary,
        "from": args.range_lo,
        "to": args.range_hi,
        "count": args.count,
        "margin": args.margin,
    }
    _atomic_write(args.out + ".meta.json", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    if args.plot_script:
        script = PLOT_TEMPLATE.format(
            csv=os.path.basename(args.out), vary=vary, quantity=args.quantity,
            provenance=_provenance(args.quantity, p, **fixed)[2:],
        )
        _atomic_write(args.plot_script, script)
    print(f"wrote {len(grid)} rows to {args.out}")
    return 0


def cmd_verify(args) -> int:
    from . import verify

    pairs = args.params or ([(args.alpha, args.rho)] if args.alpha is not None else list(ACCEPTANCE_PARAMS))
    if (args.alpha is None) != (args.rho is None):
        raise UsageError("--alpha and --rho go together")
    params = [make_params(a, r) for a, r in pairs]
    checks = []
    for p in params:
        if args.suite == "identities":
            checks += verify.identity_suite(p, seed=args.seed)
        else:
            plan = verify.MCPlan(n_paths=args.paths, step=args.step, seed=args.seed, budget=args.budget)
            checks += verify.mc_suite(p, plan)
    report = args.report or f"{args.suite}-report.json"
    verify.write_report(checks, report, args.suite)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.check} alpha={c.params['alpha']} rho={c.params['rho']} "
              f"observed={c.observed:.6g} threshold={c.threshold:.6g}")
    n_fail = sum(not c.passed for c in checks)
    print(f"{len(checks) - n_fail}/{len(checks)} checks passed; report in {report}")
    return 0 if n_fail == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stable-potentials",
        description="Potential densities and exit laws of stable processes killed or reflected at a barrier.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate one quantity at one point")
    _add_quantity_args(ev)
    ev.set_defaults(run=cmd_eval)

    gr = sub.add_parser("grid", help="tabulate one quantity along a coordinate to CSV")
    _add_quantity_args(gr)
    gr.add_argument("--vary", choices=("x", "y", "z", "u", "v"), help="coordinate to tabulate along")
    gr.add_argument("--from", dest="range_lo", type=_float, default=0.0, help="lower end of the range (default 0)")
    gr.add_argument("--to", dest="range_hi", type=_float, default=1.0, help="upper end of the range (default 1)")
    gr.add_argument("--count", type=int, default=99, help="number of interior points")
    gr.add_argument("--margin", type=_float, default=0.0, help="distance kept from both ends of the range")
    gr.add_argument("--out", required=True, help="CSV path; metadata goes to <out>.meta.json")
    gr.add_argument("--plot-script", help="also write a gnuplot script for the CSV")
    gr.set_defaults(run=cmd_grid)

    ve = sub.add_parser("verify", help="run the identity or Monte Carlo suite and write a JSON report")
    ve.add_argument("suite", choices=("identities", "mc"))
    ve.add_argument("--alpha", type=_float)
    ve.add_argument("--rho", type=_float)
    ve.add_argument("--params", type=_pair, nargs="+", metavar="ALPHA,RHO",
                    help="several parameter pairs (default: 0.7,0.6 1,0.5 1.5,0.4)")
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--paths", type=int, default=100_000, help="mc: number of paths")
    ve.add_argument("--step", type=_float, default=1e-4, help="mc: time step")
    ve.add_argument("--budget", type=int, help="mc: cap on paths x max steps (env STABLE_POTENTIALS_MC_BUDGET)")
    ve.add_argument("--report", help="report path (default <suite>-report.json)")
    ve.set_defaults(run=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
