"""Command-line front end: ``transmute apply|solve|check``.

Output is CSV with ``#`` header comments. Exit codes: 0 success, 1 a check
missed its tolerance, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from types import SimpleNamespace as Settings
from typing import Callable, Sequence, TextIO

import numpy as np

from .epd import FORMULAS, CauchyData, GridSpec, evaluate_field
from .errors import TransmuteError
from .functions import gaussian, parse_function_spec
from .hankel import RadialGrid, WeightSpec, hankel_fwd, hankel_inv, itcm_compose, poisson_weight
from .operators import (
    OperatorParams,
    bessel_frac_power,
    descent_first,
    descent_second,
    gen_translation,
    index_shift,
    poisson,
)
from .verify import intertwine_residual, pde_residual

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "order": 64,
    "rel_tol": 1.0e-12,
    "t_max": 30.0,
    "n": 2000,
    "nu": 1.0,
    "mu": 0.5,
    "alpha": -0.5,
    "c": 1.0,
    "b": 0.0,
    "z": 0.0,
    "h": 1.0e-3,
}

OPS = ("poisson", "descent1", "descent2", "index-shift", "frac-power", "translation")
SUITES = ("intertwine", "residual", "hankel-roundtrip", "itcm-vs-closed", "all")


class UsageError(Exception):
    pass


def fmt(value: float) -> str:
    """Shortest representation that round-trips to the same double."""
    return repr(float(value))


# {{{ configuration


def read_config(path: str) -> dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc

    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


_CASTS: dict[str, Callable[[str], object]] = {
    "order": int,
    "n": int,
    "rel_tol": float,
    "t_max": float,
    "nu": float,
    "mu": float,
    "alpha": float,
    "c": float,
    "b": float,
    "z": float,
    "h": float,
}


def resolve(args: argparse.Namespace) -> Settings:
    """Merge flags over the config file over built-in defaults."""
    config = read_config(args.config) if args.config else {}
    values = dict(vars(args))
    for key, cast in _CASTS.items():
        if values.get(key) is not None:
            continue
        if key in config:
            try:
                values[key] = cast(config[key])
            except ValueError as exc:
                raise UsageError(f"config value for {key} is malformed: {config[key]!r}") from exc
        else:
            values[key] = DEFAULTS[key]
    for key in ("f", "g", "grid", "x", "op", "formula"):
        if values.get(key) is None and key in config:
            values[key] = config[key]
    return Settings(**values)


def parse_points(text: str | Sequence[str]) -> np.ndarray:
    tokens = [text] if isinstance(text, str) else list(text)
    try:
        return np.array(
            [float(v) for tok in tokens for v in tok.split(",") if v.strip()], dtype=np.float64
        )
    except ValueError as exc:
        raise UsageError(f"malformed point list {tokens}") from exc


def parse_grid(text: str) -> GridSpec:
    """``xmin:xmax:nx,tmin:tmax:nt``."""
    try:
        xpart, tpart = text.split(",")
        x0, x1, nx = xpart.split(":")
        t0, t1, nt = tpart.split(":")
        return GridSpec(float(x0), float(x1), float(t0), float(t1), int(nx), int(nt))
    except ValueError as exc:
        raise UsageError(f"malformed grid {text!r}; expected xmin:xmax:nx,tmin:tmax:nt") from exc


# }}}


# {{{ commands


def _apply_op(s: Settings, xs: np.ndarray) -> np.ndarray:
    f = parse_function_spec(s.f)
    op = s.op
    if op == "poisson":
        return poisson(s.mu, f, xs, s.order)
    if op == "descent1":
        return descent_first(s.nu, s.mu, f, xs, s.order)
    if op == "descent2":
        return descent_second(s.nu, s.mu, f, xs, s.order, rel_tol=s.rel_tol)
    if op == "index-shift":
        return index_shift(s.alpha, s.nu, s.mu, s.c, f, xs, s.order, s.rel_tol)
    if op == "frac-power":
        return bessel_frac_power(s.alpha, s.nu, f, xs, s.order, s.rel_tol)
    if op == "translation":
        return gen_translation(s.nu, f, xs, s.z, s.order)
    raise UsageError(f"unknown op {op!r}; expected one of {', '.join(OPS)}")


def cmd_apply(s: Settings, out: TextIO) -> int:
    if not s.op or not s.f or s.x is None:
        raise UsageError("apply needs --op, --f and --x")
    xs = parse_points(s.x)
    values = np.atleast_1d(_apply_op(s, xs))
    out.write(f"# op={s.op} f={s.f} nu={fmt(s.nu)} mu={fmt(s.mu)} alpha={fmt(s.alpha)} "
              f"c={fmt(s.c)} z={fmt(s.z)} order={s.order}\n")
    for xi, vi in zip(xs, values):
        out.write(f"{fmt(xi)},{fmt(vi)}\n")
    return EXIT_OK


def cmd_solve(s: Settings, out: TextIO) -> int:
    if not s.formula or not s.f or not s.grid:
        raise UsageError("solve needs --formula, --f and --grid")
    data = CauchyData(parse_function_spec(s.f), parse_function_spec(s.g) if s.g else None)
    params = OperatorParams(nu=s.nu, mu=s.mu, alpha=s.alpha, b=s.b)
    field = evaluate_field(s.formula, params, data, parse_grid(s.grid), s.order)

    out.write(f"# formula={s.formula} nu={fmt(s.nu)} mu={fmt(s.mu)} b={fmt(s.b)} "
              f"f={s.f} g={s.g or 'none'} order={s.order}\n")
    out.write("x,t,u\n")
    for i, xi in enumerate(field.grid.x):
        for j, tj in enumerate(field.grid.t):
            out.write(f"{fmt(xi)},{fmt(tj)},{fmt(field.values[i, j])}\n")
    return EXIT_OK


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    value: float
    tol: float
    detail: str = ""

    @property
    def ok(self) -> bool:
        return bool(self.value <= self.tol)


def _suite_intertwine(s: Settings) -> list[CheckResult]:
    f = gaussian(1.0)
    xs = np.linspace(0.5, 3.0, 11)
    cases = [
        ("poisson mu=0.5", "poisson", 0.0, 0.5, {}),
        ("descent_first nu=0.25 mu=0.75", "descent_first", 0.25, 0.75, {}),
        ("descent_second nu=0.75 mu=0.25", "descent_second", 0.75, 0.25, {}),
        ("index_shift alpha=-0.6 nu=0.5 mu=1.2", "index_shift", 0.5, 1.2, {"alpha": -0.6}),
        ("gen_translation nu=1 z=0.7", "gen_translation", 1.0, 1.0, {"z": 0.7}),
    ]
    out = []
    for name, op, nu, mu, kw in cases:
        rep = intertwine_residual(op, nu, mu, f, xs, s.order, s.h, **kw)
        out.append(CheckResult("intertwine", name, rep.max_abs, 5.0e-4, str(rep)))
    return out


def _suite_residual(s: Settings) -> list[CheckResult]:
    grid = GridSpec(0.2, 2.0, 0.2, 2.0, 8, 8)
    data = CauchyData(gaussian(1.0), gaussian(0.5))
    cases = [
        ("dalembert", OperatorParams()),
        ("epd_general", OperatorParams(mu=0.5)),
        ("gepd_general", OperatorParams(nu=0.25, mu=0.75)),
        ("gepd_spectral_general", OperatorParams(nu=0.5, mu=0.25, b=1.0)),
        ("epd_cauchy", OperatorParams(mu=0.5)),
        ("epd_cauchy_first", OperatorParams(mu=0.75)),
        ("epd_cauchy_second", OperatorParams(mu=0.25)),
        ("gepd_cauchy_descent", OperatorParams(mu=0.25, nu=0.75)),
        ("gepd_spectral_cauchy", OperatorParams(mu=0.25, nu=0.75, b=1.0)),
    ]
    out = []
    for fid, params in cases:
        rep = pde_residual(fid, params, data, grid, s.order, s.h)
        out.append(CheckResult("residual", fid, rep.max_abs, 5.0e-4, str(rep)))
    return out


def _suite_hankel(s: Settings) -> list[CheckResult]:
    f = gaussian(0.5)
    xs = np.linspace(0.1, 3.0, 59)
    grid = RadialGrid.build(s.t_max, s.n)
    out = []
    for nu in (0.5, 1.0):
        fhat = hankel_fwd(nu, f, grid.nodes, grid)
        err = float(np.max(np.abs(hankel_inv(nu, fhat, xs, grid) - f(xs))))
        out.append(CheckResult("hankel-roundtrip", f"nu={nu:g} n={grid.n}", err, 1.0e-4))
    return out


def _suite_itcm(s: Settings) -> list[CheckResult]:
    f = gaussian(0.5)
    xs = np.linspace(0.5, 2.0, 16)
    grid = RadialGrid.build(s.t_max, s.n)
    out = []
    for mu in (0.5, 1.5):
        val = itcm_compose(0.0, mu, poisson_weight(mu), "P", f, xs, grid)
        err = float(np.max(np.abs(val - poisson(mu, f, xs, s.order))))
        out.append(CheckResult("itcm-vs-closed", f"poisson mu={mu:g}", err, 2.0e-3))
    nu = s.nu
    for z in (0.5, 1.0):
        w = WeightSpec.small_bessel(0.5 * (nu - 1.0), z)
        val = itcm_compose(nu, nu, w, "P", f, xs, grid)
        err = float(np.max(np.abs(val - gen_translation(nu, f, xs, z, s.order))))
        out.append(CheckResult("itcm-vs-closed", f"translation nu={nu:g} z={z:g}", err, 2.0e-3))
    return out


_SUITE_FNS = {
    "intertwine": _suite_intertwine,
    "residual": _suite_residual,
    "hankel-roundtrip": _suite_hankel,
    "itcm-vs-closed": _suite_itcm,
}


def cmd_check(s: Settings, out: TextIO) -> int:
    suite = s.suite
    names = list(_SUITE_FNS) if suite == "all" else [suite]
    results = [r for name in names for r in _SUITE_FNS[name](s)]

    for r in results:
        status = "PASS" if r.ok else "FAIL"
        out.write(f"# {status} {r.suite}: {r.name}: {r.value:.3e} (tol {r.tol:.0e})"
                  + (f" [{r.detail}]" if r.detail else "") + "\n")
    n_ok = sum(r.ok for r in results)
    all_ok = n_ok == len(results)
    out.write("suite,passed,total,status\n")
    out.write(f"{suite},{n_ok},{len(results)},{'PASS' if all_ok else 'FAIL'}\n")
    return EXIT_OK if all_ok else EXIT_TOLERANCE


# }}}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nu", type=float)
    common.add_argument("--mu", type=float)
    common.add_argument("--alpha", type=float)
    common.add_argument("--b", type=float)
    common.add_argument("--c", type=float, help="index-shift constant")
    common.add_argument("--z", type=float, help="translation shift")
    common.add_argument("--f", help="function spec, e.g. gaussian:1 or poly:1,0,2")
    common.add_argument("--g", help="second function spec")
    common.add_argument("--x", action="append", help="evaluation points, comma separated")
    common.add_argument("--grid", help="xmin:xmax:nx,tmin:tmax:nt")
    common.add_argument("--order", type=int)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--t-max", dest="t_max", type=float, help="Hankel truncation radius")
    common.add_argument("--n", type=int, help="Hankel grid size")
    common.add_argument("--h", type=float, help="finite-difference step")
    common.add_argument("--config", help="key=value file; flags take precedence")
    common.add_argument("--out", help="write CSV here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="transmute", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", parents=[common], help="apply an operator at points")
    p.add_argument("--op", choices=OPS)

    p = sub.add_parser("solve", parents=[common], help="evaluate a solution formula on a grid")
    p.add_argument("--formula", choices=FORMULAS)

    p = sub.add_parser("check", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=SUITES)

    return parser


_COMMANDS = {"apply": cmd_apply, "solve": cmd_solve, "check": cmd_check}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        settings = resolve(args)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                return _COMMANDS[args.command](settings, fh)
        return _COMMANDS[args.command](settings, sys.stdout)
    except (UsageError, TransmuteError) as exc:
        print(f"transmute: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
