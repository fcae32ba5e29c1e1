"""Command-line front end: ``roaming {nash,fair,sweep,bestresponse}``.

Exit codes: 0 success, 1 invalid input or I/O failure, 2 numeric condition
(non-convergence, phi = 0 degeneracy, no sign change for the fair charge).
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from .equilibrium import InteriorityError, closed_form_ne, price_cap, solve_ne
from .fairness import BracketError, DegenerateFairnessError, closed_form_rstar, find_rstar
from .model import MODES, Congestion, ConvergenceError, GameParams, PricePair
from .sweep import (
    best_response_crossing,
    default_r_grid,
    export_table,
    sweep_best_response,
    sweep_utilities_vs_r,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERIC = 2

PARAM_KEYS = {
    "delta": "delta", "dmax": "d_max", "r": "r", "b1": "b1", "b2": "b2", "gamma": "gamma",
    "cd1": "cd1", "cd2": "cd2", "cb1": "cb1", "cb2": "cb2",
}
FLOAT_KEYS = set(PARAM_KEYS) | {"phi", "r_min", "r_max", "p_min", "p_max", "init_p1", "init_p2"}
INT_KEYS = {"points"}
STR_KEYS = {"congestion", "mode", "format", "output"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CliConfig:
    params: GameParams
    mode: str = "simplified"
    format: str = "csv"
    output: str = "-"
    points: int | None = None
    r_min: float | None = None
    r_max: float | None = None
    p_min: float | None = None
    p_max: float | None = None
    init: PricePair | None = None


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment line."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=("#",))
    try:
        parser.read_string("[config]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return {k.replace("-", "_"): v for k, v in parser["config"].items()}


def _coerce(raw: dict[str, object]) -> dict[str, object]:
    out: dict[str, object] = {}
    for key, value in raw.items():
        if value is None:
            continue
        if key not in FLOAT_KEYS | INT_KEYS | STR_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            if key in FLOAT_KEYS:
                out[key] = float(value)
            elif key in INT_KEYS:
                out[key] = int(value)
            else:
                out[key] = str(value).strip()
        except ValueError:
            raise ConfigError(f"bad value for {key}: {value!r}") from None
    return out


def build_config(values: dict[str, object]) -> CliConfig:
    """Validate merged settings (file values already overridden by flags)."""
    v = _coerce(values)
    kwargs = {PARAM_KEYS[k]: v[k] for k in PARAM_KEYS if k in v}
    if "congestion" in v:
        kwargs["congestion"] = v["congestion"]
    if "phi" in v:
        phi_ = v["phi"]
        if not 0.0 <= phi_ < 1.0:
            raise ConfigError(f"phi must lie in [0, 1), got {phi_}")
        kwargs["b2"] = kwargs.get("b1", 10.0) * (1.0 - phi_)
    try:
        params = GameParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    mode = v.get("mode", "simplified")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    fmt = v.get("format", "csv")
    if fmt not in ("csv", "jsonl"):
        raise ConfigError(f"format must be csv or jsonl, got {fmt!r}")
    points = v.get("points")
    if points is not None and points < 1:
        raise ConfigError("points must be >= 1")
    init = None
    if "init_p1" in v or "init_p2" in v:
        if not ("init_p1" in v and "init_p2" in v):
            raise ConfigError("initial prices need both init_p1 and init_p2")
        try:
            init = PricePair(v["init_p1"], v["init_p2"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return CliConfig(
        params=params, mode=mode, format=fmt, output=v.get("output", "-"), points=points,
        r_min=v.get("r_min"), r_max=v.get("r_max"), p_min=v.get("p_min"), p_max=v.get("p_max"),
        init=init,
    )


def _grid(lo: float | None, hi: float | None, n: int, default_lo: float, default_hi: float) -> np.ndarray:
    lo = default_lo if lo is None else lo
    hi = default_hi if hi is None else hi
    if n == 1:
        return np.array([lo])
    if not hi > lo:
        raise ConfigError(f"grid upper bound {hi} must exceed lower bound {lo}")
    return np.linspace(lo, hi, n)


def _describe(params: GameParams, mode: str) -> str:
    return (f"delta={params.delta:g} d_max={params.d_max:g} r={params.r:g} phi={params.phi:.6g} "
            f"congestion={params.congestion.value} mode={mode}")


def cmd_nash(config: CliConfig, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    params = config.params
    if config.mode == "simplified":
        try:
            cf = closed_form_ne(params)
        except InteriorityError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    try:
        ne = solve_ne(params, config.mode, config.init)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(_describe(params, config.mode), file=out)
    print(f"p1* = {ne.prices.p1:.10f}", file=out)
    print(f"p2* = {ne.prices.p2:.10f}", file=out)
    print(f"U1* = {ne.utilities.u1:.10g}", file=out)
    print(f"U2* = {ne.utilities.u2:.10g}", file=out)
    print(f"interior = {ne.interior}", file=out)
    print(f"soc_ok = {ne.soc_ok}", file=out)
    print(f"converged = {ne.converged} (iterations={ne.iterations}, "
          f"price_change={ne.price_change:.3e}, br_residual={ne.br_residual:.3e})", file=out)
    if config.mode == "simplified":
        diff = max(abs(ne.prices.p1 - cf.p1), abs(ne.prices.p2 - cf.p2))
        print(f"closed-form p* = {cf.p1:.10f} (max discrepancy {diff:.3e})", file=out)
    return EXIT_OK if ne.converged else EXIT_NUMERIC


def cmd_fair(config: CliConfig, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    params = config.params
    try:
        res = find_rstar(params, config.mode)
    except DegenerateFairnessError as exc:
        print(f"degenerate: {exc}", file=out)
        return EXIT_NUMERIC
    except (BracketError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(_describe(params, config.mode), file=out)
    print(f"r* = {res.r_star:.10f} (root-find, {res.iterations} iterations)", file=out)
    if config.mode == "simplified":
        cf = closed_form_rstar(params)
        print(f"closed-form r* = {cf:.10f} (discrepancy {abs(res.r_star - cf):.3e})", file=out)
    print(f"gap at root = {res.gap:.3e}", file=out)
    return EXIT_OK


def cmd_sweep(config: CliConfig, out: TextIO | None = None) -> int:
    params = config.params
    if config.r_min is None and config.r_max is None and params.phi > 0:
        grid = None if config.points is None else default_r_grid(params, config.points)
    else:
        r_hi = 2.0 / (params.delta * params.phi) if params.phi > 0 else 2.0 / params.delta
        n = config.points or 200
        grid = _grid(config.r_min, config.r_max, n, 0.0, r_hi * (1 - 0.5 / n))
    table = sweep_utilities_vs_r(params, grid, config.mode)
    return _write(table, config, out)


def cmd_bestresponse(config: CliConfig, out: TextIO | None = None) -> int:
    params = config.params
    cap = price_cap(params)
    grid = _grid(config.p_min, config.p_max, config.points or 201, 0.0, cap)
    table = sweep_best_response(params, grid, config.mode)
    crossing = best_response_crossing(table)
    msg = ("crossing: out-of-grid" if crossing is None
           else f"crossing: p1 = {crossing[0]:.6f}, p2 = {crossing[1]:.6f}")
    # keep stdout clean for the table when writing it there
    print(msg, file=sys.stderr if config.output == "-" else (out or sys.stdout))
    return _write(table, config, out)


def _write(table, config: CliConfig, out: TextIO | None) -> int:
    dest = config.output
    if dest == "-" and out is not None:
        dest = out
    try:
        export_table(table, config.format, dest)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


COMMANDS = {"nash": cmd_nash, "fair": cmd_fair, "sweep": cmd_sweep, "bestresponse": cmd_bestresponse}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model parameters")
    g.add_argument("--config", metavar="PATH", help="flat key = value config file; flags override it")
    for flag in ("delta", "dmax", "r", "b1", "b2", "phi", "gamma", "cd1", "cd2", "cb1", "cb2"):
        g.add_argument(f"--{flag}", type=float, default=None)
    g.add_argument("--congestion", choices=[c.value for c in Congestion], default=None)
    g.add_argument("--mode", choices=MODES, default=None)
    g.add_argument("--format", choices=("csv", "jsonl"), default=None)
    g.add_argument("-o", "--output", metavar="PATH", default=None, help="table destination, '-' for stdout")

    parser = argparse.ArgumentParser(prog="roaming", description="Roaming-charge pricing game solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nash", parents=[common], help="Nash equilibrium prices and utilities")
    p.add_argument("--init", nargs=2, type=float, metavar=("P1", "P2"), default=None)

    sub.add_parser("fair", parents=[common], help="fair roaming charge r*")

    p = sub.add_parser("sweep", parents=[common], help="equilibrium utilities and fairness gap versus r")
    p.add_argument("--r-min", type=float, default=None)
    p.add_argument("--r-max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)

    p = sub.add_parser("bestresponse", parents=[common], help="best-response curves and their crossing")
    p.add_argument("--p-min", type=float, default=None)
    p.add_argument("--p-max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "init")}
    if getattr(args, "init", None) is not None:
        flags["init_p1"], flags["init_p2"] = args.init
    try:
        values: dict[str, object] = read_config_file(args.config) if args.config else {}
        values.update({k: v for k, v in flags.items() if v is not None})
        config = build_config(values)
        return COMMANDS[args.command](config, out)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"roaming {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"roaming {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
