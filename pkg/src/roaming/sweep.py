"""Parameter sweeps producing tables of equilibrium quantities, plus export."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .equilibrium import best_response, price_cap, solve_ne
from .model import ConvergenceError, GameParams

__all__ = [
    "SweepTable",
    "best_response_crossing",
    "default_r_grid",
    "export_table",
    "format_table",
    "read_csv_table",
    "sweep_best_response",
    "sweep_utilities_vs_r",
]

SIG_DIGITS = 12


@dataclass
class SweepTable:
    columns: list[str]
    rows: list[tuple[float | None, ...]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} values for {n} columns")

    def column(self, name: str) -> np.ndarray:
        """Column as a float array, empty cells as NaN."""
        j = self.columns.index(name)
        return np.array([np.nan if row[j] is None else row[j] for row in self.rows], dtype=float)


def _params_metadata(params: GameParams, mode: str) -> dict:
    meta = asdict(params)
    meta["congestion"] = params.congestion.value
    meta["phi"] = params.phi
    meta["mode"] = mode
    meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return meta


def _check_increasing(grid: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(grid, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if arr.size > 1 and not np.all(np.diff(arr) > 0):
        raise ValueError(f"{name} must be strictly increasing")
    return arr


def default_r_grid(params: GameParams, n: int = 200) -> np.ndarray:
    """``n`` uniform charges on (0, 2/(delta*phi)), inset half a step at both ends."""
    if params.phi <= 0:
        raise ValueError("default r-grid needs phi > 0")
    r_max = 2.0 / (params.delta * params.phi)
    step = r_max / n
    return step * (np.arange(n) + 0.5)


def sweep_utilities_vs_r(params: GameParams, r_grid: Sequence[float] | None = None,
                         mode: str = "simplified") -> SweepTable:
    """Equilibrium prices, utilities and fairness gap along a roaming-charge grid.

    Utilities and the gap are reported per unit of ``d_max``. A grid point
    whose equilibrium solve fails or does not converge gets empty cells
    rather than aborting the sweep.
    """
    grid = default_r_grid(params) if r_grid is None else _check_increasing(r_grid, "r_grid")
    if mode == "simplified" and grid.size and params.phi > 0:
        r_max = 2.0 / (params.delta * params.phi)
        if grid[0] < 0 or grid[-1] >= r_max:
            raise ValueError(f"r_grid must lie within [0, {r_max:.6g}) in simplified mode")
    elif grid.size and grid[0] < 0:
        raise ValueError("r_grid must be nonnegative")

    columns = ["r", "p1", "p2", "u1", "u2", "gap"]
    rows: list[tuple[float | None, ...]] = []
    phi_ = params.phi
    for r in grid:
        r = float(r)
        try:
            ne = solve_ne(replace(params, r=r), mode)
        except (ArithmeticError, ValueError, ConvergenceError):
            rows.append((r, None, None, None, None, None))
            continue
        if not ne.converged:
            rows.append((r, None, None, None, None, None))
            continue
        u1 = ne.utilities.u1 / params.d_max
        u2 = ne.utilities.u2 / params.d_max
        rows.append((r, ne.prices.p1, ne.prices.p2, u1, u2, (1.0 - phi_) * u1 - u2))
    return SweepTable(columns, rows, _params_metadata(params, mode))


def sweep_best_response(params: GameParams, price_grid: Sequence[float] | None = None,
                        mode: str = "simplified", n: int = 201) -> SweepTable:
    """Both best-response curves sampled on a common opponent-price grid.

    Row ``(p, br1, br2)``: ``br1`` is the incumbent's reply to p2 = p and
    ``br2`` the entrant's reply to p1 = p.
    """
    cap = price_cap(params)
    grid = np.linspace(0.0, cap, n) if price_grid is None else _check_increasing(price_grid, "price_grid")
    if grid.size and (grid[0] < 0 or grid[-1] > cap * (1 + 1e-12)):
        raise ValueError(f"price_grid must lie within [0, {cap:.6g}]")
    rows = []
    for p in grid:
        p = float(p)
        rows.append((p, best_response(1, p, params, mode).price, best_response(2, p, params, mode).price))
    meta = _params_metadata(params, mode)
    meta["kind"] = "best-response"
    return SweepTable(["p", "br1", "br2"], rows, meta)


def best_response_crossing(table: SweepTable) -> tuple[float, float] | None:
    """Estimated intersection (p1, p2) of the two best-response curves.

    Curve 1 is traced as (br1(p), p); the entrant's reply at p1 = br1(p) is
    interpolated from the br2 column, and the crossing is where that reply
    equals p. The corner p = 0, where both replies are trivially zero, is not
    counted. Returns None when the crossing is not inside the sampled grid.
    """
    p = table.column("p")
    br1 = table.column("br1")
    br2 = table.column("br2")
    if p.size < 2:
        return None
    inside = (br1 >= p[0]) & (br1 <= p[-1])
    reply = np.where(inside, np.interp(br1, p, br2), np.nan)
    h = np.where(p > 0.0, reply - p, np.nan)
    for i in range(p.size - 1):
        a, b = h[i], h[i + 1]
        if not (math.isfinite(a) and math.isfinite(b)):
            continue
        if a == 0.0:
            return float(br1[i]), float(p[i])
        if (a < 0.0) != (b < 0.0):
            t = a / (a - b)
            p2 = p[i] + t * (p[i + 1] - p[i])
            p1 = br1[i] + t * (br1[i + 1] - br1[i])
            return float(p1), float(p2)
    if math.isfinite(h[-1]) and h[-1] == 0.0:
        return float(br1[-1]), float(p[-1])
    return None


def _fmt(value: float | None) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return f"{value:.{SIG_DIGITS}g}"


def _round(value: float | None) -> float | None:
    if value is None or math.isnan(value):
        return None
    return float(_fmt(value))


def format_table(table: SweepTable, fmt: str = "csv") -> str:
    buf = io.StringIO()
    if fmt == "csv":
        for key, value in table.metadata.items():
            buf.write(f"# {key}: {value}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_fmt(v) for v in row])
    elif fmt == "jsonl":
        buf.write(json.dumps({"metadata": table.metadata}, sort_keys=True) + "\n")
        for row in table.rows:
            buf.write(json.dumps({c: _round(v) for c, v in zip(table.columns, row)}) + "\n")
    else:
        raise ValueError(f"unknown table format {fmt!r} (choose csv or jsonl)")
    return buf.getvalue()


def export_table(table: SweepTable, fmt: str = "csv", destination: str | Path | IO[str] = "-") -> None:
    """Write ``table`` as CSV or JSON lines to a path, an open stream, or ``-`` for stdout.

    CSV carries metadata as leading ``#`` comment lines; JSON lines carries it
    as a leading ``{"metadata": ...}`` record. Numbers keep 12 significant
    digits and missing values are empty (CSV) or null (JSON).

    Raises:
        OSError: if the destination cannot be written; the message names it.
    """
    text = format_table(table, fmt)
    if destination == "-":
        sys.stdout.write(text)
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write table to {path}: {exc.strerror or exc}") from exc


def read_csv_table(text: str) -> SweepTable:
    """Parse CSV produced by :func:`export_table` back into a table (metadata as strings)."""
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = value
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [tuple(float(v) if v != "" else None for v in rec) for rec in reader]
    return SweepTable(columns, rows, meta)
