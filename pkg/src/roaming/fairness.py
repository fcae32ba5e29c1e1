"""Fairness gap at equilibrium and the fair roaming charge.

A roaming charge is fair when equilibrium net revenue per unit of deployed
capacity is equal for both providers, U1*/B1 = U2*/B2. With phi = 1 - B2/B1
that reads (1 - phi) * U1* - U2* = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from scipy.optimize import brentq

from .equilibrium import InteriorityError, is_interior, solve_ne
from .model import GameParams

__all__ = [
    "BracketError",
    "DegenerateFairnessError",
    "FairnessResult",
    "closed_form_rstar",
    "fairness_gap",
    "find_rstar",
]

ROOT_XTOL = 1e-10


class BracketError(ValueError):
    """The fairness gap does not change sign over the admissible roaming charges."""


class DegenerateFairnessError(ValueError):
    """With phi = 0 nothing roams and the simplified gap is identically zero."""


@dataclass(frozen=True)
class FairnessResult:
    r_star: float
    gap: float
    method: str
    bracket: tuple[float, float]
    iterations: int = 0


def fairness_gap(r: float, params: GameParams, mode: str = "simplified") -> float:
    """(1 - phi) * U1* - U2* at the Nash equilibrium for roaming charge ``r``.

    Negative values favor the entrant, positive values the incumbent.
    """
    at_r = replace(params, r=r)
    if mode == "simplified" and not is_interior(at_r):
        raise InteriorityError(
            f"delta*r*phi = {at_r.delta * r * at_r.phi:.6g} >= 2: no interior equilibrium"
        )
    ne = solve_ne(at_r, mode)
    return (1.0 - at_r.phi) * ne.utilities.u1 - ne.utilities.u2


def closed_form_rstar(params: GameParams) -> float:
    phi_ = params.phi
    return 2.0 * (2.0 - phi_) / (params.delta * (4.0 - 3.0 * phi_) ** 2)


def find_rstar(params: GameParams, mode: str = "simplified") -> FairnessResult:
    """Root of the fairness gap in r by Brent's method.

    The search runs over [0, 2/(delta*phi) - eps], stopping short of the
    charge at which the only feasible prices are zero.

    Raises:
        DegenerateFairnessError: if phi == 0.
        BracketError: if the gap has the same sign at both bracket ends.
    """
    phi_ = params.phi
    if phi_ <= 0.0:
        raise DegenerateFairnessError("fairness gap identically zero: phi = 0, every roaming charge is fair")
    scale = params.delta * phi_
    lo, hi = 0.0, 2.0 / scale - 1e-6 / scale

    def gap(r: float) -> float:
        return fairness_gap(r, params, mode)

    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0.0:
        return FairnessResult(lo, g_lo, "root-find", (lo, hi))
    if g_hi == 0.0:
        return FairnessResult(hi, g_hi, "root-find", (lo, hi))
    if (g_lo > 0.0) == (g_hi > 0.0):
        raise BracketError(
            f"fairness gap has the same sign on [{lo:.6g}, {hi:.6g}] "
            f"(gap={g_lo:.3e} and {g_hi:.3e}); no fair roaming charge in range"
        )
    root, info = brentq(gap, lo, hi, xtol=ROOT_XTOL, full_output=True)
    return FairnessResult(root, gap(root), "root-find", (lo, hi), info.iterations)


def closed_form_result(params: GameParams) -> FairnessResult:
    r_star = closed_form_rstar(params)
    return FairnessResult(r_star, fairness_gap(r_star, params), "closed-form", (r_star, r_star))
