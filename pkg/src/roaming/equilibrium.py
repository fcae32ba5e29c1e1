"""Best responses and Nash equilibria of the pricing game."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .model import GameParams, PricePair, UtilityPair, _utility_fn

__all__ = [
    "BestResponseResult",
    "EquilibriumResult",
    "InteriorityError",
    "best_response",
    "closed_form_ne",
    "fonc_residual",
    "is_interior",
    "price_cap",
    "solve_ne",
]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

BR_XTOL = 1e-10
NE_TOL = 1e-8
NE_MAXITER = 10_000
BR_CHECK_TOL = 1e-6
FONC_STEP = 1e-6
SOC_STEP = 1e-5


class InteriorityError(ValueError):
    """The interior symmetric equilibrium needs delta * r * phi < 2."""


@dataclass(frozen=True)
class BestResponseResult:
    price: float
    utility: float
    bracket: tuple[float, float]
    iterations: int


@dataclass(frozen=True)
class EquilibriumResult:
    prices: PricePair
    utilities: UtilityPair
    converged: bool
    iterations: int
    price_change: float
    br_residual: float
    interior: bool
    soc_ok: bool
    second_derivatives: tuple[float, float]


def price_cap(params: GameParams) -> float:
    """Largest price keeping 1 - delta * pbar >= 0 with the rival at 0."""
    return max(0.0, 2.0 / params.delta - params.phi * params.r)


def is_interior(params: GameParams) -> bool:
    return params.delta * params.r * params.phi < 2.0


def _own_utility(own: int, other_price: float, params: GameParams, mode: str) -> Callable[[float], float]:
    fn = _utility_fn(mode)
    if own == 1:
        return lambda p: fn(p, other_price, params)[0]
    if own == 2:
        return lambda p: fn(other_price, p, params)[1]
    raise ValueError(f"provider index must be 1 or 2, got {own!r}")


def _golden_max(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> tuple[float, float, int]:
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > xtol:
        it += 1
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    if fc >= fd:
        return c, fc, it
    return d, fd, it


def _parabolic_polish(f: Callable[[float], float], x: float, fx: float, lo: float, hi: float) -> tuple[float, float]:
    # the top of a smooth maximum is flat to ~sqrt(eps); a three-point vertex
    # fit at a wider spacing recovers the digits golden-section cannot see
    h = 1e-5 * max(1.0, abs(x))
    if x - h < lo or x + h > hi:
        return x, fx
    for _ in range(3):
        fl, fr = f(x - h), f(x + h)
        curv = fl - 2.0 * fx + fr
        if not curv < 0.0:
            break
        step = 0.5 * h * (fl - fr) / curv
        if abs(step) > h:
            break
        x_new = x + step
        if x_new - h < lo or x_new + h > hi:
            break
        x, fx = x_new, f(x_new)
        if abs(step) < 1e-13 * max(1.0, abs(x)):
            break
    return x, fx


def best_response(own: int, other_price: float, params: GameParams, mode: str = "simplified") -> BestResponseResult:
    """Utility-maximizing own price against ``other_price`` over [0, price_cap].

    Golden-section search down to a bracket of width 1e-10, then compared
    against both bracket endpoints. Ties go to the smaller price, so a flat
    utility (provider 2 facing p1 = 0) returns 0.
    """
    if not other_price >= 0.0:
        raise ValueError(f"opponent price must be >= 0, got {other_price!r}")
    f = _own_utility(own, other_price, params, mode)
    lo, hi = 0.0, price_cap(params)
    if hi <= 0.0:
        return BestResponseResult(0.0, f(0.0), (0.0, 0.0), 0)

    x, fx, it = _golden_max(f, lo, hi, BR_XTOL)
    x, fx = _parabolic_polish(f, x, fx, lo, hi)
    candidates = sorted([(lo, f(lo)), (x, fx), (hi, f(hi))])
    best_x, best_f = candidates[0]
    for cx, cf in candidates[1:]:
        if cf > best_f:
            best_x, best_f = cx, cf
    return BestResponseResult(best_x, best_f, (lo, hi), it)


def closed_form_ne(params: GameParams) -> PricePair:
    """Symmetric interior equilibrium of the simplified game."""
    x = params.delta * params.r * params.phi
    if x >= 2.0:
        raise InteriorityError(
            f"no interior equilibrium: delta*r*phi = {x:.6g} >= 2 leaves no feasible positive prices"
        )
    p = (-2.0 * x + 1.0 + math.sqrt(4.0 * x + 1.0)) / (4.0 * params.delta)
    return PricePair(p, p)


def _second_derivative(f: Callable[[float], float], x: float) -> float:
    h = SOC_STEP * max(1.0, abs(x))
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def _first_derivative(f: Callable[[float], float], x: float) -> float:
    h = FONC_STEP * max(1.0, abs(x))
    if x - h >= 0.0:
        return (f(x + h) - f(x - h)) / (2.0 * h)
    # one-sided second-order stencil on the p = 0 boundary
    return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)


def fonc_residual(prices: PricePair, params: GameParams, mode: str = "simplified") -> tuple[float, float]:
    """Own-price derivatives (dU1/dp1, dU2/dp2) by finite differences."""
    g1 = _first_derivative(_own_utility(1, prices.p2, params, mode), prices.p1)
    g2 = _first_derivative(_own_utility(2, prices.p1, params, mode), prices.p2)
    return g1, g2


def solve_ne(
    params: GameParams,
    mode: str = "simplified",
    init: PricePair | None = None,
    *,
    order: tuple[int, int] = (1, 2),
    tol: float = NE_TOL,
    max_iter: int = NE_MAXITER,
) -> EquilibriumResult:
    """Nash equilibrium by alternating (Gauss-Seidel) best responses.

    Starts from ``init`` (default: both prices at half the price cap) and
    updates the providers in ``order`` until the sup-norm price change drops
    below ``tol``. Not converging is reported through ``converged=False``
    rather than raised, since nothing guarantees convergence once congestion
    and costs are switched on.
    """
    if sorted(order) != [1, 2]:
        raise ValueError(f"order must be a permutation of (1, 2), got {order!r}")
    if init is None:
        half = price_cap(params) / 2.0
        init = PricePair(half, half)
    prices = [init.p1, init.p2]

    change = math.inf
    it = 0
    while it < max_iter:
        it += 1
        old = list(prices)
        for k in order:
            prices[k - 1] = best_response(k, prices[2 - k], params, mode).price
        change = max(abs(prices[0] - old[0]), abs(prices[1] - old[1]))
        if change < tol:
            break

    p1, p2 = prices
    br_residual = max(
        abs(best_response(1, p2, params, mode).price - p1),
        abs(best_response(2, p1, params, mode).price - p2),
    )
    d1 = _second_derivative(_own_utility(1, p2, params, mode), p1)
    d2 = _second_derivative(_own_utility(2, p1, params, mode), p2)
    u1, u2 = _utility_fn(mode)(p1, p2, params)
    return EquilibriumResult(
        prices=PricePair(p1, p2),
        utilities=UtilityPair(u1, u2),
        converged=change < tol and br_residual < BR_CHECK_TOL,
        iterations=it,
        price_change=change,
        br_residual=br_residual,
        interior=is_interior(params),
        soc_ok=d1 < 0.0 and d2 < 0.0,
        second_derivatives=(d1, d2),
    )


def with_roaming_charge(params: GameParams, r: float) -> GameParams:
    return replace(params, r=r)
