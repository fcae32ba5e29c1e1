"""Demand, congestion and utility model for the incumbent/entrant pricing game.

Provider 1 is the incumbent, provider 2 the entrant. A fraction ``phi`` of the
entrant's demand roams onto the incumbent's network and pays the regulated
roaming charge ``r`` per unit, so the entrant's customers see the effective
price ``p2 + phi * r``.

Everything here is a pure function of immutable inputs. The underscore-prefixed
float helpers skip validation and are what the solvers call in their inner
loops.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "Congestion",
    "ConvergenceError",
    "DemandPair",
    "GameParams",
    "PricePair",
    "UtilityPair",
    "average_price",
    "congestion_factor",
    "phi",
    "solve_demand",
    "utilities",
    "utilities_full",
    "utilities_simplified",
]

BISECT_RTOL = 1e-12
BISECT_MAXITER = 200

MODES = ("simplified", "full")


class ConvergenceError(RuntimeError):
    """Raised when a bracketed fixed-point solve runs out of iterations."""


class Congestion(str, enum.Enum):
    NONE = "none"
    LINEAR = "linear"
    MM1 = "mm1"

    @classmethod
    def parse(cls, value: "Congestion | str | None") -> "Congestion":
        if value is None:
            return cls.NONE
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown congestion model {value!r} (choose from {choices})") from None


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class GameParams:
    """Exogenous parameters of the game.

    Attributes:
        delta: price sensitivity of total demand, > 0.
        d_max: maximum total demand, > 0.
        r: regulated roaming charge per unit of roamed demand, >= 0.
        b1, b2: demand capacities of incumbent and entrant, 0 < b2 <= b1.
        gamma: congestion headroom, 0 < gamma < b2.
        cd1, cd2: per-unit-demand op-ex, >= 0.
        cb1, cb2: per-unit-infrastructure op-ex, >= 0.
        congestion: which congestion factor multiplies demand.
    """

    delta: float = 1.0
    d_max: float = 1.0
    r: float = 0.0
    b1: float = 10.0
    b2: float = 1.0
    gamma: float = 0.1
    cd1: float = 0.0
    cd2: float = 0.0
    cb1: float = 0.0
    cb2: float = 0.0
    congestion: Congestion = Congestion.NONE

    def __post_init__(self) -> None:
        object.__setattr__(self, "congestion", Congestion.parse(self.congestion))
        for name in ("delta", "d_max", "r", "b1", "b2", "gamma", "cd1", "cd2", "cb1", "cb2"):
            value = float(getattr(self, name))
            _check_finite(name, value)
            object.__setattr__(self, name, value)
        for name in ("delta", "d_max", "b1", "b2", "gamma"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")
        for name in ("r", "cd1", "cd2", "cb1", "cb2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        if self.b2 > self.b1:
            raise ValueError(f"entrant capacity b2={self.b2} exceeds incumbent capacity b1={self.b1}")
        if self.gamma >= self.b2:
            raise ValueError(f"headroom gamma={self.gamma} must be below b2={self.b2}")

    @classmethod
    def from_phi(cls, phi: float, b1: float = 10.0, **kwargs) -> "GameParams":
        """Build parameters realizing roaming fraction ``phi`` via b2 = b1 * (1 - phi)."""
        if not 0.0 <= phi < 1.0:
            raise ValueError(f"phi must lie in [0, 1), got {phi!r}")
        return cls(b1=b1, b2=b1 * (1.0 - phi), **kwargs)

    @property
    def phi(self) -> float:
        return 1.0 - self.b2 / self.b1


@dataclass(frozen=True)
class PricePair:
    p1: float
    p2: float

    def __post_init__(self) -> None:
        for name in ("p1", "p2"):
            value = float(getattr(self, name))
            _check_finite(name, value)
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class DemandPair:
    d1: float
    d2: float


@dataclass(frozen=True)
class UtilityPair:
    u1: float
    u2: float


def phi(params: GameParams) -> float:
    """Fraction of the entrant's demand that roams, 1 - b2/b1."""
    return params.phi


def congestion_factor(d: float, b: float, gamma: float, model: Congestion | str = Congestion.NONE) -> float:
    """Multiplicative demand penalty g(d, b) for effective load ``d`` on capacity ``b``.

    Both congested forms equal 1 at d = 0 and vanish at d = b - gamma; beyond
    that point the factor is held at 0.
    """
    model = Congestion.parse(model)
    if not b > gamma > 0:
        raise ValueError(f"congestion factor needs b > gamma > 0, got b={b!r}, gamma={gamma!r}")
    return _g(d, b, gamma, model)


def _g(d: float, b: float, gamma: float, model: Congestion) -> float:
    if model is Congestion.NONE:
        return 1.0
    if d >= b - gamma:
        return 0.0
    if model is Congestion.LINEAR:
        return max(0.0, 1.0 - d / (b - gamma))
    return max(0.0, (1.0 - gamma / (b - d)) / (1.0 - gamma / b))


def average_price(prices: PricePair, params: GameParams) -> float:
    return _pbar(prices.p1, prices.p2, params.phi, params.r)


def _pbar(p1: float, p2: float, phi_: float, r: float) -> float:
    return (p1 + p2 + phi_ * r) / 2.0


def _price_factor(p1: float, p2: float, phi_: float, r: float, delta: float) -> float:
    # demand cannot go negative once the average price passes 1/delta
    return max(0.0, 1.0 - delta * _pbar(p1, p2, phi_, r))


def _shares(p1: float, p2: float, phi_: float, r: float) -> tuple[float, float]:
    total = p1 + p2 + phi_ * r
    if total <= 0.0:
        return 0.5, 0.5
    return (p2 + phi_ * r) / total, p1 / total


def _bisect_fixed_point(amp: float, slope: float, offset: float, b: float, gamma: float,
                        model: Congestion) -> float:
    """Unique root of x = amp * g(slope * x + offset, b) with amp >= 0, slope > 0."""
    if amp <= 0.0:
        return 0.0
    hi = min(amp, (b - gamma - offset) / slope)
    if hi <= 0.0:
        return 0.0

    def resid(x: float) -> float:
        return x - amp * _g(slope * x + offset, b, gamma, model)

    lo = 0.0
    tol = BISECT_RTOL * hi
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol or mid in (lo, hi):
            return mid
        if resid(mid) > 0.0:
            hi = mid
        else:
            lo = mid
    raise ConvergenceError(
        f"demand fixed point did not reach tolerance in {BISECT_MAXITER} bisection steps "
        f"(amp={amp}, b={b}, gamma={gamma}, model={model.value})"
    )


def _demand(p1: float, p2: float, params: GameParams) -> tuple[float, float]:
    phi_, r = params.phi, params.r
    total = params.d_max * _price_factor(p1, p2, phi_, r, params.delta)
    share1, share2 = _shares(p1, p2, phi_, r)
    amp1, amp2 = total * share1, total * share2
    model = params.congestion
    if model is Congestion.NONE:
        return amp1, amp2
    # D2 only sees its own non-roamed load, so it is solved first
    d2 = _bisect_fixed_point(amp2, 1.0 - phi_, 0.0, params.b2, params.gamma, model)
    d1 = _bisect_fixed_point(amp1, 1.0, phi_ * d2, params.b1, params.gamma, model)
    return d1, d2


def solve_demand(prices: PricePair, params: GameParams) -> DemandPair:
    """Realized demands (D1, D2) at the given prices.

    Total demand falls linearly with the average price, is split in proportion
    to the rival's (effective) price, and is thinned by the congestion factor,
    which itself depends on the demand being solved for. The entrant's equation
    involves only D2, so it is solved first and D1 follows given D2.

    Raises:
        ConvergenceError: if a bisection exhausts its iteration cap.
    """
    return DemandPair(*_demand(prices.p1, prices.p2, params))


def _utilities_full(p1: float, p2: float, params: GameParams) -> tuple[float, float]:
    phi_ = params.phi
    d1, d2 = _demand(p1, p2, params)
    u1 = (p1 - params.cd1) * d1 + (params.r - params.cd1) * phi_ * d2 - params.cb1 * params.b1
    u2 = (p2 - (1.0 - phi_) * params.cd2) * d2 - params.cb2 * params.b2
    return u1, u2


def _utilities_simplified(p1: float, p2: float, params: GameParams) -> tuple[float, float]:
    phi_, r = params.phi, params.r
    total = params.d_max * _price_factor(p1, p2, phi_, r, params.delta)
    share1, share2 = _shares(p1, p2, phi_, r)
    u1 = total * (p1 * share1 + r * phi_ * share2)
    u2 = total * p2 * share2
    return u1, u2


def utilities_full(prices: PricePair, params: GameParams) -> UtilityPair:
    """Net utilities with op-ex and congestion, from the solved demands."""
    return UtilityPair(*_utilities_full(prices.p1, prices.p2, params))


def utilities_simplified(prices: PricePair, params: GameParams) -> UtilityPair:
    """Utilities of the cost-free, congestion-free game (scaled by ``d_max``)."""
    return UtilityPair(*_utilities_simplified(prices.p1, prices.p2, params))


def _utility_fn(mode: str):
    if mode == "simplified":
        return _utilities_simplified
    if mode == "full":
        return _utilities_full
    raise ValueError(f"unknown mode {mode!r} (choose from {', '.join(MODES)})")


def utilities(prices: PricePair, params: GameParams, mode: str = "simplified") -> UtilityPair:
    return UtilityPair(*_utility_fn(mode)(prices.p1, prices.p2, params))
