"""Scalar special functions and generic 1-D numerical routines.

Everything here is pure and double precision.  Entropy-like functions
evaluate 0*log(0) as 0 explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .errors import BracketError, ConvergenceError, DomainError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "binary_entropy",
    "gv_rate",
    "thermal_entropy",
    "find_root",
    "minimize_1d",
]

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Tolerance:
    """Stopping control for the 1-D routines."""

    rel: float = 1e-10
    abs: float = 1e-12
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not self.rel > 0:
            raise DomainError(f"rel tolerance must be > 0, got {self.rel}")
        if self.abs < 0:
            raise DomainError(f"abs tolerance must be >= 0, got {self.abs}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")

    def width(self, scale: float) -> float:
        return self.abs + self.rel * abs(scale)


DEFAULT_TOL = Tolerance()


def binary_entropy(p: float) -> float:
    """Binary entropy H2(p) in bits; H2(0) = H2(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must be in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def gv_rate(delta: float) -> float:
    """Achievable code rate r(delta) = 1 - H2(delta) at relative distance delta.

    Defined on [0, 1/2) only: at delta >= 1/2 the rate is non-positive and
    downstream formulas divide by it.
    """
    if not 0.0 <= delta < 0.5:
        raise DomainError(f"relative distance must be in [0, 1/2), got {delta}")
    return 1.0 - binary_entropy(delta)


def thermal_entropy(x: float) -> float:
    """Entropy g(x) = (x+1) log2(x+1) - x log2(x) of a thermal state, in bits."""
    if x < 0:
        raise DomainError(f"mean excitation number must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Bisection root of a continuous f with a sign change on [lo, hi].

    Robustness over speed: every use in this package is one-shot per sweep
    point, so bisection's guaranteed convergence wins.
    """
    if lo > hi:
        lo, hi = hi, lo
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )
    for _ in range(tol.max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or (hi - lo) <= tol.width(mid):
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    if (hi - lo) <= tol.width(0.5 * (lo + hi)):
        return 0.5 * (lo + hi)
    raise ConvergenceError(
        f"bisection did not converge in {tol.max_iter} iterations; "
        f"bracket [{lo}, {hi}]"
    )


def _golden(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: Tolerance,
) -> Tuple[float, float]:
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(tol.max_iter):
        if (b - a) <= tol.width(0.5 * (a + b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = f(d)
    else:
        if (b - a) > 100 * tol.width(0.5 * (a + b)):
            raise ConvergenceError(
                f"golden-section did not converge in {tol.max_iter} iterations"
            )
    x = 0.5 * (a + b)
    return x, f(x)


def minimize_1d(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerance = DEFAULT_TOL,
    grid_points: int = 33,
) -> Tuple[float, float]:
    """Minimize f on [lo, hi]: coarse grid scan, then golden section.

    The grid scan locates the bracket so that a single spurious local dip
    away from the global minimum cannot capture the search; unimodality is
    the caller's responsibility only within one grid cell.
    """
    if grid_points < 3:
        raise DomainError(f"grid_points must be >= 3, got {grid_points}")
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    step = (hi - lo) / (grid_points - 1)
    xs = [lo + i * step for i in range(grid_points)]
    xs[-1] = hi
    fs = [f(x) for x in xs]
    i = min(range(grid_points), key=fs.__getitem__)
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, grid_points - 1)]
    return _golden(f, a, b, tol)
