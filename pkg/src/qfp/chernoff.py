"""Chernoff information per count for the two-visibility hypothesis test.

The referee discriminates product-Poisson photocount statistics with
visibility ``v_e`` (equal inputs) from ``v_d`` (different inputs, worst
case).  The error exponent per detected count is

    C(v_e, v_d) = 1 - (1/2) min_{0<=lam<=1} f(lam),
    f(lam) = (1+v_e)^lam (1+v_d)^(1-lam) + (1-v_e)^lam (1-v_d)^(1-lam),

with a closed-form minimizer available away from the boundary
singularities (v_e = 1 or v_e = v_d).  Natural-log convention throughout:
the resulting bound is eps <= (1/2) exp(-2 mu C).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .numerics import Tolerance, minimize_1d

__all__ = [
    "VisibilityPair",
    "ChernoffResult",
    "Method",
    "lambda_star",
    "per_count",
    "per_count_low_vis",
    "error_bound",
    "per_count_grid",
]


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC_FALLBACK = "numeric_fallback"


@dataclass(frozen=True)
class VisibilityPair:
    """Interference visibilities under the equal / different hypotheses."""

    v_e: float
    v_d: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.v_d <= self.v_e <= 1.0:
            raise DomainError(
                f"visibilities must satisfy 0 <= v_d <= v_e <= 1, "
                f"got v_e={self.v_e}, v_d={self.v_d}"
            )


@dataclass(frozen=True)
class ChernoffResult:
    lambda_star: float
    per_count: float
    method: Method


def _bracket(lam: float, v_e: float, v_d: float) -> float:
    """The quantity minimized over the exponent lam (valid for any order).

    A zero base (unit visibility) contributes zero for every exponent,
    continuing the lam > 0 limit onto the boundary.
    """
    term = 0.0
    if v_e < 1.0 and v_d < 1.0:
        term = (1.0 - v_e) ** lam * (1.0 - v_d) ** (1.0 - lam)
    return (1.0 + v_e) ** lam * (1.0 + v_d) ** (1.0 - lam) + term


def _lambda_closed(v_e: float, v_d: float) -> float:
    """Closed-form stationary exponent; raises on boundary singularities."""
    ratio = math.log((1.0 - v_d) / (1.0 - v_e)) / math.log(
        (1.0 + v_e) / (1.0 + v_d)
    )
    num = math.log((1.0 - v_d) / (1.0 + v_d) * ratio)
    den = math.log((1.0 + v_e) / (1.0 - v_e) * (1.0 - v_d) / (1.0 + v_d))
    return num / den


def _solve(vis: VisibilityPair) -> ChernoffResult:
    # Plain floats so that boundary cases raise instead of warning (numpy
    # scalar division by zero yields inf silently).
    v_e, v_d = float(vis.v_e), float(vis.v_d)
    if v_e == v_d:
        # f is constant: every exponent is optimal, information is zero.
        return ChernoffResult(0.5, 0.0, Method.CLOSED_FORM)
    try:
        lam = _lambda_closed(v_e, v_d)
        if not math.isfinite(lam):
            raise ValueError
        method = Method.CLOSED_FORM
    except (ValueError, ZeroDivisionError, OverflowError):
        lam, _ = minimize_1d(
            lambda t: _bracket(t, v_e, v_d),
            0.0,
            1.0,
            Tolerance(rel=1e-12, abs=1e-14, max_iter=200),
        )
        # The minimum often sits exactly on a boundary in the singular
        # cases; snap to whichever candidate evaluates lowest.
        lam = min((lam, 0.0, 1.0), key=lambda t: _bracket(t, v_e, v_d))
        method = Method.NUMERIC_FALLBACK
    lam = min(1.0, max(0.0, lam))
    value = 1.0 - 0.5 * _bracket(lam, v_e, v_d)
    # Guard against floating-point overshoot just outside [0, 1/2].
    value = min(0.5, max(0.0, value))
    return ChernoffResult(lam, value, method)


def lambda_star(vis: VisibilityPair) -> float:
    """Optimal test exponent in [0, 1]; undefined when v_e = v_d."""
    if vis.v_e == vis.v_d:
        raise DomainError(
            f"exponent is degenerate for v_e = v_d = {vis.v_e}; "
            "any lambda is optimal"
        )
    return _solve(vis).lambda_star


def per_count(vis: VisibilityPair) -> ChernoffResult:
    """Chernoff information per count in nats, with the exponent used."""
    return _solve(vis)


def per_count_low_vis(vis: VisibilityPair) -> float:
    """Low-visibility approximation (v_e - v_d)^2 / 8."""
    return (vis.v_e - vis.v_d) ** 2 / 8.0


def error_bound(mu: float, vis: VisibilityPair) -> float:
    """Chernoff upper bound (1/2) exp(-2 mu C) on the average error probability."""
    if mu < 0:
        raise DomainError(f"mean photocount number must be >= 0, got {mu}")
    return 0.5 * math.exp(-2.0 * mu * per_count(vis).per_count)


def per_count_grid(v_e: np.ndarray, v_d: np.ndarray) -> np.ndarray:
    """Vectorized per-count information via the closed-form exponent.

    Valid on the open region 0 <= v_d < v_e < 1 (no boundary fallback);
    used by sweep drivers and brute-force cross-checks.
    """
    v_e = np.asarray(v_e, dtype=float)
    v_d = np.asarray(v_d, dtype=float)
    if np.any(v_e >= 1.0) or np.any(v_d >= v_e) or np.any(v_d < 0.0):
        raise DomainError("vectorized form requires 0 <= v_d < v_e < 1")
    ratio = np.log((1.0 - v_d) / (1.0 - v_e)) / np.log((1.0 + v_e) / (1.0 + v_d))
    num = np.log((1.0 - v_d) / (1.0 + v_d) * ratio)
    den = np.log((1.0 + v_e) / (1.0 - v_e) * (1.0 - v_d) / (1.0 + v_d))
    lam = np.clip(num / den, 0.0, 1.0)
    val = 1.0 - 0.5 * (
        np.exp(lam * np.log1p(v_e) + (1.0 - lam) * np.log1p(v_d))
        + np.exp(lam * np.log1p(-v_e) + (1.0 - lam) * np.log1p(-v_d))
    )
    return np.clip(val, 0.0, 0.5)
