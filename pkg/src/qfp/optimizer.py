"""Operating-point search: the (delta, beta) pair minimizing the photon budget.

Two requirements act on the signal photon number: the hypothesis-test budget
(decreasing in delta) and the slot-accommodation budget (increasing in delta
through the vanishing code rate).  At the optimum both are active, which
eliminates beta through an implicit relation parameterized only by the noise
parameter.  The outer search then runs over delta alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .chernoff import per_count
from .errors import BracketError, SolverError
from .numerics import DEFAULT_TOL, Tolerance, find_root, gv_rate, minimize_1d
from .protocol import (
    DerivedModel,
    ProtocolConfig,
    derive,
    noise_parameter,
    noiseless_nq,
    visibilities,
)

__all__ = [
    "Regime",
    "OperatingPoint",
    "solve_beta",
    "reduced_optimum",
    "optimize",
    "delta_tilde",
    "asymptotic_beta",
    "asymptotic_nq",
]

# Search interval for delta, clipped away from the divergences at 0 (no
# information per count) and 1/2 (zero code rate).
DELTA_LO = 1e-4
DELTA_HI = 0.5 - 1e-6

# log(beta) bracket; widened once on failure.
LOG_BETA_SPAN = 30.0


class Regime(str, Enum):
    NEAR_NOISELESS = "near_noiseless"
    CROSSOVER = "crossover"
    NOISE_DOMINATED = "noise_dominated"


@dataclass(frozen=True)
class OperatingPoint:
    delta_star: float
    beta_star: float
    n_q_star: float
    noise_param: float
    regime: Regime
    derived: DerivedModel


def _balance_lhs(delta: float, beta: float) -> float:
    """beta r(delta) / [2 (1+beta) C(...)]; equals N when both budgets bind."""
    c = per_count(visibilities(delta, beta)).per_count
    if c <= 0.0:
        # Underflow at extreme beta: both visibilities are so small that the
        # per-count information cancels to zero; the balance ratio diverges.
        return math.inf
    return beta * gv_rate(delta) / (2.0 * (1.0 + beta) * c)


def solve_beta(
    delta: float, noise_param_value: float, tol: Tolerance = DEFAULT_TOL
) -> float:
    """Bandwidth ratio at which both photon-budget constraints are active.

    The balance expression is monotone in beta, so the root is bracketed in
    log space and bisected.
    """
    if not 0.0 < delta < 0.5:
        raise BracketError(f"delta must be in (0, 1/2), got {delta}")
    if not noise_param_value > 0:
        raise BracketError(
            f"noise parameter must be > 0, got {noise_param_value}"
        )

    def resid(log_beta: float) -> float:
        return _balance_lhs(delta, math.exp(log_beta)) - noise_param_value

    span = LOG_BETA_SPAN
    for attempt in range(2):
        lo, hi = -span, span
        try:
            return math.exp(find_root(resid, lo, hi, tol))
        except BracketError:
            if attempt == 0:
                span *= 2.0
                continue
            raise BracketError(
                f"no beta balances the budgets for delta={delta}, "
                f"N={noise_param_value}: residual({lo})={resid(lo)}, "
                f"residual({hi})={resid(hi)}"
            ) from None
    raise AssertionError("unreachable")


@lru_cache(maxsize=1)
def delta_tilde() -> float:
    """Argmax of delta^2 r(delta) on [0, 1/2); about 0.244."""
    x, _ = minimize_1d(
        lambda d: -(d * d) * gv_rate(d),
        0.0,
        0.5 - 1e-12,
        Tolerance(rel=1e-12, abs=1e-14, max_iter=300),
    )
    return x


def asymptotic_beta(noise_param_value: float) -> float:
    """Large-noise closed form sqrt(N dt^2 / r(dt)) for the optimal beta."""
    if not noise_param_value > 0:
        raise SolverError(
            f"noise parameter must be > 0, got {noise_param_value}"
        )
    dt = delta_tilde()
    return math.sqrt(noise_param_value * dt * dt / gv_rate(dt))


def asymptotic_nq(n: int, nu: float, eps: float) -> float:
    """Large-noise photon budget, about 6.51 sqrt(n nu log[1/(2 eps)])."""
    dt = delta_tilde()
    const = 1.0 / math.sqrt(2.0 * dt * dt * gv_rate(dt))
    return const * math.sqrt(n * nu * noiseless_nq(eps))


def _classify(noise_param_value: float) -> Regime:
    if noise_param_value < 0.1:
        return Regime.NEAR_NOISELESS
    if noise_param_value > 10.0:
        return Regime.NOISE_DOMINATED
    return Regime.CROSSOVER


def reduced_optimum(
    noise_param_value: float, tol: Tolerance = DEFAULT_TOL
) -> tuple[float, float, float]:
    """Optimal (delta, beta, budget factor) for a given noise parameter.

    The budget factor is N_Q* divided by the noiseless budget
    log[1/(2 eps)]; the triple depends on the problem instance only through
    the noise parameter.
    """
    if not noise_param_value > 0:
        raise SolverError(
            f"noise parameter must be > 0, got {noise_param_value}"
        )

    def factor(delta: float) -> float:
        # Slot-accommodation budget with beta eliminated; equals the
        # hypothesis-test budget by construction of solve_beta.
        beta = solve_beta(delta, noise_param_value, tol)
        return noise_param_value / (beta * gv_rate(delta))

    delta_star, best = minimize_1d(factor, DELTA_LO, DELTA_HI, tol)
    return delta_star, solve_beta(delta_star, noise_param_value, tol), best


def optimize(
    n: int, nu: float, eps: float, tol: Tolerance = DEFAULT_TOL
) -> OperatingPoint:
    """Minimize the photon budget over (delta, beta) for a problem instance."""
    npar = noise_parameter(n, nu, eps)
    delta_star, beta_star, factor = reduced_optimum(npar, tol)
    n_q_star = factor * noiseless_nq(eps)
    cfg = ProtocolConfig(
        n=n, nu=nu, eps=eps, s=1.0, delta=delta_star, beta=beta_star
    )
    return OperatingPoint(
        delta_star=delta_star,
        beta_star=beta_star,
        n_q_star=n_q_star,
        noise_param=npar,
        regime=_classify(npar),
        derived=derive(cfg),
    )
