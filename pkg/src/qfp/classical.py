"""Classical fingerprinting baselines expressed as photon budgets.

Fingerprint lengths in bits are converted to photon numbers through the
photon information efficiency of a vanishing-power optical channel, which
is the best any classical receiver strategy can achieve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .numerics import thermal_entropy

__all__ = [
    "ClassicalBaseline",
    "classical_bits",
    "classical_bound_bits",
    "holevo_rate",
    "pie",
    "baseline",
]


@dataclass(frozen=True)
class ClassicalBaseline:
    i_c: float
    i_b: float
    pie: float
    n_c: float
    n_b: float


def classical_bits(n: int, eps: float) -> float:
    """Constructive classical fingerprint length, both senders' total:
    2 sqrt(n) ceil(log2(1/eps) / 2) bits."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0.0 < eps < 1.0:
        raise DomainError(f"eps must be in (0, 1), got {eps}")
    return 2.0 * math.sqrt(n) * math.ceil(0.5 * math.log2(1.0 / eps))


def classical_bound_bits(n: int, eps: float) -> float:
    """Lower bound sqrt(n / (2 ln 2)) (1/2 - sqrt(eps)) - 1/2 on the
    classical fingerprint length, clamped at zero for degenerate tiny n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0.0 <= eps < 0.25:
        raise DomainError(f"eps must be in [0, 1/4), got {eps}")
    value = math.sqrt(n / (2.0 * math.log(2.0))) * (0.5 - math.sqrt(eps)) - 0.5
    return max(0.0, value)


def holevo_rate(s: float, bandwidth: float, nu: float) -> float:
    """Capacity B [g(s/B + nu) - g(nu)] of the noisy channel, bits per unit
    time; increasing in B with supremum s * pie(nu)."""
    if s <= 0 or bandwidth <= 0 or nu < 0:
        raise DomainError("need s > 0, bandwidth > 0, nu >= 0")
    return bandwidth * (thermal_entropy(s / bandwidth + nu) - thermal_entropy(nu))


def pie(nu: float) -> float:
    """Photon information efficiency log2(1 + 1/nu), bits per photon."""
    if not nu > 0:
        raise DomainError(f"noise PSD must be > 0, got {nu}")
    return math.log2(1.0 + 1.0 / nu)


def baseline(n: int, nu: float, eps: float) -> ClassicalBaseline:
    """Photon-number equivalents of the classical fingerprint lengths."""
    i_c = classical_bits(n, eps)
    i_b = classical_bound_bits(n, eps)
    efficiency = pie(nu)
    return ClassicalBaseline(
        i_c=i_c,
        i_b=i_b,
        pie=efficiency,
        n_c=i_c / efficiency,
        n_b=i_b / efficiency,
    )
