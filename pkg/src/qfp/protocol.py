"""Analytical model of the noisy fingerprinting protocol.

Conventions:

* ``beta = B * nu / s`` is the rescaled bandwidth (inverse per-slot SNR).
* ``mu = L (s/B + nu)`` is the mean photocount number generated across both
  detectors by the signal from one sender; ``n_q = s L / B`` is the signal
  photon number per sender, so ``mu = n_q (1 + beta)`` exactly.
* Photon budgets use natural logarithms; bits appear only in the classical
  baselines.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

from scipy.special import gammaln

from .chernoff import VisibilityPair, per_count
from .errors import DomainError
from .numerics import gv_rate

__all__ = [
    "ProtocolConfig",
    "DerivedModel",
    "PhaseOverhead",
    "visibilities",
    "photocount_pmf",
    "log_photocount_pmf",
    "nq_chernoff_requirement",
    "nq_slot_requirement",
    "noise_parameter",
    "noiseless_nq",
    "phase_overhead",
    "derive",
]

#: Above this noise PSD the weak-noise modelling assumptions degrade; the
#: formulas all remain evaluable, so this is a warning, not an error.
NU_WARN_THRESHOLD = 1e-2


@dataclass(frozen=True)
class ProtocolConfig:
    """Problem instance plus the two free design variables.

    Exactly one of ``beta`` and ``bandwidth`` must be supplied; the other is
    derived.  An explicit ``bandwidth`` additionally permits ``nu = 0``
    (noiseless simulation runs), where ``beta`` degenerates to zero.
    """

    n: int
    nu: float
    eps: float
    s: float
    delta: float
    beta: Optional[float] = None
    bandwidth: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"input length must be >= 1, got {self.n}")
        if not 0.0 < self.eps < 0.5:
            raise DomainError(f"target error must be in (0, 1/2), got {self.eps}")
        if not self.s > 0:
            raise DomainError(f"signal power must be > 0, got {self.s}")
        if not 0.0 <= self.delta < 0.5:
            raise DomainError(
                f"relative distance must be in [0, 1/2), got {self.delta}"
            )
        if (self.beta is None) == (self.bandwidth is None):
            raise DomainError("specify exactly one of beta and bandwidth")
        if self.bandwidth is not None:
            if not self.bandwidth > 0:
                raise DomainError(f"bandwidth must be > 0, got {self.bandwidth}")
            if self.nu < 0:
                raise DomainError(f"noise PSD must be >= 0, got {self.nu}")
            object.__setattr__(
                self, "beta", self.bandwidth * self.nu / self.s
            )
        else:
            if not self.beta > 0:
                raise DomainError(f"beta must be > 0, got {self.beta}")
            if not self.nu > 0:
                raise DomainError(
                    f"noise PSD must be > 0 when beta is given, got {self.nu}"
                )
            object.__setattr__(
                self, "bandwidth", self.beta * self.s / self.nu
            )
        if self.nu > NU_WARN_THRESHOLD:
            warnings.warn(
                f"noise PSD nu={self.nu} is above {NU_WARN_THRESHOLD}; the "
                "weak-noise analytical model degrades in this regime",
                stacklevel=2,
            )


@dataclass(frozen=True)
class DerivedModel:
    """Quantities implied by a ProtocolConfig."""

    l_slots: int
    bandwidth: float
    mu: float
    vis: VisibilityPair
    n_q: float


class PhaseOverhead(NamedTuple):
    n_est: float
    w: float
    nq_multiplier: float


def visibilities(delta: float, beta: float) -> VisibilityPair:
    """Visibilities under equal / worst-case-different hypotheses."""
    if not 0.0 <= delta < 0.5:
        raise DomainError(f"relative distance must be in [0, 1/2), got {delta}")
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    return VisibilityPair(
        v_e=1.0 / (1.0 + beta), v_d=(1.0 - 2.0 * delta) / (1.0 + beta)
    )


def log_photocount_pmf(k_plus: int, k_minus: int, mu: float, v: float) -> float:
    """Log of the product-Poisson pmf with means mu(1+v) and mu(1-v)."""
    if mu < 0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    if not -1.0 <= v <= 1.0:
        raise DomainError(f"visibility must be in [-1, 1], got {v}")
    if k_plus < 0 or k_minus < 0:
        raise DomainError("counts must be nonnegative")
    out = 0.0
    for k, mean in ((k_plus, mu * (1.0 + v)), (k_minus, mu * (1.0 - v))):
        if mean == 0.0:
            if k > 0:
                return -math.inf
            continue
        out += k * math.log(mean) - mean - float(gammaln(k + 1))
    return out


def photocount_pmf(k_plus: int, k_minus: int, mu: float, v: float) -> float:
    """Joint probability of registering (k_plus, k_minus) photocounts."""
    return math.exp(log_photocount_pmf(k_plus, k_minus, mu, v))


def nq_chernoff_requirement(delta: float, beta: float, eps: float) -> float:
    """Signal photons per sender needed to reach average error eps.

    Diverges at delta = 0, where the two hypotheses coincide.
    """
    if not 0.0 < eps < 0.5:
        raise DomainError(f"target error must be in (0, 1/2), got {eps}")
    if delta <= 0.0:
        raise DomainError(
            "requirement diverges at delta = 0 (zero information per count)"
        )
    vis = visibilities(delta, beta)
    c = per_count(vis).per_count
    return math.log(1.0 / (2.0 * eps)) / (2.0 * (1.0 + beta) * c)


def nq_slot_requirement(delta: float, beta: float, n: int, nu: float) -> float:
    """Signal photons per sender needed to fit all codeword slots in time."""
    if beta <= 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    if nu < 0:
        raise DomainError(f"noise PSD must be >= 0, got {nu}")
    return (n * nu / 2.0) / (beta * gv_rate(delta))


def noise_parameter(n: int, nu: float, eps: float) -> float:
    """Dimensionless noise parameter (n nu / 2) / log[1/(2 eps)]."""
    if not 0.0 < eps < 0.5:
        raise DomainError(f"target error must be in (0, 1/2), got {eps}")
    if nu < 0:
        raise DomainError(f"noise PSD must be >= 0, got {nu}")
    return (n * nu / 2.0) / math.log(1.0 / (2.0 * eps))


def noiseless_nq(eps: float) -> float:
    """Photon budget log[1/(2 eps)] in the zero-noise limit."""
    if not 0.0 < eps < 0.5:
        raise DomainError(f"target error must be in (0, 1/2), got {eps}")
    return math.log(1.0 / (2.0 * eps))


def phase_overhead(dphi: float) -> PhaseOverhead:
    """Cost of establishing the shared phase reference.

    ``n_est`` photons suffice to estimate the relative phase to uncertainty
    ``dphi`` at 99.7% confidence; Gaussian phase jitter rescales both
    visibilities by ``w = exp(-dphi^2/2)``, which inflates the asymptotic
    photon budget by ``1/w``.
    """
    if not dphi > 0:
        raise DomainError(f"phase uncertainty must be > 0, got {dphi}")
    w = math.exp(-(dphi**2) / 2.0)
    return PhaseOverhead(n_est=18.0 / dphi**2, w=w, nq_multiplier=1.0 / w)


def derive(cfg: ProtocolConfig) -> DerivedModel:
    """Slot count, bandwidth, mean counts and visibilities for a config."""
    rate = gv_rate(cfg.delta)
    l_slots = math.ceil(cfg.n / (2.0 * rate))
    per_slot = cfg.s / cfg.bandwidth
    n_q = l_slots * per_slot
    mu = l_slots * (per_slot + cfg.nu)
    return DerivedModel(
        l_slots=l_slots,
        bandwidth=cfg.bandwidth,
        mu=mu,
        vis=visibilities(cfg.delta, cfg.beta),
        n_q=n_q,
    )
