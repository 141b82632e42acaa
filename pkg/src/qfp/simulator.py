"""Monte Carlo simulation of the full protocol chain.

Chain: ECC encoding -> quadrature PSK phases -> additive Gaussian channel
noise -> beam-splitter interference -> Poisson photodetection -> likelihood
referee.  The simulation is exact: photocounts are Poisson conditionally on
the exact per-trial beam-splitter energies, with no weak-noise
approximation, so the approximation error of the analytical photocount
model can be measured rather than assumed.

``run_trials`` does not draw per-slot noise amplitudes.  For any phase
configuration the two output energies are independent and distributed as

    I_pm = (nu/2) * noncentral_chi2(2 L, nc_pm),
    nc_pm = 2 L (s/B) (1 +- V0) / nu,

where ``V0`` is the mean cosine of the phase differences: the orthogonal
transform (xi +- zeta)/sqrt(2) of the two senders' i.i.d. noise keeps the
components independent, and each output is then a sum of L shifted complex
Gaussians.  This is distributionally identical to the explicit per-slot
chain (``apply_awgn`` + ``detect``) and makes trials O(1) in the slot
count.  The explicit chain remains available for validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np

from .chernoff import VisibilityPair
from .errors import CapacityError, DomainError
from .protocol import ProtocolConfig, derive, log_photocount_pmf

__all__ = [
    "ToeplitzCode",
    "CountPair",
    "Hypothesis",
    "TrialMode",
    "TrialBatch",
    "toeplitz_encode",
    "qpsk_phases",
    "apply_awgn",
    "beam_split_intensities",
    "detect",
    "referee_decide",
    "run_trials",
    "char_fn_exact",
    "char_fn_approx",
    "wilson_interval",
]

#: Poisson means above this are rejected rather than approximately sampled.
MAX_POISSON_MEAN = 1e6

#: Default ceiling on the pulse-train length for a single simulation.
DEFAULT_SLOT_LIMIT = 10**8

_WILSON_Z95 = 1.959963984540054


class Hypothesis(str, Enum):
    EQUAL = "equal"
    DIFFERENT = "different"


class TrialMode(str, Enum):
    RANDOM_INPUTS = "random_inputs"
    WORST_CASE_DISTANCE = "worst_case_distance"
    EQUAL_INPUTS = "equal_inputs"


class CountPair(NamedTuple):
    k_plus: int
    k_minus: int


@dataclass(frozen=True, eq=False)
class ToeplitzCode:
    """Random linear code over GF(2) defined by a Toeplitz generator.

    The generator matrix is ``T[j, i] = diag[j - i + n - 1]`` for
    ``j < m``, ``i < n``; encoding is the GF(2) matrix-vector product,
    hence linear: E(x ^ y) = E(x) ^ E(y).
    """

    n: int
    m: int
    diag: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        if self.m < self.n:
            raise DomainError(f"need m >= n, got n={self.n}, m={self.m}")
        if self.m % 2 != 0:
            raise DomainError(f"m must be even (QPSK consumes bit pairs), got {self.m}")
        if self.diag.shape != (self.n + self.m - 1,):
            raise DomainError(
                f"generator needs {self.n + self.m - 1} bits, got {self.diag.shape}"
            )

    @classmethod
    def random(cls, n: int, m: int, seed: int) -> "ToeplitzCode":
        rng = np.random.default_rng(seed)
        diag = rng.integers(0, 2, size=n + m - 1, dtype=np.uint8)
        return cls(n=n, m=m, diag=diag, seed=seed)

    def dense_matrix(self) -> np.ndarray:
        idx = np.arange(self.m)[:, None] - np.arange(self.n)[None, :] + self.n - 1
        return self.diag[idx]


def toeplitz_encode(x: np.ndarray, code: ToeplitzCode) -> np.ndarray:
    """Encode an n-bit vector to its m-bit codeword."""
    x = np.asarray(x, dtype=np.uint8)
    if x.shape != (code.n,):
        raise DomainError(f"input must have length {code.n}, got {x.shape}")
    conv = np.convolve(code.diag.astype(np.int64), x.astype(np.int64))
    return (conv[code.n - 1 : code.n - 1 + code.m] % 2).astype(np.uint8)


def qpsk_phases(codeword: np.ndarray) -> np.ndarray:
    """Map codeword bit pairs to phases: 00->0, 01->pi/2, 11->pi, 10->3pi/2."""
    codeword = np.asarray(codeword, dtype=np.uint8)
    if codeword.ndim != 1 or codeword.size % 2 != 0:
        raise DomainError(f"codeword length must be even, got {codeword.shape}")
    b1 = codeword[0::2].astype(float)
    b2 = codeword[1::2].astype(float)
    return np.pi * b1 + (np.pi / 2.0) * np.abs(b1 - b2)


def apply_awgn(
    phases: np.ndarray,
    s: float,
    bandwidth: float,
    nu: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Per-slot amplitudes sqrt(s/B) e^{i theta} plus circular Gaussian noise.

    The noise has E[|xi|^2] = nu, i.e. nu/2 per real quadrature.
    """
    if s <= 0 or bandwidth <= 0 or nu < 0:
        raise DomainError("need s > 0, bandwidth > 0, nu >= 0")
    amps = np.sqrt(s / bandwidth) * np.exp(1j * np.asarray(phases, dtype=float))
    if nu > 0:
        noise = rng.normal(scale=math.sqrt(nu / 2.0), size=(2, amps.size))
        amps = amps + noise[0] + 1j * noise[1]
    return amps


def beam_split_intensities(
    a: np.ndarray, b: np.ndarray
) -> Tuple[float, float]:
    """Total energies at the two output ports of the balanced beam splitter."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DomainError(f"train lengths differ: {a.shape} vs {b.shape}")
    i_plus = float(np.sum(np.abs((a + b) / math.sqrt(2.0)) ** 2))
    i_minus = float(np.sum(np.abs((a - b) / math.sqrt(2.0)) ** 2))
    return i_plus, i_minus


def detect(
    a: np.ndarray, b: np.ndarray, rng: np.random.Generator
) -> CountPair:
    """Photocount pair from interfering two amplitude trains."""
    i_plus, i_minus = beam_split_intensities(a, b)
    if max(i_plus, i_minus) >= MAX_POISSON_MEAN:
        raise CapacityError(
            f"Poisson mean {max(i_plus, i_minus)} exceeds {MAX_POISSON_MEAN}"
        )
    return CountPair(
        k_plus=int(rng.poisson(i_plus)), k_minus=int(rng.poisson(i_minus))
    )


def referee_decide(
    counts: CountPair,
    mu: float,
    vis: VisibilityPair,
    rng: np.random.Generator,
) -> Hypothesis:
    """Likelihood test between the two visibility hypotheses.

    Exact ties are resolved by a fair coin; the coin is drawn on every call
    so that RNG stream alignment does not depend on the outcome.
    """
    if not mu > 0:
        raise DomainError(f"mu must be > 0, got {mu}")
    coin = rng.random() < 0.5
    ll_e = log_photocount_pmf(counts.k_plus, counts.k_minus, mu, vis.v_e)
    ll_d = log_photocount_pmf(counts.k_plus, counts.k_minus, mu, vis.v_d)
    if ll_e > ll_d:
        return Hypothesis.EQUAL
    if ll_e < ll_d:
        return Hypothesis.DIFFERENT
    return Hypothesis.EQUAL if coin else Hypothesis.DIFFERENT


@dataclass(frozen=True)
class TrialBatch:
    """Aggregate outcome of a Monte Carlo run.

    ``avg_error`` follows the equiprobable-hypothesis convention
    (errors_equal + errors_different) / (2 * trials); in a single-hypothesis
    mode the missing branch contributes zero errors.
    """

    trials: int
    errors_equal: int
    errors_different: int
    avg_error: float
    wilson_ci: Tuple[float, float]
    count_histogram: Dict[CountPair, int] = field(repr=False)
    seed: int = 0


def wilson_interval(errors: int, total: int, z: float = _WILSON_Z95) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if total < 1:
        raise DomainError("total must be >= 1")
    if not 0 <= errors <= total:
        raise DomainError("errors must be in [0, total]")
    p = errors / total
    denom = 1.0 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total))
    return (max(0.0, center - half), min(1.0, center + half))


def _sample_count_pairs(
    rng: np.random.Generator,
    l_slots: int,
    per_slot: float,
    nu: float,
    v0: np.ndarray,
    size: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Draw (k+, k-) for `size` trials at bare visibility v0 (scalar or array)."""
    v0 = np.broadcast_to(np.asarray(v0, dtype=float), (size,))
    mean_plus = l_slots * per_slot * (1.0 + v0)
    mean_minus = l_slots * per_slot * (1.0 - v0)
    if nu > 0:
        df = 2 * l_slots
        i_plus = (nu / 2.0) * rng.noncentral_chisquare(df, 2.0 * mean_plus / nu, size)
        i_minus = (nu / 2.0) * rng.noncentral_chisquare(df, 2.0 * mean_minus / nu, size)
    else:
        i_plus = mean_plus
        i_minus = mean_minus
    top = max(float(np.max(i_plus)), float(np.max(i_minus)))
    if top >= MAX_POISSON_MEAN:
        raise CapacityError(f"Poisson mean {top} exceeds {MAX_POISSON_MEAN}")
    return rng.poisson(i_plus), rng.poisson(i_minus)


def _decide_batch(
    k_plus: np.ndarray,
    k_minus: np.ndarray,
    vis: VisibilityPair,
    rng: np.random.Generator,
) -> np.ndarray:
    """Vectorized referee: True where the decision is 'equal'.

    Equivalent to referee_decide; the pmf normalization terms cancel so only
    the count-weighted log-visibility ratios remain.
    """
    coins = rng.random(k_plus.size) < 0.5
    v_e, v_d = vis.v_e, vis.v_d
    if v_e == v_d:
        return coins
    a = math.log((1.0 + v_e) / (1.0 + v_d))
    if v_e == 1.0:
        # k- > 0 is impossible under the equal hypothesis.
        ll_diff = np.where(k_minus > 0, -np.inf, k_plus * a)
    else:
        b = math.log((1.0 - v_e) / (1.0 - v_d))
        ll_diff = k_plus * a + k_minus * b
    return np.where(ll_diff > 0, True, np.where(ll_diff < 0, False, coins))


def _accumulate_histogram(
    hist: Dict[CountPair, int], k_plus: np.ndarray, k_minus: np.ndarray
) -> None:
    pairs = np.stack([k_plus, k_minus], axis=1)
    uniq, counts = np.unique(pairs, axis=0, return_counts=True)
    for (kp, km), c in zip(uniq, counts):
        key = CountPair(int(kp), int(km))
        hist[key] = hist.get(key, 0) + int(c)


def run_trials(
    cfg: ProtocolConfig,
    mode: TrialMode,
    trials: int,
    seed: int,
    slot_limit: int = DEFAULT_SLOT_LIMIT,
    code: Optional[ToeplitzCode] = None,
) -> TrialBatch:
    """Monte Carlo estimate of the average error probability.

    Modes:
      * ``equal_inputs`` -- only the equal hypothesis is simulated.
      * ``worst_case_distance`` -- per trial, one equal pair and one synthetic
        codeword pair at Hamming distance exactly ceil(delta * m); the ECC is
        bypassed because a random code does not guarantee minimum distance.
      * ``random_inputs`` -- per trial, one equal pair and one pair of
        distinct random inputs pushed through a random Toeplitz code.

    Reproducible: identical (cfg, mode, trials, seed) yields an identical
    batch.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    mode = TrialMode(mode)
    model = derive(cfg)
    if model.l_slots > slot_limit:
        raise CapacityError(
            f"pulse train of {model.l_slots} slots exceeds the limit {slot_limit}"
        )
    l_slots = model.l_slots
    m = 2 * l_slots
    per_slot = cfg.s / cfg.bandwidth
    vis = model.vis
    rng = np.random.default_rng(seed)

    hist: Dict[CountPair, int] = {}

    # Equal-hypothesis branch: identical phases on both arms, so the bare
    # visibility is exactly 1 regardless of the codeword.
    kp_e, km_e = _sample_count_pairs(rng, l_slots, per_slot, cfg.nu, 1.0, trials)
    eq_decisions = _decide_batch(kp_e, km_e, vis, rng)
    errors_equal = int(np.sum(~eq_decisions))
    _accumulate_histogram(hist, kp_e, km_e)

    errors_different = 0
    if mode is not TrialMode.EQUAL_INPUTS:
        if mode is TrialMode.WORST_CASE_DISTANCE:
            dist = math.ceil(cfg.delta * m)
            v0 = np.full(trials, 1.0 - 2.0 * dist / m)
        else:
            if code is None:
                code = ToeplitzCode.random(cfg.n, m, seed=seed ^ 0x5EED)
            elif (code.n, code.m) != (cfg.n, m):
                raise DomainError(
                    f"code shape ({code.n}, {code.m}) does not match "
                    f"config ({cfg.n}, {m})"
                )
            xor = rng.integers(0, 2, size=(trials, cfg.n), dtype=np.uint8)
            # By linearity only x ^ y matters; resample any all-zero rows
            # (equal inputs) by flipping one random position.
            zero_rows = np.flatnonzero(~xor.any(axis=1))
            flip_cols = rng.integers(0, cfg.n, size=trials)
            xor[zero_rows, flip_cols[zero_rows]] = 1
            dense = code.dense_matrix().astype(np.int64)
            weights = (xor.astype(np.int64) @ dense.T % 2).sum(axis=1)
            v0 = 1.0 - 2.0 * weights / m
        kp_d, km_d = _sample_count_pairs(rng, l_slots, per_slot, cfg.nu, v0, trials)
        d_decisions = _decide_batch(kp_d, km_d, vis, rng)
        errors_different = int(np.sum(d_decisions))
        _accumulate_histogram(hist, kp_d, km_d)

    total_errors = errors_equal + errors_different
    avg_error = total_errors / (2 * trials)
    ci = wilson_interval(total_errors, 2 * trials)
    return TrialBatch(
        trials=trials,
        errors_equal=errors_equal,
        errors_different=errors_different,
        avg_error=avg_error,
        wilson_ci=ci,
        count_histogram=hist,
        seed=seed,
    )


def char_fn_exact(
    phase_diffs: np.ndarray,
    s: float,
    bandwidth: float,
    nu: float,
    lambda_plus: float,
    lambda_minus: float,
) -> complex:
    """Exact photocount characteristic function after Gaussian averaging.

    Keeps the noise-dependent exponent corrections and the
    (1 - (e^{i lam} - 1) nu)^(-L) power factors that the weak-noise model
    drops.
    """
    if s <= 0 or bandwidth <= 0 or nu < 0:
        raise DomainError("need s > 0, bandwidth > 0, nu >= 0")
    phase_diffs = np.asarray(phase_diffs, dtype=float)
    l_slots = phase_diffs.size
    cos_sum = float(np.sum(np.cos(phase_diffs)))
    g_plus = (s / bandwidth) * (l_slots + cos_sum)
    g_minus = (s / bandwidth) * (l_slots - cos_sum)
    out = 1.0 + 0.0j
    for lam, g in ((lambda_plus, g_plus), (lambda_minus, g_minus)):
        z = np.exp(1j * lam) - 1.0
        denom = 1.0 - z * nu
        out *= np.exp(z / denom * g) * denom ** (-l_slots)
    return complex(out)


def char_fn_approx(
    v: float, mu: float, lambda_plus: float, lambda_minus: float
) -> complex:
    """Product-Poisson characteristic function with means mu(1 +- v)."""
    if mu < 0:
        raise DomainError(f"mu must be >= 0, got {mu}")
    if not -1.0 <= v <= 1.0:
        raise DomainError(f"visibility must be in [-1, 1], got {v}")
    z_plus = np.exp(1j * lambda_plus) - 1.0
    z_minus = np.exp(1j * lambda_minus) - 1.0
    return complex(np.exp(z_plus * mu * (1.0 + v) + z_minus * mu * (1.0 - v)))
