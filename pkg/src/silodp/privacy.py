"""Gaussian-mechanism calibration and the parallel-composition check.

The noise variance formula is the one every solver in this package relies
on: a silo that runs R rounds on a phase batch of n samples, clipping at
sensitivity 2L/K per averaged gradient, satisfies (eps, delta) record-level
DP when each message carries N(0, sigma2 I_d) noise with

    sigma2 = 256 L^2 R ln(2.5 R / delta) ln(2 / delta) / (n^2 eps^2).

Across phases the same silo touches pairwise disjoint batches, so the
overall budget is the per-phase maximum (parallel composition), which
``ledger_compose`` verifies rather than assumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import groupby

import numpy as np

from silodp.core import CompositionError, ContractViolation, RunLedger


@dataclass(frozen=True)
class PrivacyBudget:
    """(epsilon, delta) pair. ``epsilon = inf`` means a noiseless run."""

    epsilon: float
    delta: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ContractViolation("epsilon must be > 0")
        if not (0.0 < self.delta < 1.0):
            raise ContractViolation("delta must lie in (0, 1)")

    @property
    def noiseless(self) -> bool:
        return math.isinf(self.epsilon)

    def check_calibration_hypothesis(self) -> None:
        """The calibration constant is only valid for eps <= 2 ln(2/delta)."""
        if self.noiseless:
            return
        if self.epsilon > 2.0 * math.log(2.0 / self.delta):
            raise ContractViolation(
                f"epsilon={self.epsilon} exceeds 2 ln(2/delta)="
                f"{2.0 * math.log(2.0 / self.delta):.6g}"
            )


def calibrate_sigma2(L: float, R: int, n_phase: int, budget: PrivacyBudget) -> float:
    """Per-coordinate Gaussian variance for one phase of R rounds on n samples."""
    if L <= 0 or R <= 0 or n_phase <= 0:
        raise ContractViolation("calibrate_sigma2 inputs must be positive")
    if budget.noiseless:
        return 0.0
    return (
        256.0
        * L**2
        * R
        * math.log(2.5 * R / budget.delta)
        * math.log(2.0 / budget.delta)
        / (n_phase**2 * budget.epsilon**2)
    )


@dataclass(frozen=True)
class NoisePlan:
    """A calibrated noise level together with the inputs that produced it."""

    sigma2: float
    R: int
    n_phase: int
    L: float

    @classmethod
    def for_phase(cls, L: float, R: int, n_phase: int, budget: PrivacyBudget) -> "NoisePlan":
        return cls(sigma2=calibrate_sigma2(L, R, n_phase, budget), R=R, n_phase=n_phase, L=L)


def poisson_batch(n_phase: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of a Poisson-subsampled batch: each of [0, n) kept w.p. ``p``."""
    if not (0.0 < p <= 1.0):
        raise ContractViolation("sampling rate must lie in (0, 1]")
    if p == 1.0:
        return np.arange(n_phase)
    return np.nonzero(rng.random(n_phase) < p)[0]


def gaussian_noise(d: int, sigma2: float, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. N(0, sigma2) vector; exactly zero when sigma2 == 0."""
    if sigma2 < 0:
        raise ContractViolation("sigma2 must be >= 0")
    if sigma2 == 0.0:
        return np.zeros(d)
    return rng.normal(0.0, math.sqrt(sigma2), size=d)


def ledger_compose(ledger: RunLedger) -> PrivacyBudget:
    """Overall per-silo budget via parallel composition over disjoint batches.

    Raises :class:`CompositionError` if any two phases of one silo share a
    sample index, in which case parallel composition does not apply.
    """
    entries = sorted(ledger.privacy_entries, key=lambda e: e.silo_id)
    if not entries:
        raise ContractViolation("ledger has no privacy entries")
    worst_eps = 0.0
    worst_delta = 0.0
    for silo_id, group in groupby(entries, key=lambda e: e.silo_id):
        seen: set[int] = set()
        for e in group:
            batch = set(e.batch_indices)
            overlap = seen & batch
            if overlap:
                raise CompositionError(
                    f"silo {silo_id}: phase {e.phase_id} reuses sample indices "
                    f"{sorted(overlap)[:5]}{'...' if len(overlap) > 5 else ''}"
                )
            seen |= batch
            worst_eps = max(worst_eps, e.epsilon)
            worst_delta = max(worst_delta, e.delta)
    return PrivacyBudget(epsilon=worst_eps, delta=worst_delta)
