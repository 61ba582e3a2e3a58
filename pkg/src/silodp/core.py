"""Shared numeric types: Euclidean-ball domains, projections, and the run ledger.

Model points are plain float64 numpy arrays. Domains are Euclidean balls
(center, radius); the feasible set of a localization phase is the
intersection of two balls, projected onto with Dykstra's algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ContractViolation(ValueError):
    """An operation was called with inputs violating its preconditions."""


class InfeasibleDomain(ValueError):
    """The requested feasible set is empty."""


class ProjectionError(RuntimeError):
    """Iterative projection failed to converge within its iteration cap."""


class CompositionError(ValueError):
    """Parallel composition is inapplicable (phase batches overlap)."""


def as_vector(x, d: int | None = None) -> np.ndarray:
    """Coerce to a finite float64 vector, optionally checking its dimension."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ContractViolation(f"expected a 1-d vector, got shape {v.shape}")
    if d is not None and v.shape[0] != d:
        raise ContractViolation(f"dimension mismatch: expected {d}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ContractViolation("vector has non-finite entries")
    return v


@dataclass(eq=False)
class Domain:
    """Euclidean ball ``{w : ||w - center|| <= radius}``.

    The diameter ``2 * radius`` is the constant that enters every step-size
    and regularization schedule built on this domain.
    """

    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = as_vector(self.center)
        self.radius = float(self.radius)
        if self.radius < 0:
            raise ContractViolation("radius must be >= 0")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def contains(self, w: np.ndarray, tol: float = 1e-9) -> bool:
        return float(np.linalg.norm(w - self.center)) <= self.radius + tol

    def project(self, z: np.ndarray) -> np.ndarray:
        return project(self, z)


def project(domain: Domain, z: np.ndarray) -> np.ndarray:
    """Euclidean projection of ``z`` onto a ball.

    Returns ``z`` unchanged for interior points, otherwise rescales the
    offset from the center onto the sphere.
    """
    z = as_vector(z, domain.dim)
    offset = z - domain.center
    dist = float(np.linalg.norm(offset))
    if dist <= domain.radius:
        return z
    return domain.center + (domain.radius / dist) * offset


def project_intersection(
    outer: Domain,
    inner: Domain,
    z: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 10_000,
) -> np.ndarray:
    """Project ``z`` onto the intersection of two balls via Dykstra's algorithm.

    Plain alternating projections find a feasible point but not the nearest
    one; Dykstra's correction terms recover the exact projection. Iterates
    until successive points move less than ``tol``.
    """
    if outer.dim != inner.dim:
        raise ContractViolation("domain dimensions differ")
    z = as_vector(z, outer.dim)
    gap = float(np.linalg.norm(outer.center - inner.center))
    if gap > outer.radius + inner.radius:
        raise InfeasibleDomain(
            f"ball centers are {gap:.6g} apart but radii sum to "
            f"{outer.radius + inner.radius:.6g}"
        )
    x = z.copy()
    p = np.zeros_like(z)
    q = np.zeros_like(z)
    for _ in range(max_iter):
        y = project(outer, x + p)
        p = x + p - y
        x_new = project(inner, y + q)
        q = y + q - x_new
        if float(np.linalg.norm(x_new - x)) < tol:
            return x_new
        x = x_new
    residual = float(np.linalg.norm(x_new - x))
    raise ProjectionError(
        f"Dykstra projection did not converge in {max_iter} iterations "
        f"(last movement {residual:.3e})"
    )


@dataclass(eq=False)
class IntersectionDomain:
    """Feasible set of one localization phase: ``outer ∩ B(center, radius)``."""

    outer: Domain
    inner: Domain
    tol: float = 1e-10

    def __post_init__(self):
        if self.outer.dim != self.inner.dim:
            raise ContractViolation("domain dimensions differ")

    @property
    def dim(self) -> int:
        return self.outer.dim

    def contains(self, w: np.ndarray, tol: float = 1e-8) -> bool:
        return self.outer.contains(w, tol) and self.inner.contains(w, tol)

    def project(self, z: np.ndarray) -> np.ndarray:
        if self.outer.contains(z, 0.0) and self.inner.contains(z, 0.0):
            return as_vector(z, self.dim)
        return project_intersection(self.outer, self.inner, z, tol=self.tol)


@dataclass(frozen=True)
class PrivacyEntry:
    """One silo's Gaussian-mechanism usage during one phase."""

    silo_id: int
    phase_id: int
    epsilon: float
    delta: float
    sigma2: float
    batch_indices: tuple[int, ...]


@dataclass
class RunLedger:
    """Counters and privacy records accumulated over a simulated run.

    ``comm_rounds`` counts server contacts; ``grad_calls`` counts per-sample
    (sub)gradient evaluations summed over silos. Counters only ever grow.
    """

    comm_rounds: int = 0
    grad_calls: int = 0
    privacy_entries: list[PrivacyEntry] = field(default_factory=list)
    transcript: list[tuple] = field(default_factory=list)
    keep_transcript: bool = False

    def record_round(self, silos_contacted: int, per_silo_grad_evals: int) -> "RunLedger":
        if silos_contacted < 0 or per_silo_grad_evals < 0:
            raise ContractViolation("round counts must be >= 0")
        self.comm_rounds += 1
        self.grad_calls += silos_contacted * per_silo_grad_evals
        return self

    def record_round_counts(self, per_silo_counts) -> "RunLedger":
        """Record one round with non-uniform per-silo gradient counts
        (Poisson-sampled rounds have a realized count per silo)."""
        counts = [int(c) for c in per_silo_counts]
        if any(c < 0 for c in counts):
            raise ContractViolation("round counts must be >= 0")
        self.comm_rounds += 1
        self.grad_calls += sum(counts)
        return self

    def add_privacy_entry(
        self,
        silo_id: int,
        phase_id: int,
        epsilon: float,
        delta: float,
        sigma2: float,
        batch_indices,
    ) -> None:
        self.privacy_entries.append(
            PrivacyEntry(
                silo_id=int(silo_id),
                phase_id=int(phase_id),
                epsilon=float(epsilon),
                delta=float(delta),
                sigma2=float(sigma2),
                batch_indices=tuple(int(i) for i in batch_indices),
            )
        )

    def note(self, *row) -> None:
        if self.keep_transcript:
            self.transcript.append(tuple(row))


def record_round(ledger: RunLedger, silos_contacted: int, per_silo_grad_evals: int) -> RunLedger:
    """Functional alias for :meth:`RunLedger.record_round`."""
    return ledger.record_round(silos_contacted, per_silo_grad_evals)


def write_privacy_csv(ledger: RunLedger, path) -> None:
    """Dump per-silo per-phase privacy entries (without batch indices)."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["silo_id", "phase", "epsilon", "delta", "sigma2"])
        for e in ledger.privacy_entries:
            writer.writerow(
                [e.silo_id, e.phase_id, f"{e.epsilon:.12g}", f"{e.delta:.12g}", f"{e.sigma2:.12g}"]
            )
