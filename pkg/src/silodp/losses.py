"""Per-sample convex loss oracles.

Four kinds are supported:

- ``quadratic``:  f(w, x) = 0.5 ||w - x||^2                (smooth, beta = 1)
- ``logistic``:   f(w, (a, y)) = log(1 + exp(-y <w, a>))   (smooth)
- ``hinge``:      f(w, (a, y)) = max(0, 1 - y <w, a>)      (non-smooth)
- ``absolute``:   f(w, x) = ||w - x||_1                    (non-smooth)

Non-smooth kinds return a fixed subgradient selection: 0 at exact kinks,
so evaluation is deterministic. Lipschitz constants are analytic bounds
from the declared data radius and domain, never empirical estimates,
because the privacy noise calibration must use a sound upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from silodp.core import ContractViolation, Domain, as_vector

LOSS_KINDS = ("quadratic", "logistic", "hinge", "absolute")


@dataclass(eq=False)
class LossOracle:
    """Convex per-sample loss with value and (sub)gradient evaluation.

    ``L`` bounds the (sub)gradient norm over the declared domain and data
    range; ``beta`` is the gradient's Lipschitz constant for smooth kinds and
    None otherwise. ``uses_labels`` tells callers whether samples are
    (features, label) pairs or bare feature vectors.
    """

    kind: str
    L: float
    d: int
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in LOSS_KINDS:
            raise ContractViolation(f"unknown loss kind {self.kind!r}")
        if self.L <= 0:
            raise ContractViolation("Lipschitz constant must be > 0")

    @property
    def smooth(self) -> bool:
        return self.kind in ("quadratic", "logistic")

    @property
    def uses_labels(self) -> bool:
        return self.kind in ("logistic", "hinge")

    # -- vectorized batch evaluation ------------------------------------
    # X has shape (k, d); y has shape (k,) for label-using kinds, else None.

    def values(self, w: np.ndarray, X: np.ndarray, y=None) -> np.ndarray:
        if self.kind == "quadratic":
            diff = w[None, :] - X
            return 0.5 * np.einsum("ij,ij->i", diff, diff)
        if self.kind == "logistic":
            margins = y * (X @ w)
            return np.logaddexp(0.0, -margins)
        if self.kind == "hinge":
            return np.maximum(0.0, 1.0 - y * (X @ w))
        diff = w[None, :] - X
        return np.abs(diff).sum(axis=1)

    def grads(self, w: np.ndarray, X: np.ndarray, y=None) -> np.ndarray:
        """Per-sample (sub)gradients at a common point ``w``; shape (k, d)."""
        return self.grads_at(np.broadcast_to(w, X.shape), X, y)

    def grads_at(self, W: np.ndarray, X: np.ndarray, y=None) -> np.ndarray:
        """Per-sample (sub)gradients where sample j is evaluated at W[j]."""
        if self.kind == "quadratic":
            return W - X
        if self.kind == "logistic":
            margins = y * np.einsum("ij,ij->i", X, W)
            return -(y * expit(-margins))[:, None] * X
        if self.kind == "hinge":
            margins = 1.0 - y * np.einsum("ij,ij->i", X, W)
            active = margins > 0.0  # kink (margin == 0) selects subgradient 0
            return -(y * active)[:, None] * X
        return np.sign(W - X)  # sign(0) = 0 is the kink rule

    def mean_value_grad(self, w, X, y=None) -> tuple[float, np.ndarray]:
        w = np.asarray(w, dtype=np.float64)
        vals = self.values(w, X, y)
        g = self.grads(w, X, y).mean(axis=0)
        return float(vals.mean()), g

    def mean_grad(self, w, X, y=None) -> np.ndarray:
        return self.grads(np.asarray(w, dtype=np.float64), X, y).mean(axis=0)


def loss_eval(loss: LossOracle, w, sample) -> tuple[float, np.ndarray]:
    """Evaluate one sample: returns (value, gradient-or-subgradient).

    ``sample`` is (features, label) for logistic/hinge, a bare feature
    vector otherwise.
    """
    w = as_vector(w, loss.d)
    if loss.uses_labels:
        x, y = sample
        X = as_vector(x, loss.d)[None, :]
        yv = np.asarray([float(y)])
    else:
        X = as_vector(sample, loss.d)[None, :]
        yv = None
    value = float(loss.values(w, X, yv)[0])
    grad = loss.grads(w, X, yv)[0]
    return value, grad


def make_loss(
    kind: str,
    d: int,
    data_radius: float,
    domain: Domain | None = None,
) -> LossOracle:
    """Build a loss oracle with analytic Lipschitz/smoothness constants.

    ``data_radius`` bounds ||x|| (or ||a||) over the dataset. For the
    quadratic kind the gradient w - x also grows with the domain, so the
    domain must be supplied there.
    """
    if kind == "quadratic":
        if domain is None:
            raise ContractViolation("quadratic loss needs the domain to bound ||w - x||")
        L = domain.radius + float(np.linalg.norm(domain.center)) + data_radius
        return LossOracle(kind=kind, L=L, d=d, beta=1.0)
    if kind == "logistic":
        # ||grad|| = ||a|| * sigmoid(.) <= ||a||; Hessian <= ||a||^2 / 4.
        return LossOracle(kind=kind, L=data_radius, d=d, beta=data_radius**2 / 4.0)
    if kind == "hinge":
        return LossOracle(kind=kind, L=data_radius, d=d, beta=None)
    if kind == "absolute":
        return LossOracle(kind=kind, L=float(np.sqrt(d)), d=d, beta=None)
    raise ContractViolation(f"unknown loss kind {kind!r}")
