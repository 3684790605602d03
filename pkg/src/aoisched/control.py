"""LTI plants, Riccati gain synthesis, remote state estimation, LQG cost.

Each sub-system is a discrete-time plant ``x[k+1] = A x[k] + B u[k] + w[k]``
sampled once per period.  The controller never sees the state directly; it
reconstructs it from the latest utilized packet and its own input history,

    x_hat[k] = A^delta x[k-delta] + sum_{q=1}^{delta} A^{q-1} B u[k-q],

which is the minimum-mean-squared-error estimate given a packet that is
``delta`` periods old.  Feedback is ``u = -L x_hat`` with ``L`` from the
discrete algebraic Riccati equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

# states beyond this magnitude are treated as diverged by the simulator
DIVERGENCE_GUARD = 1e150


class RiccatiError(RuntimeError):
    """Gain synthesis failed (no convergence or singular input-weight term)."""


def solve_riccati(
    A: np.ndarray,
    B: np.ndarray,
    Q: np.ndarray,
    R: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 10**6,
) -> Tuple[np.ndarray, np.ndarray]:
    """Fixed-point solution of the discrete algebraic Riccati equation.

    Iterates ``P <- Q + A^T (P - P B (R + B^T P B)^{-1} B^T P) A`` from
    ``P = Q`` until the update falls below ``tol`` in max-norm.  ``R = 0``
    is allowed as long as ``B^T P B`` stays invertible.

    Returns
    -------
    (P, L) : the fixed point and the optimal feedback gain
        ``L = (R + B^T P B)^{-1} B^T P A``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    n, m = B.shape
    if A.shape != (n, n) or Q.shape != (n, n) or R.shape != (m, m):
        raise ValueError("inconsistent matrix dimensions")

    P = Q.copy()
    for _ in range(max_iter):
        S = P @ B
        M = R + B.T @ S
        try:
            G = np.linalg.solve(M, S.T @ A)
        except np.linalg.LinAlgError as exc:
            raise RiccatiError(f"singular R + B^T P B during iteration: {exc}") from exc
        P_next = Q + A.T @ (P @ A - S @ G)
        P_next = (P_next + P_next.T) / 2.0
        if not np.all(np.isfinite(P_next)):
            raise RiccatiError("Riccati iteration diverged (is (A, B) stabilizable?)")
        if np.max(np.abs(P_next - P)) < tol:
            P = P_next
            break
        P = P_next
    else:
        raise RiccatiError(f"no convergence within {max_iter} iterations (tol={tol})")

    M = R + B.T @ P @ B
    try:
        L = np.linalg.solve(M, B.T @ P @ A)
    except np.linalg.LinAlgError as exc:
        raise RiccatiError(f"singular R + B^T P B at the fixed point: {exc}") from exc
    return P, L


def _psd_factor(sigma: np.ndarray) -> np.ndarray:
    """Square root factor F with F F^T = sigma, accepting semi-definite input."""
    try:
        return np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(sigma)
        if np.min(vals) < -1e-10 * max(1.0, np.max(np.abs(vals))):
            raise ValueError("noise covariance is not positive semi-definite")
        return vecs @ np.diag(np.sqrt(np.clip(vals, 0.0, None)))


@dataclass(eq=False)
class PlantModel:
    """Immutable description of one sub-system, with synthesized gain."""

    A: np.ndarray
    B: np.ndarray
    Sigma: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    P: np.ndarray = field(init=False)
    L: np.ndarray = field(init=False)
    noise_factor: np.ndarray = field(init=False)

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.B = np.atleast_2d(np.asarray(self.B, dtype=float))
        self.Sigma = np.atleast_2d(np.asarray(self.Sigma, dtype=float))
        self.Q = np.atleast_2d(np.asarray(self.Q, dtype=float))
        self.R = np.atleast_2d(np.asarray(self.R, dtype=float))
        n, m = self.B.shape
        if self.A.shape != (n, n) or self.Sigma.shape != (n, n):
            raise ValueError("A and Sigma must be n x n matching B's row count")
        self.P, self.L = solve_riccati(self.A, self.B, self.Q, self.R)
        self.noise_factor = _psd_factor(self.Sigma)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    def draw_noise(self, rng: np.random.Generator) -> np.ndarray:
        """One process-noise sample w ~ N(0, Sigma)."""
        return self.noise_factor @ rng.standard_normal(self.n)


@dataclass(eq=False)
class PlantState:
    """True state trajectory of one plant, at sampling-period granularity."""

    x: np.ndarray
    k: int = 0
    u_history: List[np.ndarray] = field(default_factory=list)


@dataclass(eq=False)
class EstimatorState:
    """Controller-side estimate for the current sampling period."""

    x_hat: np.ndarray
    payload: Optional[np.ndarray] = None
    age: Optional[int] = None


def plant_step(model: PlantModel, state: PlantState, u: np.ndarray, w: np.ndarray) -> PlantState:
    """Advance the plant one sampling period: ``x' = A x + B u + w``."""
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if u.shape != (model.m,) or w.shape != (model.n,):
        raise ValueError("input/noise dimension mismatch")
    x_next = model.A @ state.x + model.B @ u + w
    return PlantState(x=x_next, k=state.k + 1, u_history=state.u_history + [u])


def estimate(
    model: PlantModel,
    payload_state: np.ndarray,
    delta: int,
    u_recent: Sequence[np.ndarray],
) -> np.ndarray:
    """Reconstruct the current state from a payload ``delta`` periods old.

    ``u_recent`` holds the inputs applied since the payload was generated,
    most recent first: ``u[k-1], u[k-2], ..., u[k-delta]``.  Evaluated as a
    noise-free forward rollout, which is algebraically identical to the
    power-sum form and avoids forming large matrix powers explicitly.
    """
    if delta < 1:
        raise ValueError(f"age must be >= 1, got {delta}")
    if len(u_recent) < delta:
        raise ValueError(f"need {delta} past inputs, got {len(u_recent)}")
    x_hat = np.asarray(payload_state, dtype=float)
    for q in range(delta, 0, -1):
        x_hat = model.A @ x_hat + model.B @ np.asarray(u_recent[q - 1], dtype=float)
    return x_hat


def control_input(model: PlantModel, x_hat: np.ndarray) -> np.ndarray:
    """Feedback law ``u = -L x_hat``."""
    return -(model.L @ x_hat)


def estimation_error(x: np.ndarray, x_hat: np.ndarray) -> float:
    """Squared estimation error ``(x - x_hat)^T (x - x_hat)``."""
    e = np.asarray(x, dtype=float) - np.asarray(x_hat, dtype=float)
    return float(e @ e)


def stale_error(x: np.ndarray, w_prev: np.ndarray, x_hat: np.ndarray) -> np.ndarray:
    """Error component attributable to information age.

    Subtracting the most recent period's noise from the realized error leaves
    the part a fresher packet would have removed; its mean square is what the
    age penalty g(delta) predicts (zero at age 1).
    """
    return (np.asarray(x, dtype=float) - np.asarray(w_prev, dtype=float)) - np.asarray(
        x_hat, dtype=float
    )


class LqgAccumulator:
    """Running quadratic control cost ``mean_k x^T Q x + u^T R u``."""

    def __init__(self, Q: np.ndarray, R: np.ndarray):
        self.Q = np.atleast_2d(np.asarray(Q, dtype=float))
        self.R = np.atleast_2d(np.asarray(R, dtype=float))
        self.total = 0.0
        self.periods = 0

    def add(self, x: np.ndarray, u: np.ndarray) -> "LqgAccumulator":
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        self.total += float(x @ self.Q @ x) + float(u @ self.R @ u)
        self.periods += 1
        return self

    @property
    def mean(self) -> float:
        if self.periods == 0:
            raise ValueError("no sampling periods accumulated")
        return self.total / self.periods
