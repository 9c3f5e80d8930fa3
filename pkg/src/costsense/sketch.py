"""Streaming low-rank approximation of the accumulated second-moment matrix.

Two sketches are provided.  ``OjaSketch`` runs streaming eigenvector
estimation with decaying step 1/t and explicit row orthonormalization, and
exposes the pair (S, H) with which ``I_d - S^T H S`` approximates the inverse
of ``I_d + sum_t xhat_t xhat_t^T``.  ``SparseOjaSketch`` maintains the same
subspace factored as F @ Z, where Z changes by a sparse rank-one term per
round and F re-orthonormalizes the rows under the inner product induced by
the Gram matrix K = Z Z^T, so each update costs O(m^3 + m*s) instead of
O(m^2 d).
"""

from __future__ import annotations

import logging

import numpy as np

logger = logging.getLogger(__name__)


class SketchConditionError(RuntimeError):
    """The sketch state lost rank or the Gram matrix stopped being PSD."""


def to_sketch_vector(values: np.ndarray, gamma: float) -> np.ndarray:
    """Scale sample values by 1/sqrt(gamma); the sparsity pattern is unchanged."""
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    return values / np.sqrt(gamma)


def _fresh_row(rows: np.ndarray, d: int) -> np.ndarray:
    """First canonical basis vector not spanned by ``rows``, orthogonalized
    against them and normalized."""
    for k in range(d):
        v = np.zeros(d)
        v[k] = 1.0
        for r in rows:
            v -= (r @ v) * r
        n = np.linalg.norm(v)
        if n > 1e-6:
            logger.warning("sketch row collapsed; re-seeded from basis vector %d", k)
            return v / n
    raise SketchConditionError("no canonical vector independent of existing rows")


def orthonormalize_rows(V: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Modified Gram-Schmidt on the rows of V, in place.

    Collapsed rows (residual norm below ``tol``) are replaced by a fresh
    canonical direction.  A second pass runs when the first leaves residual
    non-orthogonality above 1e-10.
    """
    m = V.shape[0]
    for _pass in range(2):
        for i in range(m):
            v = V[i]
            for j in range(i):
                v -= (V[j] @ v) * V[j]
            n = np.linalg.norm(v)
            if n < tol:
                V[i] = _fresh_row(V[:i], V.shape[1])
            else:
                V[i] = v / n
        err = np.abs(V @ V.T - np.eye(m)).max()
        if err <= 1e-10:
            break
    return V


class OjaSketch:
    """Dense streaming sketch: eigenvalue estimates ``lam`` and orthonormal
    row basis ``V``, from which S = sqrt(t*lam) V and H = 1/(1 + t*lam)."""

    def __init__(self, m: int, d: int, init: str = "canonical", seed: int | None = None):
        if not 1 <= m <= d:
            raise ValueError(f"sketch size {m} out of range for dimension {d}")
        self.m = m
        self.d = d
        self.t = 0
        self.lam = np.zeros(m)
        self.V = _init_rows(m, d, init, seed)
        self.S = np.zeros((m, d))
        self.H = np.ones(m)

    def update(self, positions: np.ndarray, values: np.ndarray) -> None:
        """One streaming step with the (already scaled) to-sketch vector."""
        self.t += 1
        step = 1.0 / self.t
        p = self.V[:, positions] @ values
        self.lam = (1.0 - step) * self.lam + step * p * p
        self.V[:, positions] += step * np.outer(p, values)
        self.V = orthonormalize_rows(self.V)
        self.S = np.sqrt(self.t * self.lam)[:, None] * self.V
        self.H = 1.0 / (1.0 + self.t * self.lam)

    def reconstruct_sigma(self) -> np.ndarray:
        """Materialize I_d - S^T H S (diagnostic use; O(m d^2))."""
        return np.eye(self.d) - self.S.T @ (self.H[:, None] * self.S)


class SparseOjaSketch:
    """Sparsity-respecting variant: the basis is F @ Z with Z updated by one
    rank-one term per round and F re-orthonormalized in the K = Z Z^T inner
    product."""

    def __init__(self, m: int, d: int, init: str = "canonical", seed: int | None = None):
        if not 1 <= m <= d:
            raise ValueError(f"sketch size {m} out of range for dimension {d}")
        self.m = m
        self.d = d
        self.t = 0
        self.lam = np.zeros(m)
        self.F = np.eye(m)
        self.Z = _init_rows(m, d, init, seed)
        self.K = np.eye(m)
        self.H = np.ones(m)
        self.last_delta = np.zeros(m)

    def update(self, positions: np.ndarray, values: np.ndarray) -> np.ndarray:
        """One streaming step; returns the direction-update coefficients delta."""
        self.t += 1
        step = 1.0 / self.t
        Zx = self.Z[:, positions] @ values
        p = self.F @ Zx
        self.lam = (1.0 - step) * self.lam + step * p * p
        # the stepsize matrix is (1/t) * identity, so conjugating it by F
        # cancels and delta reduces to (Z xhat) / t
        delta = step * Zx
        xx = float(values @ values)
        self.K += np.outer(Zx, delta) + np.outer(delta, Zx) + xx * np.outer(delta, delta)
        self.Z[:, positions] += np.outer(delta, values)
        L, Q = decompose(self.F, self.K)
        if Q.shape[0] != self.m:
            raise SketchConditionError(
                "sketch basis lost rank during re-orthonormalization"
            )
        self.F = Q
        self.H = 1.0 / (1.0 + self.t * self.lam)
        self.last_delta = delta
        return delta

    def reconstruct_sigma(self) -> np.ndarray:
        """Materialize I_d - Z^T F^T (t * lam * H) F Z (diagnostic use)."""
        FZ = self.F @ self.Z
        return np.eye(self.d) - FZ.T @ ((self.t * self.lam * self.H)[:, None] * FZ)


def decompose(F: np.ndarray, K: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Gram-Schmidt on the rows of F under the inner product <a,b> = a^T K b.

    Returns (L, Q) with L @ Q = F and Q K Q^T = I.  Rows of F already spanned
    by earlier rows produce no Q row; the matching all-zero L columns and Q
    rows are dropped, so Q is square exactly when F has full rank in the
    K-metric.  Each row gets a second projection pass, which keeps Q's
    K-orthonormality near machine precision without disturbing L @ Q = F.
    """
    m = F.shape[0]
    L = np.zeros((m, m))
    Q = np.zeros((m, m))
    filled = np.zeros(m, dtype=bool)
    for i in range(m):
        f = F[i]
        alpha = Q @ (K @ f)
        beta = f - Q.T @ alpha
        alpha2 = Q @ (K @ beta)
        beta = beta - Q.T @ alpha2
        alpha += alpha2
        c_sq = float(beta @ (K @ beta))
        if c_sq < -1e-12:
            raise SketchConditionError("Gram matrix is not positive semidefinite")
        c = np.sqrt(max(c_sq, 0.0))
        if c > tol:
            Q[i] = beta / c
            filled[i] = True
            alpha[i] = c
        else:
            alpha[i] = 0.0
        L[i] = alpha
    return L[:, filled], Q[filled]


def _init_rows(m: int, d: int, init: str, seed: int | None) -> np.ndarray:
    if init == "canonical":
        V = np.zeros((m, d))
        V[np.arange(m), np.arange(m)] = 1.0
        return V
    if init == "random":
        rng = np.random.Generator(np.random.Philox(key=0 if seed is None else seed))
        A = rng.standard_normal((m, d))
        return orthonormalize_rows(A)
    raise ValueError(f"unknown sketch init {init!r}")
