"""Adaptively regularized cost-sensitive online gradient descent.

The learner keeps a Gaussian belief over weights: a mean vector ``mu`` used
for prediction and a covariance ``sigma`` that starts at the identity and
shrinks along observed directions.  On each loss-active round the covariance
absorbs a rank-one term through its closed-form inverse update, and the mean
then descends the loss subgradient preconditioned by the covariance.  A
diagonal mode keeps only the diagonal of ``sigma`` for O(d) rounds.
"""

from __future__ import annotations

import numpy as np

from .losses import LossVariant, gradient_scale, loss


def covariance_update(sigma: np.ndarray, x: np.ndarray, gamma: float) -> np.ndarray:
    """Rank-one shrinkage sigma - (sigma x)(sigma x)^T / (gamma + x^T sigma x).

    Equivalent to inverting sigma^{-1} + x x^T / gamma without forming the
    inverse.  The result is re-symmetrized to stop floating-point drift.
    """
    s = sigma @ x
    denom = gamma + float(x @ s)
    out = sigma - np.outer(s, s) / denom
    return 0.5 * (out + out.T)


def covariance_update_diag(
    sigma: np.ndarray, positions: np.ndarray, values: np.ndarray, gamma: float
) -> np.ndarray:
    """Diagonal analog: each touched entry shrinks by (sigma_i x_i)^2 / denom,
    with denom = gamma + sum_j sigma_j x_j^2 over the sample's support."""
    sv = sigma[positions]
    sx = sv * values
    denom = gamma + float(values @ sx)
    out = sigma.copy()
    out[positions] = sv - (sx * sx) / denom
    return out


def mean_update(mu: np.ndarray, sigma_used: np.ndarray, g: np.ndarray, eta: float) -> np.ndarray:
    """mu - eta * (sigma_used @ g); sigma_used may be the full matrix or a diagonal."""
    if sigma_used.ndim == 1:
        return mu - eta * sigma_used * g
    return mu - eta * (sigma_used @ g)


class AdaptiveCSGD:
    """Full-matrix or diagonal second-order cost-sensitive learner.

    ``update_rule`` selects whether the mean step is preconditioned by the
    freshly shrunk covariance ("new", the default) or by the covariance from
    before this round ("old", the ablation setting).
    """

    def __init__(
        self,
        d: int,
        eta: float,
        gamma: float,
        variant: LossVariant = LossVariant.I,
        diagonal: bool = False,
        update_rule: str = "new",
    ):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if eta <= 0.0:
            raise ValueError("eta must be positive")
        if gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if update_rule not in ("new", "old"):
            raise ValueError("update_rule must be 'new' or 'old'")
        self.d = d
        self.eta = eta
        self.gamma = gamma
        self.variant = LossVariant(variant)
        self.diagonal = diagonal
        self.update_rule = update_rule
        self.mu = np.zeros(d)
        self.sigma = np.ones(d) if diagonal else np.eye(d)

    def score(self, positions: np.ndarray, values: np.ndarray) -> float:
        return float(self.mu[positions] @ values)

    def predict(self, positions: np.ndarray, values: np.ndarray) -> tuple[float, int]:
        s = self.score(positions, values)
        return s, (1 if s >= 0.0 else -1)

    def update(self, positions, values, y, rho, score=None):
        s = self.score(positions, values) if score is None else score
        l = loss(self.variant, s, y, rho)
        a = gradient_scale(self.variant, y, rho, l)
        if a == 0.0:
            return l
        if self.diagonal:
            self._step_diag(positions, values, a)
        else:
            self._step_full(positions, values, a)
        return l

    def _step_full(self, positions, values, a):
        x = np.zeros(self.d)
        x[positions] = values
        g = a * x
        if self.update_rule == "old":
            sigma_used = self.sigma
            self.mu = mean_update(self.mu, sigma_used, g, self.eta)
            self.sigma = covariance_update(self.sigma, x, self.gamma)
        else:
            self.sigma = covariance_update(self.sigma, x, self.gamma)
            self.mu = mean_update(self.mu, self.sigma, g, self.eta)

    def _step_diag(self, positions, values, a):
        # touched coordinates only: both sigma and the gradient live on the support
        if self.update_rule == "old":
            sig_used = self.sigma[positions].copy()
            self.sigma = covariance_update_diag(self.sigma, positions, values, self.gamma)
        else:
            self.sigma = covariance_update_diag(self.sigma, positions, values, self.gamma)
            sig_used = self.sigma[positions]
        self.mu[positions] -= self.eta * a * sig_used * values
