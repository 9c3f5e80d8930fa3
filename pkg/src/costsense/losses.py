"""Cost-sensitive hinge surrogates and the class-bias multiplier rho.

Two convex stand-ins for the weighted mistake indicator are supported:
variant I widens the margin demanded of the rare class
(``max(0, rho_y - y*score)``), variant II steepens its slope
(``rho_y * max(0, 1 - y*score)``), where ``rho_y`` is ``rho`` for positive
labels and 1 for negative ones.  Both collapse to the ordinary hinge when
rho = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np


class Metric(Enum):
    SUM = "sum"
    COST = "cost"


class RhoMode(Enum):
    FIXED_ORACLE = "oracle"
    LAPLACE = "laplace"


class LossVariant(IntEnum):
    I = 1
    II = 2


def class_weight(y: int, rho: float) -> float:
    """rho for the positive class, 1 for the negative class."""
    return rho if y == 1 else 1.0


def loss(variant: LossVariant, score: float, y: int, rho: float) -> float:
    """Surrogate loss at a precomputed score = mu . x."""
    if variant == LossVariant.I:
        return max(0.0, class_weight(y, rho) - y * score)
    return class_weight(y, rho) * max(0.0, 1.0 - y * score)


def gradient_scale(variant: LossVariant, y: int, rho: float, loss_value: float) -> float:
    """Coefficient a such that the subgradient w.r.t. mu is a * x.

    Zero when the hinge is inactive (loss exactly 0), so a zero return means
    "no update".  Variant II scales the slope by the class weight.
    """
    if loss_value <= 0.0:
        return 0.0
    if variant == LossVariant.I:
        return -float(y)
    return -class_weight(y, rho) * float(y)


def subgradient(
    variant: LossVariant,
    positions: np.ndarray,
    values: np.ndarray,
    y: int,
    rho: float,
    loss_value: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Sparse subgradient (positions, values) for the given sample.

    Returns empty arrays when the loss is zero; otherwise the input sparsity
    pattern with values scaled by :func:`gradient_scale`.
    """
    positions = np.asarray(positions)
    values = np.asarray(values, dtype=np.float64)
    a = gradient_scale(variant, y, rho, loss_value)
    if a == 0.0:
        return np.empty(0, dtype=positions.dtype), np.empty(0)
    return positions, a * values


@dataclass
class CostModel:
    """Metric weights plus the bias parameter rho and its supply mode.

    In LAPLACE mode (sum metric) rho tracks the add-one-smoothed running
    class ratio ``alpha_p*(seen_neg+1) / (alpha_n*(seen_pos+1))``.  In
    FIXED_ORACLE mode rho is supplied once, either directly or resolved from
    the full dataset's class counts.  The cost metric never needs counts:
    rho = c_p/c_n regardless of mode.
    """

    metric: Metric = Metric.SUM
    alpha_p: float = 0.5
    alpha_n: float = 0.5
    c_p: float = 0.9
    c_n: float = 0.1
    rho_mode: RhoMode = RhoMode.FIXED_ORACLE
    rho: float | None = None
    seen_pos: int = 0
    seen_neg: int = 0

    def __post_init__(self):
        if not (0.0 <= self.alpha_p <= 1.0 and 0.0 < self.alpha_n <= 1.0):
            raise ValueError("alpha_p in [0,1] and alpha_n in (0,1] required")
        if abs(self.alpha_p + self.alpha_n - 1.0) > 1e-12:
            raise ValueError("alpha_p + alpha_n must equal 1")
        if not (0.0 <= self.c_p <= 1.0 and 0.0 < self.c_n <= 1.0):
            raise ValueError("c_p in [0,1] and c_n in (0,1] required")
        if abs(self.c_p + self.c_n - 1.0) > 1e-12:
            raise ValueError("c_p + c_n must equal 1")
        if self.rho is not None and self.rho <= 0.0:
            raise ValueError("rho must be positive")
        if self.rho_mode == RhoMode.LAPLACE and self.rho is None:
            self.rho = self._laplace_rho()

    def _laplace_rho(self) -> float:
        if self.metric == Metric.COST:
            return self.c_p / self.c_n
        return (self.alpha_p * (self.seen_neg + 1)) / (self.alpha_n * (self.seen_pos + 1))


def resolve_rho(cm: CostModel, dataset_counts: tuple[int, int] | None = None) -> float:
    """The rho this model should use right now.

    ``dataset_counts`` is (T_p, T_n) and is required only for the sum metric
    in FIXED_ORACLE mode with no rho supplied.
    """
    if cm.rho_mode == RhoMode.LAPLACE:
        return cm._laplace_rho()
    if cm.rho is not None:
        return cm.rho
    if cm.metric == Metric.COST:
        return cm.c_p / cm.c_n
    if dataset_counts is None:
        raise ValueError("sum-metric oracle rho needs dataset counts (T_p, T_n)")
    t_p, t_n = dataset_counts
    if t_p <= 0:
        raise ValueError("oracle rho undefined with no positive examples")
    return (cm.alpha_p * t_n) / (cm.alpha_n * t_p)


def observe_label(cm: CostModel, y: int) -> CostModel:
    """Fold one revealed label into the running Laplace estimate.

    A no-op in FIXED_ORACLE mode: fixed rho ignores the stream by design.
    """
    if cm.rho_mode != RhoMode.LAPLACE:
        return cm
    if y == 1:
        cm.seen_pos += 1
    else:
        cm.seen_neg += 1
    cm.rho = cm._laplace_rho()
    return cm
