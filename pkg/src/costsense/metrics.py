"""Cost-sensitive performance accounting and empirical regret measurement.

Mistakes are tallied prequentially: the prediction is made before the label
is revealed, with ties (score = 0) counted as positive predictions.  The
weighted sum metric lives in [0, 1]; callers that want the percent scale
used in benchmark tables multiply by 100 at the reporting boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .losses import LossVariant, gradient_scale, loss


@dataclass
class ConfusionCounts:
    """Labels seen and mistakes made, split by class."""

    t_pos: int = 0
    t_neg: int = 0
    m_pos: int = 0
    m_neg: int = 0

    def record(self, predicted: int, truth: int) -> "ConfusionCounts":
        if truth == 1:
            self.t_pos += 1
            if predicted != 1:
                self.m_pos += 1
        else:
            self.t_neg += 1
            if predicted != -1:
                self.m_neg += 1
        return self

    def merge(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.t_pos + other.t_pos,
            self.t_neg + other.t_neg,
            self.m_pos + other.m_pos,
            self.m_neg + other.m_neg,
        )

    @property
    def sensitivity(self) -> float:
        if self.t_pos == 0:
            raise ZeroDivisionError("sensitivity undefined with no positive examples")
        return (self.t_pos - self.m_pos) / self.t_pos

    @property
    def specificity(self) -> float:
        if self.t_neg == 0:
            raise ZeroDivisionError("specificity undefined with no negative examples")
        return (self.t_neg - self.m_neg) / self.t_neg


def sum_metric(
    cc: ConfusionCounts, alpha_p: float, alpha_n: float, empty_class: str = "error"
) -> float:
    """alpha_p * sensitivity + alpha_n * specificity, in [0, 1].

    A class with zero examples makes its term undefined; by default that is
    an error, while ``empty_class="perfect"`` lets the missing class
    contribute its full weight.
    """
    if cc.t_pos == 0 or cc.t_neg == 0:
        if empty_class != "perfect":
            raise ValueError(
                "sum metric undefined: a class has no examples "
                "(pass empty_class='perfect' to count it as fully correct)"
            )
        sens = cc.sensitivity if cc.t_pos else 1.0
        spec = cc.specificity if cc.t_neg else 1.0
        return alpha_p * sens + alpha_n * spec
    return alpha_p * cc.sensitivity + alpha_n * cc.specificity


def cost_metric(cc: ConfusionCounts, c_p: float, c_n: float) -> float:
    """c_p * (positive mistakes) + c_n * (negative mistakes), in raw units."""
    return c_p * cc.m_pos + c_n * cc.m_neg


class RegretTrace:
    """Running learner loss against a fixed comparator's loss on the same stream."""

    def __init__(self):
        self.losses: list[float] = []
        self.comparator_losses: list[float] = []

    def record(self, loss_value: float) -> None:
        self.losses.append(float(loss_value))

    def record_comparator(self, loss_value: float) -> None:
        self.comparator_losses.append(float(loss_value))

    @property
    def cumulative_loss(self) -> float:
        return float(np.sum(self.losses))

    @property
    def comparator_loss(self) -> float:
        return float(np.sum(self.comparator_losses))

    def regret_series(self) -> np.ndarray:
        n = min(len(self.losses), len(self.comparator_losses))
        if n == 0:
            raise ValueError("empty trace")
        return np.cumsum(self.losses[:n]) - np.cumsum(self.comparator_losses[:n])


def stream_losses(
    w: np.ndarray, stream, rho: float, variant: LossVariant
) -> np.ndarray:
    """Per-round losses of a fixed weight vector over (positions, values, y) triples."""
    out = np.empty(len(stream))
    for i, (positions, values, y) in enumerate(stream):
        out[i] = loss(variant, float(w[positions] @ values), y, rho)
    return out


def fit_comparator(
    stream,
    d: int,
    rho: float,
    variant: LossVariant,
    epochs: int = 50,
    eta0: float = 1.0,
) -> np.ndarray:
    """Approximate best fixed weight vector in hindsight.

    Runs ``epochs`` sequential subgradient passes over the stream with step
    eta0/sqrt(k) on epoch k and returns the end-of-epoch iterate with the
    lowest total loss seen (the zero start included).  One epoch is exactly
    a constant-step cost-sensitive gradient pass.
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    variant = LossVariant(variant)
    w = np.zeros(d)
    best_w = w.copy()
    best_total = float(np.sum(stream_losses(w, stream, rho, variant)))
    for k in range(1, epochs + 1):
        eta_k = eta0 / np.sqrt(k)
        for positions, values, y in stream:
            l = loss(variant, float(w[positions] @ values), y, rho)
            a = gradient_scale(variant, y, rho, l)
            if a != 0.0:
                w[positions] -= eta_k * a * values
        total = float(np.sum(stream_losses(w, stream, rho, variant)))
        if total < best_total:
            best_total = total
            best_w = w.copy()
    return best_w


def regret_slope(trace_or_series) -> float:
    """Least-squares slope of log(max(regret_t, 1)) against log(t).

    Fitted over the second half of the series; needs at least 100 rounds and
    a positive regret somewhere in that tail.
    """
    if isinstance(trace_or_series, RegretTrace):
        series = trace_or_series.regret_series()
    else:
        series = np.asarray(trace_or_series, dtype=np.float64)
    n = series.size
    if n < 100:
        raise ValueError(f"need at least 100 rounds, got {n}")
    tail = slice(n // 2, n)
    t = np.arange(1, n + 1, dtype=np.float64)[tail]
    r = np.maximum(series[tail], 1.0)
    if not np.any(series[tail] > 0):
        raise ValueError("regret is nonpositive over the fitted tail")
    slope, _ = np.polyfit(np.log(t), np.log(r), 1)
    return float(slope)


def write_trace_csv(path, rows) -> None:
    """Per-round trace: ``round,cum_loss,mistakes_pos,mistakes_neg,sum,cost``.

    ``rows`` yields (round, cum_loss, m_pos, m_neg, sum_value, cost_value)
    tuples; numbers are written with full round-trip precision.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("round,cum_loss,mistakes_pos,mistakes_neg,sum,cost\n")
        for rnd, cum_loss, m_pos, m_neg, s, c in rows:
            fh.write(f"{rnd},{cum_loss!r},{m_pos},{m_neg},{s!r},{c!r}\n")
