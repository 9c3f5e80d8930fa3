"""Experiment orchestration: grid selection, permutation sweeps, CV, CSV output.

One experiment = pick a step size from the grid on dedicated selection
permutations, then evaluate the learner prequentially over ``permutations``
seeded shuffles of the dataset, reporting per-run and aggregate metrics.
Everything downstream of (config, base seed) is deterministic; elapsed-time
columns are the only environment-dependent output.

Reported ``sum``/``sensitivity``/``specificity`` are percentages; ``cost``
is in raw units.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .acog import AdaptiveCSGD
from .baselines import CostSensitiveGD, PassiveAggressiveI, Perceptron
from .data import Dataset, load_dataset, permutation, split_folds
from .losses import CostModel, LossVariant, Metric, RhoMode, observe_label, resolve_rho
from .metrics import ConfusionCounts, cost_metric, sum_metric
from .sacog import SketchedCSGD, SparseSketchedCSGD

ALGO_IDS = (
    "perceptron",
    "pa1",
    "cog1",
    "cog2",
    "acog1",
    "acog2",
    "acog1-diag",
    "acog2-diag",
    "sacog1",
    "sacog2",
    "ssacog1",
    "ssacog2",
)

# selection permutations draw seeds far above any sane evaluation seed range
SELECTION_SEED_OFFSET = 1_000_003

CSV_COLUMNS = (
    "run_id",
    "seed",
    "eta",
    "sum",
    "cost",
    "sensitivity",
    "specificity",
    "mistakes_pos",
    "mistakes_neg",
    "elapsed_ms",
)
CSV_STD_COLUMNS = (
    "sum_std",
    "cost_std",
    "sensitivity_std",
    "specificity_std",
    "mistakes_pos_std",
    "mistakes_neg_std",
    "elapsed_ms_std",
)

PAPER_ETA_GRID = tuple(10.0**k for k in range(-5, 6))


@dataclass
class ExperimentConfig:
    dataset: str | None = None
    algo: str = "acog2"
    metric: str = "sum"
    alpha_p: float = 0.5
    alpha_n: float = 0.5
    c_p: float = 0.9
    c_n: float = 0.1
    rho_mode: str = "oracle"  # "oracle", "laplace", or "fixed:<value>"
    eta_grid: tuple = PAPER_ETA_GRID
    gamma: float = 1.0
    sketch_size: int = 5
    sketch_init: str = "canonical"
    sketch_lazy: int = 1
    sketch_on_loss_only: bool = False
    update_rule: str = "new"
    permutations: int = 20
    seed: int = 0
    folds: int = 0
    out: str | None = None
    empty_class: str = "error"
    d_override: int | None = None
    selection_permutations: int = 3

    def __post_init__(self):
        if self.algo not in ALGO_IDS:
            raise ValueError(f"unknown algo {self.algo!r}; choose from {ALGO_IDS}")
        if not self.eta_grid:
            raise ValueError("eta grid must be nonempty")
        if self.permutations < 1:
            raise ValueError("permutations must be >= 1")
        if self.metric not in ("sum", "cost"):
            raise ValueError("metric must be 'sum' or 'cost'")
        mode = self.rho_mode
        if mode not in ("oracle", "laplace") and not mode.startswith("fixed:"):
            raise ValueError("rho_mode must be 'oracle', 'laplace', or 'fixed:<value>'")

    @property
    def loss_variant(self) -> LossVariant:
        stem = self.algo.removesuffix("-diag")
        return LossVariant.II if stem.endswith("2") else LossVariant.I


@dataclass
class RunTrace:
    """Per-round record of one run, enough to replay it against a comparator."""

    order: np.ndarray
    losses: list = field(default_factory=list)
    m_pos_series: list = field(default_factory=list)
    m_neg_series: list = field(default_factory=list)
    rho_final: float = 0.0


@dataclass
class RunReport:
    config: ExperimentConfig
    eta: float
    rows: list
    aggregate: dict
    std: dict


def make_learner(cfg: ExperimentConfig, d: int, eta: float):
    variant = cfg.loss_variant
    algo = cfg.algo
    if algo == "perceptron":
        return Perceptron(d)
    if algo == "pa1":
        # the grid value plays the role of the aggressiveness cap C
        return PassiveAggressiveI(d, C=eta)
    if algo in ("cog1", "cog2"):
        return CostSensitiveGD(d, eta, variant)
    if algo in ("acog1", "acog2", "acog1-diag", "acog2-diag"):
        return AdaptiveCSGD(
            d,
            eta,
            cfg.gamma,
            variant,
            diagonal=algo.endswith("-diag"),
            update_rule=cfg.update_rule,
        )
    cls = SketchedCSGD if algo.startswith("sacog") else SparseSketchedCSGD
    return cls(
        d,
        eta,
        cfg.gamma,
        m=cfg.sketch_size,
        variant=variant,
        sketch_init=cfg.sketch_init,
        seed=cfg.seed,
        sketch_every=cfg.sketch_lazy,
        sketch_on_loss_only=cfg.sketch_on_loss_only,
    )


def make_cost_model(cfg: ExperimentConfig, counts: tuple[int, int] | None) -> CostModel:
    metric = Metric.SUM if cfg.metric == "sum" else Metric.COST
    if cfg.rho_mode == "laplace":
        return CostModel(metric=metric, alpha_p=cfg.alpha_p, alpha_n=cfg.alpha_n,
                         c_p=cfg.c_p, c_n=cfg.c_n, rho_mode=RhoMode.LAPLACE)
    cm = CostModel(metric=metric, alpha_p=cfg.alpha_p, alpha_n=cfg.alpha_n,
                   c_p=cfg.c_p, c_n=cfg.c_n, rho_mode=RhoMode.FIXED_ORACLE)
    if cfg.rho_mode.startswith("fixed:"):
        cm.rho = float(cfg.rho_mode.split(":", 1)[1])
        if cm.rho <= 0:
            raise ValueError("fixed rho must be positive")
    else:
        cm.rho = resolve_rho(cm, counts)
    return cm


def run_single(
    cfg: ExperimentConfig,
    dataset: Dataset,
    eta: float,
    perm_seed: int,
    collect_trace: bool = False,
):
    """One prequential pass over a seeded permutation of the dataset.

    Returns a metrics row dict, plus a :class:`RunTrace` when requested.
    The revealed label joins the Laplace estimate before the update, so the
    update's rho always reflects every label seen so far.
    """
    order = permutation(len(dataset), perm_seed)
    learner = make_learner(cfg, dataset.d, eta)
    uses_rho = cfg.algo not in ("perceptron", "pa1")
    cm = make_cost_model(cfg, (dataset.t_pos, dataset.t_neg)) if uses_rho else None
    laplace = uses_rho and cm.rho_mode == RhoMode.LAPLACE
    cc = ConfusionCounts()
    trace = RunTrace(order=order) if collect_trace else None

    start = time.perf_counter()
    for i in order:
        e = dataset[i]
        positions, values, y = e.positions, e.values, e.label
        s = learner.score(positions, values)
        cc.record(1 if s >= 0.0 else -1, y)
        if laplace:
            observe_label(cm, y)
        l = learner.update(positions, values, y, cm.rho if uses_rho else None, score=s)
        if collect_trace:
            trace.losses.append(l)
            trace.m_pos_series.append(cc.m_pos)
            trace.m_neg_series.append(cc.m_neg)
    elapsed_ms = (time.perf_counter() - start) * 1e3

    row = {
        "seed": perm_seed,
        "eta": eta,
        "sum": 100.0 * sum_metric(cc, cfg.alpha_p, cfg.alpha_n, cfg.empty_class),
        "cost": cost_metric(cc, cfg.c_p, cfg.c_n),
        "sensitivity": 100.0 * cc.sensitivity,
        "specificity": 100.0 * cc.specificity,
        "mistakes_pos": cc.m_pos,
        "mistakes_neg": cc.m_neg,
        "elapsed_ms": elapsed_ms,
    }
    if collect_trace:
        trace.rho_final = cm.rho if uses_rho else 1.0
        return row, trace
    return row


def grid_select(cfg: ExperimentConfig, dataset: Dataset) -> float:
    """Best step size on the selection permutations; ties go to the smaller value.

    Selection seeds are disjoint from the evaluation seeds, so chosen
    hyperparameters never peek at evaluation shuffles.
    """
    grid = sorted(cfg.eta_grid)
    if len(grid) == 1:
        return grid[0]
    seeds = [cfg.seed + SELECTION_SEED_OFFSET + i for i in range(cfg.selection_permutations)]
    maximize = cfg.metric == "sum"
    best_eta, best_score = None, None
    for eta in grid:
        vals = [run_single(cfg, dataset, eta, s)[cfg.metric] for s in seeds]
        score = float(np.mean(vals))
        better = (
            best_score is None
            or (maximize and score > best_score)
            or (not maximize and score < best_score)
        )
        if better:
            best_eta, best_score = eta, score
    return best_eta


def aggregate_rows(rows: list) -> tuple[dict, dict]:
    """Mean and sample std per metric column, independent of row order."""
    rows = sorted(rows, key=lambda r: r["seed"])
    agg, std = {}, {}
    for key in ("sum", "cost", "sensitivity", "specificity",
                "mistakes_pos", "mistakes_neg", "elapsed_ms"):
        vals = np.array([r[key] for r in rows], dtype=np.float64)
        agg[key] = float(np.mean(vals))
        std[key] = float(np.std(vals, ddof=1)) if len(rows) > 1 else 0.0
    return agg, std


def run_experiment(cfg: ExperimentConfig, dataset: Dataset | None = None) -> RunReport:
    """Grid-select, then evaluate over ``permutations`` seeded runs."""
    if dataset is None:
        dataset = load_dataset(cfg.dataset, d_override=cfg.d_override)
    eta = grid_select(cfg, dataset)
    rows = [
        run_single(cfg, dataset, eta, cfg.seed + i) for i in range(cfg.permutations)
    ]
    agg, std = aggregate_rows(rows)
    report = RunReport(config=cfg, eta=eta, rows=rows, aggregate=agg, std=std)
    if cfg.out:
        emit_csv(report, cfg.out)
    return report


def run_cv(cfg: ExperimentConfig, dataset: Dataset | None = None) -> RunReport:
    """k-fold generalization mode: one online pass over the training folds,
    then frozen scoring of the held-out fold.

    The training stream for fold i is a single permutation seeded with
    ``seed + i``; oracle rho comes from the training portion's class counts.
    """
    if dataset is None:
        dataset = load_dataset(cfg.dataset, d_override=cfg.d_override)
    if cfg.folds < 2:
        raise ValueError("run_cv needs folds >= 2")
    eta = grid_select(cfg, dataset)
    folds = split_folds(dataset, cfg.folds, cfg.seed)
    rows = []
    for i, heldout in enumerate(folds):
        train_idx = np.concatenate([f for j, f in enumerate(folds) if j != i])
        t_pos = sum(1 for k in train_idx if dataset[k].label == 1)
        t_neg = len(train_idx) - t_pos
        learner = make_learner(cfg, dataset.d, eta)
        uses_rho = cfg.algo not in ("perceptron", "pa1")
        cm = make_cost_model(cfg, (t_pos, t_neg)) if uses_rho else None
        laplace = uses_rho and cm.rho_mode == RhoMode.LAPLACE

        start = time.perf_counter()
        for k in train_idx[permutation(len(train_idx), cfg.seed + i)]:
            e = dataset[k]
            if laplace:
                observe_label(cm, e.label)
            learner.update(
                e.positions, e.values, e.label, cm.rho if uses_rho else None
            )
        cc = ConfusionCounts()
        for k in heldout:
            e = dataset[k]
            _, pred = learner.predict(e.positions, e.values)
            cc.record(pred, e.label)
        elapsed_ms = (time.perf_counter() - start) * 1e3

        rows.append({
            "seed": cfg.seed + i,
            "eta": eta,
            "sum": 100.0 * sum_metric(cc, cfg.alpha_p, cfg.alpha_n, cfg.empty_class),
            "cost": cost_metric(cc, cfg.c_p, cfg.c_n),
            "sensitivity": 100.0 * cc.sensitivity,
            "specificity": 100.0 * cc.specificity,
            "mistakes_pos": cc.m_pos,
            "mistakes_neg": cc.m_neg,
            "elapsed_ms": elapsed_ms,
        })
    agg, std = aggregate_rows(rows)
    report = RunReport(config=cfg, eta=eta, rows=rows, aggregate=agg, std=std)
    if cfg.out:
        emit_csv(report, cfg.out)
    return report


def _cell(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def emit_csv(report: RunReport, path) -> None:
    """Header, one row per run, then an aggregate row with the std columns.

    Floats are written with shortest round-trip precision, so parsing the
    file reproduces the report's numbers exactly.
    """
    header = ",".join(CSV_COLUMNS + CSV_STD_COLUMNS)
    lines = [header]
    for run_id, row in enumerate(sorted(report.rows, key=lambda r: r["seed"])):
        cells = [str(run_id)] + [_cell(row[c]) for c in CSV_COLUMNS[1:]]
        cells += [""] * len(CSV_STD_COLUMNS)
        lines.append(",".join(cells))
    agg_cells = ["aggregate", "", _cell(report.eta)]
    agg_cells += [_cell(report.aggregate[c]) for c in CSV_COLUMNS[3:]]
    agg_cells += [_cell(report.std[c.removesuffix("_std")]) for c in CSV_STD_COLUMNS]
    lines.append(",".join(agg_cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
