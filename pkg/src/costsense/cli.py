"""Command-line entry point.

Example::

    costsense run --dataset datasets/german.numer --algo acog2 --metric sum \
        --permutations 20 --seed 0 --out german_acog2.csv
"""

from __future__ import annotations

import argparse
import sys

from .harness import ALGO_IDS, PAPER_ETA_GRID, ExperimentConfig, run_cv, run_experiment


def _parse_grid(text: str) -> tuple:
    try:
        grid = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad eta grid {text!r}") from None
    if not grid:
        raise argparse.ArgumentTypeError("eta grid must be nonempty")
    return grid


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="costsense",
        description="Cost-sensitive online classification benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment and emit a CSV report")
    run.add_argument("--dataset", required=True, help="LIBSVM-format data file")
    run.add_argument("--algo", required=True, choices=ALGO_IDS)
    run.add_argument("--loss", type=int, choices=(1, 2), default=None,
                     help="surrogate loss variant; must agree with the algo id")
    run.add_argument("--metric", choices=("sum", "cost"), default="sum")
    run.add_argument("--alpha-p", type=float, default=0.5)
    run.add_argument("--alpha-n", type=float, default=0.5)
    run.add_argument("--cp", type=float, default=0.9)
    run.add_argument("--cn", type=float, default=0.1)
    run.add_argument("--rho-mode", default="oracle",
                     help="oracle, laplace, or fixed:<value>")
    run.add_argument("--eta-grid", type=_parse_grid,
                     default=PAPER_ETA_GRID,
                     help="comma-separated step sizes (default 1e-5..1e5)")
    run.add_argument("--gamma", type=float, default=1.0)
    run.add_argument("--sketch-size", type=int, default=5)
    run.add_argument("--sketch-init", choices=("canonical", "random"),
                     default="canonical")
    run.add_argument("--sketch-lazy", type=int, default=1,
                     help="update the sketch only every K rounds")
    run.add_argument("--sketch-on-loss-only", action="store_true")
    run.add_argument("--update-rule", choices=("new", "old"), default="new")
    run.add_argument("--permutations", type=int, default=20)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--folds", type=int, default=0,
                     help="0 = online protocol; >= 2 = k-fold generalization mode")
    run.add_argument("--empty-class", choices=("error", "perfect"), default="error")
    run.add_argument("--d-override", type=int, default=None)
    run.add_argument("--out", default=None, help="CSV report path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.loss is not None:
        implied = 2 if args.algo.removesuffix("-diag").endswith("2") else 1
        if args.algo not in ("perceptron", "pa1") and args.loss != implied:
            print(
                f"error: --loss {args.loss} conflicts with --algo {args.algo}",
                file=sys.stderr,
            )
            return 2
    try:
        cfg = ExperimentConfig(
            dataset=args.dataset,
            algo=args.algo,
            metric=args.metric,
            alpha_p=args.alpha_p,
            alpha_n=args.alpha_n,
            c_p=args.cp,
            c_n=args.cn,
            rho_mode=args.rho_mode,
            eta_grid=args.eta_grid,
            gamma=args.gamma,
            sketch_size=args.sketch_size,
            sketch_init=args.sketch_init,
            sketch_lazy=args.sketch_lazy,
            sketch_on_loss_only=args.sketch_on_loss_only,
            update_rule=args.update_rule,
            permutations=args.permutations,
            seed=args.seed,
            folds=args.folds,
            out=args.out,
            empty_class=args.empty_class,
            d_override=args.d_override,
        )
        report = run_cv(cfg) if cfg.folds >= 2 else run_experiment(cfg)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    agg, std = report.aggregate, report.std
    mode = f"{cfg.folds}-fold CV" if cfg.folds >= 2 else f"{cfg.permutations} permutations"
    print(f"{cfg.algo} on {cfg.dataset} ({cfg.metric}, {mode}), eta={report.eta:g}")
    print(f"  sum         {agg['sum']:8.3f} +/- {std['sum']:.3f}")
    print(f"  cost        {agg['cost']:8.3f} +/- {std['cost']:.3f}")
    print(f"  sensitivity {agg['sensitivity']:8.3f} +/- {std['sensitivity']:.3f}")
    print(f"  specificity {agg['specificity']:8.3f} +/- {std['specificity']:.3f}")
    if cfg.out:
        print(f"  report written to {cfg.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
