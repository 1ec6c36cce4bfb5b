"""Batch command-line frontend.

Every run writes its outputs plus a manifest.json (command line, resolved
configuration, seeds, output list, duration, versions) into a fresh run
directory under --out, named by a hash of the resolved configuration and
a timestamp. Output files never embed timestamps, so repeating a run with
the same configuration reproduces them byte for byte.

Errors exit with status 1 and a single line on stderr:
    error: usage: ...    bad flags or values
    error: io: ...       missing or malformed files
    error: config: ...   inconsistent configuration
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .graph import GraphError
from .homophily import (
    build_hi_adjacency,
    hetero_info,
    homophily_improvement,
    homophily_report,
)
from .io import (
    DataFormatError,
    Dataset,
    load_dataset,
    save_dataset,
    write_edges,
)
from .pipeline import (
    ESTIMATORS,
    SplitFailure,
    ExperimentConfig,
    _SplitWorkspace,
    ablate,
    estimate_labels,
    hyperparam_sweep,
    run_hignn,
    split_seed,
)
from .synth import SynthSpec, SynthesisError, generate
from .theory import TheoryParams, closed_form_hhat, mc_simulate_hhat, sweep

__all__ = ["main"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Argparse that reports usage problems as single-line errors."""

    def error(self, message):
        raise UsageError(message)


def _parse_grid(text: str) -> list[float]:
    """Grid syntax: 'a:b:s' (inclusive range) or comma-separated values."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} must be 'start:stop:step'")
        a, b, s = (float(p) for p in parts)
        if s <= 0:
            raise UsageError(f"grid step must be positive in {text!r}")
        n = int(round((b - a) / s))
        vals = [round(a + i * s, 12) for i in range(n + 1)]
        return [v for v in vals if v <= b + 1e-12]
    return [float(p) for p in text.split(",") if p.strip()]


def _dataset_args(p: _Parser, need_splits: bool = True):
    p.add_argument("--dataset-dir", help="directory with edges.txt, features.csv, labels.csv, splits.json")
    p.add_argument("--edges", help="edges file (overrides --dataset-dir)")
    p.add_argument("--features", help="features CSV")
    p.add_argument("--labels", help="labels CSV")
    p.add_argument("--splits", help="splits JSON" + ("" if need_splits else " (optional)"))
    p.add_argument("--n-classes", type=int, default=None, help="override class count")


def _load_dataset(args, need_splits: bool = True) -> Dataset:
    if args.dataset_dir:
        base = Path(args.dataset_dir)
        edges = args.edges or base / "edges.txt"
        features = args.features or base / "features.csv"
        labels = args.labels or base / "labels.csv"
        splits = args.splits or (base / "splits.json")
        if not need_splits and not Path(splits).exists():
            splits = None
    else:
        edges, features, labels, splits = args.edges, args.features, args.labels, args.splits
    missing = [n for n, v in (("--edges", edges), ("--features", features), ("--labels", labels)) if not v]
    if missing:
        raise UsageError(f"missing {', '.join(missing)} (or --dataset-dir)")
    if need_splits and not splits:
        raise UsageError("missing --splits (or --dataset-dir with splits.json)")
    return load_dataset(edges, features, labels, splits, n_classes=args.n_classes)


def _experiment_dataset(args, cfg: ExperimentConfig) -> Dataset:
    """Dataset files when given, else the config's generator spec."""
    if args.dataset_dir or args.edges:
        return _load_dataset(args)
    if cfg.synth is not None:
        return generate(cfg.synth)
    raise UsageError("provide --dataset-dir/--edges... or a config with a synth spec")


def _model_args(p: _Parser):
    p.add_argument("--hidden-dim", type=int, default=argparse.SUPPRESS)
    p.add_argument("--n-layers", type=int, default=argparse.SUPPRESS)
    p.add_argument("--use-high-pass", action="store_true", default=argparse.SUPPRESS)
    p.add_argument("--dropout", type=float, default=argparse.SUPPRESS)
    p.add_argument("--shared-fusion-weights", type=int, choices=(0, 1), default=argparse.SUPPRESS)


def _train_args(p: _Parser):
    p.add_argument("--lr", type=float, default=argparse.SUPPRESS)
    p.add_argument("--weight-decay", type=float, default=argparse.SUPPRESS)
    p.add_argument("--max-epochs", type=int, default=argparse.SUPPRESS)
    p.add_argument("--patience", type=int, default=argparse.SUPPRESS)


def _experiment_config(args) -> ExperimentConfig:
    """Config file first, then explicit flags on top of it."""
    payload = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{args.config}: invalid JSON ({exc})") from None
    base = ExperimentConfig.from_dict(payload) if payload else ExperimentConfig()
    model_fields = {
        k: getattr(args, k)
        for k in ("hidden_dim", "n_layers", "use_high_pass", "dropout")
        if hasattr(args, k)
    }
    if hasattr(args, "shared_fusion_weights"):
        model_fields["shared_fusion_weights"] = bool(args.shared_fusion_weights)
    if getattr(args, "lam", None) is not None:
        model_fields["lam"] = args.lam
    train_fields = {
        k: getattr(args, k)
        for k in ("lr", "weight_decay", "max_epochs", "patience")
        if hasattr(args, k)
    }
    top = {}
    if getattr(args, "estimator", None):
        top["estimator"] = args.estimator
    if getattr(args, "deltas", None):
        top["delta_grid"] = tuple(_parse_grid(args.deltas))
    if getattr(args, "lambdas", None):
        top["lambda_grid"] = tuple(_parse_grid(args.lambdas))
    if getattr(args, "split_id", None) is not None:
        top["split_ids"] = (args.split_id,)
    if getattr(args, "pure_predictions", False):
        top["pure_predictions"] = True
    if getattr(args, "seed", None) is not None:
        top["seed"] = args.seed
    cfg = base
    if model_fields:
        cfg = replace(cfg, model=replace(cfg.model, **model_fields))
    if train_fields:
        cfg = replace(cfg, train=replace(cfg.train, **train_fields))
    if top:
        cfg = replace(cfg, **top)
    return cfg


class _Run:
    """Run directory plus the manifest bookkeeping."""

    def __init__(self, args, command: str, config: dict):
        self.t0 = time.time()
        self.command = command
        self.config = config
        digest = hashlib.sha256(
            json.dumps(config, sort_keys=True, default=str).encode()
        ).hexdigest()[:12]
        stamp = time.strftime("%Y%m%d-%H%M%S")
        self.dir = Path(args.out) / f"{command}-{digest}-{stamp}"
        suffix = 0
        while self.dir.exists():
            suffix += 1
            self.dir = Path(args.out) / f"{command}-{digest}-{stamp}-{suffix}"
        self.dir.mkdir(parents=True)
        self.outputs: list[str] = []

    def path(self, name: str) -> Path:
        p = self.dir / name
        self.outputs.append(str(p))
        return p

    def write_csv(self, name: str, header: str, rows) -> Path:
        p = self.path(name)
        with open(p, "w", encoding="utf-8") as fh:
            fh.write(header + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        return p

    def write_json(self, name: str, payload) -> Path:
        p = self.path(name)
        with open(p, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2, default=str)
            fh.write("\n")
        return p

    def finish(self) -> Path:
        manifest = {
            "command_line": sys.argv,
            "subcommand": self.command,
            "config": self.config,
            "outputs": sorted(self.outputs),
            "duration_s": round(time.time() - self.t0, 3),
            "threads": os.environ.get("HIGNN_THREADS", "auto"),
            "versions": {
                "hignn": __version__,
                "numpy": np.__version__,
                "python": sys.version.split()[0],
            },
        }
        p = self.dir / "manifest.json"
        with open(p, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
            fh.write("\n")
        return self.dir


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _seed_of(args) -> int:
    return args.seed if args.seed is not None else 0


# ---------------------------------------------------------------- commands


def _cmd_analyze(args) -> int:
    ds = _load_dataset(args, need_splits=False)
    run = _Run(args, "analyze", {"n_classes": ds.n_classes, "seed": _seed_of(args)})
    rep = homophily_report(ds.graph, ds.labels)
    run.write_csv(
        "homophily.csv",
        "n_nodes,n_edges,n_classes,h_edge,h_node,n_nodes_counted",
        [
            (
                ds.n_nodes,
                rep.n_edges_counted,
                ds.n_classes,
                rep.h_edge,
                rep.h_node,
                rep.n_nodes_counted,
            )
        ],
    )
    print(f"h_edge={rep.h_edge:.4f} h_node={rep.h_node:.4f} -> {run.finish()}")
    return 0


def _cmd_theory_sweep(args) -> int:
    grids = {
        "h": _parse_grid(args.h_grid),
        "sigma": _parse_grid(args.sigma_grid),
        "delta": _parse_grid(args.delta_grid),
        "c": [int(c) for c in _parse_grid(args.c_grid)],
    }
    run = _Run(args, "theory-sweep", {"grids": grids, "seed": _seed_of(args)})
    rows = []
    for params, res in sweep(grids["h"], grids["sigma"], grids["delta"], grids["c"]):
        rows.append(
            (params.h, params.sigma, params.delta, params.c,
             res.t_plus, res.t_minus, res.p_intra, res.p_inter, res.h_hat)
        )
    run.write_csv(
        "theory_sweep.csv",
        "h,sigma,delta,c,t_plus,t_minus,p_intra,p_inter,h_hat",
        rows,
    )
    print(f"{len(rows)} rows -> {run.finish()}")
    return 0


def _cmd_simulate(args) -> int:
    params = TheoryParams(h=args.h, sigma=args.sigma, delta=args.delta, c=args.c)
    run = _Run(
        args,
        "simulate",
        {"h": args.h, "sigma": args.sigma, "delta": args.delta, "c": args.c,
         "pairs": args.pairs, "seed": _seed_of(args)},
    )
    res = closed_form_hhat(params)
    mc = mc_simulate_hhat(params, args.pairs, _seed_of(args))
    run.write_csv(
        "simulate.csv",
        "h,sigma,delta,c,t_plus,t_minus,p_intra,p_inter,h_hat,h_hat_mc,std_err,n_pairs,seed",
        [
            (params.h, params.sigma, params.delta, params.c,
             res.t_plus, res.t_minus, res.p_intra, res.p_inter, res.h_hat,
             mc.h_hat_mc, mc.std_err, mc.n_pairs, mc.seed)
        ],
    )
    print(
        f"h_hat={res.h_hat:.4f} h_hat_mc={mc.h_hat_mc:.4f} "
        f"|diff|={abs(res.h_hat - mc.h_hat_mc):.4f} -> {run.finish()}"
    )
    return 0


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        n_nodes=args.n_nodes,
        c=args.classes,
        h=args.h,
        avg_degree=args.avg_degree,
        feature_dim=args.feature_dim,
        feature_separation=args.feature_separation,
        seed=_seed_of(args),
    )
    run = _Run(args, "synth", {"spec": spec.__dict__})
    ds = generate(spec)
    paths = save_dataset(run.dir, ds)
    run.outputs.extend(paths.values())
    rep = homophily_report(ds.graph, ds.labels)
    run.write_json(
        "summary.json",
        {"n_nodes": ds.n_nodes, "n_edges": ds.graph.n_edges,
         "h_edge_measured": rep.h_edge, "h_node_measured": rep.h_node},
    )
    print(
        f"n={ds.n_nodes} edges={ds.graph.n_edges} h_edge={rep.h_edge:.4f} -> {run.finish()}"
    )
    return 0


def _cmd_build_adj(args) -> int:
    ds = _load_dataset(args, need_splits=args.labels_source == "predicted")
    deltas = _parse_grid(args.deltas)
    cfg = _experiment_config(args)
    run = _Run(
        args,
        "build-adj",
        {"deltas": deltas, "labels_source": args.labels_source,
         "estimator": cfg.estimator, "seed": cfg.seed},
    )
    if args.labels_source == "true":
        source_labels = ds.labels
    else:
        sid = cfg.split_ids[0] if cfg.split_ids else 0
        pseudo = estimate_labels(
            ds, sid, cfg.estimator, cfg.model,
            replace(cfg.train, seed=split_seed(cfg.seed, sid)),
            cfg.pure_predictions,
        )
        source_labels = pseudo.labels
    H = hetero_info(ds.graph, source_labels, ds.n_classes)
    rows = homophily_improvement(ds.graph, H, ds.labels, deltas)
    for row in rows:
        rewired = build_hi_adjacency(H, row.delta)
        write_edges(run.path(f"rewired_delta{row.delta:g}.edges"), rewired)
    run.write_csv(
        "improvement.csv",
        "delta,h_hat,h_hat_minus_h,sigma_bar",
        [(r.delta, r.h_hat, r.h_hat_minus_h, r.sigma_bar) for r in rows],
    )
    for r in rows:
        print(f"delta={r.delta:g} h_hat={r.h_hat:.4f} improvement={r.h_hat_minus_h:+.4f}")
    print(f"-> {run.finish()}")
    return 0


def _cmd_estimate_labels(args) -> int:
    cfg = _experiment_config(args)
    ds = _experiment_dataset(args, cfg)
    sid = cfg.split_ids[0] if cfg.split_ids else 0
    run = _Run(
        args,
        "estimate-labels",
        {"estimator": cfg.estimator, "split_id": sid, "seed": cfg.seed,
         "pure_predictions": cfg.pure_predictions},
    )
    pseudo = estimate_labels(
        ds, sid, cfg.estimator, cfg.model,
        replace(cfg.train, seed=split_seed(cfg.seed, sid)),
        cfg.pure_predictions,
    )
    run.write_csv(
        "pseudo_labels.csv",
        "node_id,label,confidence",
        [(i, int(lab), float(conf)) for i, (lab, conf) in enumerate(zip(pseudo.labels, pseudo.confidence))],
    )
    acc = float(np.mean(pseudo.labels == ds.labels))
    run.write_json(
        "estimator_report.json",
        {"estimator": pseudo.estimator, "split_id": pseudo.split_id,
         "train_overridden": pseudo.train_overridden, "all_node_accuracy": acc},
    )
    print(f"all-node accuracy={acc:.4f} -> {run.finish()}")
    return 0


def _cmd_train(args) -> int:
    cfg = _experiment_config(args)
    ds = _experiment_dataset(args, cfg)
    sid = cfg.split_ids[0] if cfg.split_ids else 0
    lam = cfg.model.lam
    delta = args.delta if args.delta is not None else cfg.delta_grid[0]
    run = _Run(
        args,
        "train",
        {"split_id": sid, "delta": delta, "lambda": lam,
         "estimator": cfg.estimator, "seed": cfg.seed,
         "model": cfg.model.__dict__, "train": cfg.train.__dict__},
    )
    cfg = replace(cfg, delta_grid=(delta,), lambda_grid=(lam,), split_ids=(sid,))
    ws = _SplitWorkspace(ds, cfg, sid)
    res = ws.cell(delta, lam)
    run.write_csv(
        "trace.csv",
        "epoch,train_loss,val_acc",
        [(r.epoch, r.train_loss, r.val_acc) for r in res.trace],
    )
    run.write_json(
        "result.json",
        {"test_acc": res.test_acc, "best_epoch": res.best_epoch, "seed": res.seed,
         "val_acc": res.best_val_acc, "delta": delta, "lambda": lam,
         "h_hat_true": ws.h_hat_true(delta) if lam != 0.0 else None},
    )
    print(
        f"val_acc={res.best_val_acc:.4f} test_acc={res.test_acc:.4f} "
        f"best_epoch={res.best_epoch} -> {run.finish()}"
    )
    return 0


def _cmd_ablate(args) -> int:
    cfg = _experiment_config(args)
    ds = _experiment_dataset(args, cfg)
    run = _Run(args, "ablate", cfg.to_dict())
    rows = ablate(ds, cfg)
    run.write_csv(
        "ablation.csv",
        "variant,mean_test_acc,std_test_acc",
        [(r.variant, r.mean_test_acc, r.std_test_acc) for r in rows],
    )
    run.write_json("ablation_details.json", [r.__dict__ for r in rows])
    for r in rows:
        print(f"{r.variant:>14}: {r.mean_test_acc:.4f} +- {r.std_test_acc:.4f}")
    print(f"-> {run.finish()}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _experiment_config(args)
    ds = _experiment_dataset(args, cfg)
    run = _Run(args, "sweep", cfg.to_dict())
    cells = hyperparam_sweep(ds, cfg)
    run.write_csv(
        "sweep.csv",
        "delta,lambda,val_acc,test_acc",
        [(c.delta, c.lam, c.val_acc, c.test_acc) for c in cells],
    )
    print(f"{len(cells)} cells -> {run.finish()}")
    return 0


def _cmd_run(args) -> int:
    cfg = _experiment_config(args)
    ds = _experiment_dataset(args, cfg)
    run = _Run(args, "run", cfg.to_dict())
    result = run_hignn(ds, cfg)
    run.write_csv(
        "splits.csv",
        "split_id,best_delta,best_lambda,val_acc,test_acc",
        [(o.split_id, o.best_delta, o.best_lambda, o.val_acc, o.test_acc) for o in result.splits],
    )
    run.write_json(
        "result.json",
        {"mean_test_acc": result.mean_test_acc, "std_test_acc": result.std_test_acc,
         "splits": [
             {"split_id": o.split_id, "best_delta": o.best_delta,
              "best_lambda": o.best_lambda, "val_acc": o.val_acc,
              "test_acc": o.test_acc, "h_hat_true": o.h_hat_true,
              "estimator": o.estimator}
             for o in result.splits
         ]},
    )
    print(
        f"test_acc={result.mean_test_acc:.4f} +- {result.std_test_acc:.4f} -> {run.finish()}"
    )
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="hignn", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, help_text, outputs):
        p = sub.add_parser(
            name,
            help=help_text,
            epilog="outputs: " + outputs,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.add_argument("--out", default="runs", help="output base directory")
        p.add_argument("--seed", type=int, default=None, help="default 0; flags beat --config")
        p.add_argument("--config", help="JSON experiment config; flags override it")
        return p

    p = add(
        "analyze", "homophily report for a dataset",
        "homophily.csv (n_nodes,n_edges,n_classes,h_edge,h_node,n_nodes_counted)",
    )
    _dataset_args(p, need_splits=False)
    p.set_defaults(func=_cmd_analyze)

    p = add(
        "theory-sweep", "closed-form prediction over parameter grids",
        "theory_sweep.csv (h,sigma,delta,c,t_plus,t_minus,p_intra,p_inter,h_hat)",
    )
    p.add_argument("--h-grid", default="0:1:0.05")
    p.add_argument("--sigma-grid", default="0.1")
    p.add_argument("--delta-grid", default="0.9")
    p.add_argument("--c-grid", default="5")
    p.set_defaults(func=_cmd_theory_sweep)

    p = add(
        "simulate", "Monte-Carlo estimate vs the closed form",
        "simulate.csv (theory-sweep columns + h_hat_mc,std_err,n_pairs,seed)",
    )
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--pairs", type=int, default=100000)
    p.set_defaults(func=_cmd_simulate)

    p = add(
        "synth", "generate a synthetic dataset",
        "edges.txt, features.csv, labels.csv, splits.json, summary.json",
    )
    p.add_argument("--n-nodes", type=int, default=2000)
    p.add_argument("--classes", type=int, default=5)
    p.add_argument("--h", type=float, default=0.5)
    p.add_argument("--avg-degree", type=float, default=20.0)
    p.add_argument("--feature-dim", type=int, default=32)
    p.add_argument("--feature-separation", type=float, default=4.0)
    p.set_defaults(func=_cmd_synth)

    p = add(
        "build-adj", "emit rewired adjacencies and the improvement table",
        "rewired_delta<d>.edges per threshold; improvement.csv "
        "(delta,h_hat,h_hat_minus_h,sigma_bar)",
    )
    _dataset_args(p, need_splits=False)
    p.add_argument("--deltas", default="0.5,0.8,0.9,1.0")
    p.add_argument("--labels-source", choices=("true", "predicted"), default="true")
    p.add_argument("--estimator", choices=ESTIMATORS, default=None)
    p.add_argument("--split-id", type=int, default=None)
    p.add_argument("--pure-predictions", action="store_true")
    _model_args(p)
    _train_args(p)
    p.set_defaults(func=_cmd_build_adj)

    p = add(
        "estimate-labels", "predict labels for every node",
        "pseudo_labels.csv (node_id,label,confidence); estimator_report.json",
    )
    _dataset_args(p)
    p.add_argument("--estimator", choices=ESTIMATORS, default=None)
    p.add_argument("--split-id", type=int, default=None)
    p.add_argument("--pure-predictions", action="store_true")
    _model_args(p)
    _train_args(p)
    p.set_defaults(func=_cmd_estimate_labels)

    p = add(
        "train", "single fused (or baseline) training run",
        "trace.csv (epoch,train_loss,val_acc); result.json (test_acc,best_epoch,seed,...)",
    )
    _dataset_args(p)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--lam", type=float, default=None, help="fusion weight; 0 = plain baseline")
    p.add_argument("--estimator", choices=ESTIMATORS, default=None)
    p.add_argument("--split-id", type=int, default=None)
    p.add_argument("--pure-predictions", action="store_true")
    _model_args(p)
    _train_args(p)
    p.set_defaults(func=_cmd_train)

    p = add(
        "run", "full workflow with grid selection across splits",
        "splits.csv (split_id,best_delta,best_lambda,val_acc,test_acc); result.json",
    )
    _dataset_args(p)
    p.add_argument("--deltas", default=None, help="delta grid")
    p.add_argument("--lambdas", default=None, help="lambda grid")
    p.add_argument("--estimator", choices=ESTIMATORS, default=None)
    p.add_argument("--pure-predictions", action="store_true")
    _model_args(p)
    _train_args(p)
    p.set_defaults(func=_cmd_run)

    p = add(
        "ablate", "channel ablation table",
        "ablation.csv (variant,mean_test_acc,std_test_acc); ablation_details.json",
    )
    _dataset_args(p)
    p.add_argument("--deltas", default=None)
    p.add_argument("--lambdas", default=None)
    p.add_argument("--estimator", choices=ESTIMATORS, default=None)
    p.add_argument("--pure-predictions", action="store_true")
    _model_args(p)
    _train_args(p)
    p.set_defaults(func=_cmd_ablate)

    p = add(
        "sweep", "threshold/fusion-weight grid sweep",
        "sweep.csv (delta,lambda,val_acc,test_acc)",
    )
    _dataset_args(p)
    p.add_argument("--deltas", default=None)
    p.add_argument("--lambdas", default=None)
    p.add_argument("--estimator", choices=ESTIMATORS, default=None)
    p.add_argument("--pure-predictions", action="store_true")
    _model_args(p)
    _train_args(p)
    p.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return 1
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1
    except (DataFormatError, GraphError) as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1
    except (SynthesisError, SplitFailure, ValueError, FloatingPointError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
