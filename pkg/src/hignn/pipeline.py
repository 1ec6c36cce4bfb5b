"""End-to-end workflow: estimate labels, rewire, train the fused model.

Per split: an estimator is trained on the labeled split and predicts
labels for every node; neighbor-label distributions measured from those
labels drive the similarity rewiring; the fused model trains on both the
original and the rewired adjacency. The threshold and fusion weight are
selected on validation accuracy over the configured grids, and test
accuracy is aggregated across splits.

All randomness derives from (config.seed, split_id), shared by every grid
cell of a split, so cells are paired and a lam == 0 cell is bit-identical
to the plain single-channel baseline.
"""

from __future__ import annotations

import warnings
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .graph import Graph, NormalizedAdjacency, normalize_adjacency, union_graph
from .homophily import HeteroInfoMatrix, build_hi_adjacency, edge_homophily, hetero_info
from .io import Dataset
from .nn import ModelConfig, TrainConfig, TrainResult, predict_proba, train
from .synth import SynthSpec

__all__ = [
    "ExperimentConfig",
    "PseudoLabels",
    "SplitOutcome",
    "RunResult",
    "AblationRow",
    "SweepCell",
    "SplitFailure",
    "ESTIMATORS",
    "split_seed",
    "estimate_labels",
    "run_hignn",
    "ablate",
    "hyperparam_sweep",
]

ESTIMATORS = ("gcn_hp", "gcn", "mlp", "true_labels")

DEFAULT_DELTA_GRID = (0.5, 0.8, 0.9, 1.0)
DEFAULT_LAMBDA_GRID = (1.0, 0.5, 0.1, 0.05, 0.01)


@dataclass(frozen=True)
class ExperimentConfig:
    estimator: str = "gcn_hp"
    delta_grid: tuple[float, ...] = DEFAULT_DELTA_GRID
    lambda_grid: tuple[float, ...] = DEFAULT_LAMBDA_GRID
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    split_ids: tuple[int, ...] | None = None
    seed: int = 0
    pure_predictions: bool = False
    synth: SynthSpec | None = None

    def __post_init__(self):
        if self.estimator not in ESTIMATORS:
            raise ValueError(
                f"estimator must be one of {ESTIMATORS}, got {self.estimator!r}"
            )
        if not self.delta_grid or not self.lambda_grid:
            raise ValueError("delta_grid and lambda_grid must be nonempty")
        for d in self.delta_grid:
            if not 0.0 <= d <= 1.0:
                raise ValueError(f"delta {d} outside [0, 1]")
        for lam in self.lambda_grid:
            if lam < 0.0:
                raise ValueError(f"lambda {lam} must be nonnegative")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["delta_grid"] = list(self.delta_grid)
        out["lambda_grid"] = list(self.lambda_grid)
        out["split_ids"] = None if self.split_ids is None else list(self.split_ids)
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        payload = dict(payload)
        if "model" in payload and isinstance(payload["model"], dict):
            payload["model"] = ModelConfig(**payload["model"])
        if "train" in payload and isinstance(payload["train"], dict):
            payload["train"] = TrainConfig(**payload["train"])
        if "synth" in payload and isinstance(payload["synth"], dict):
            payload["synth"] = SynthSpec(**payload["synth"])
        for key in ("delta_grid", "lambda_grid", "split_ids"):
            if key in payload and payload[key] is not None:
                payload[key] = tuple(payload[key])
        return cls(**payload)


@dataclass(frozen=True)
class PseudoLabels:
    labels: np.ndarray
    confidence: np.ndarray
    estimator: str
    split_id: int
    train_overridden: bool


def split_seed(seed: int, split_id: int) -> int:
    """Stable per-split seed mixing; every grid cell of a split shares it."""
    return int(np.random.SeedSequence([seed, split_id]).generate_state(1)[0])


def estimate_labels(
    dataset: Dataset,
    split_id: int,
    estimator: str,
    model_config: ModelConfig,
    train_config: TrainConfig,
    pure_predictions: bool = False,
) -> PseudoLabels:
    """Predicted labels for every node from a model fit on the train split.

    Estimators: 'gcn_hp' (convolution plus high-pass branch), 'gcn', 'mlp'
    (identity adjacency, so convolution degenerates to dense layers), and
    'true_labels' (bypass). Train-split nodes keep their ground-truth
    labels unless ``pure_predictions`` is set.
    """
    if estimator not in ESTIMATORS:
        raise ValueError(f"estimator must be one of {ESTIMATORS}, got {estimator!r}")
    split = dataset.splits[split_id]
    if estimator == "true_labels":
        return PseudoLabels(
            labels=dataset.labels.copy(),
            confidence=np.ones(dataset.n_nodes),
            estimator=estimator,
            split_id=split_id,
            train_overridden=False,
        )
    if estimator == "mlp":
        a_hat = NormalizedAdjacency.identity(dataset.n_nodes)
        cfg = replace(model_config, use_high_pass=False)
    else:
        a_hat = normalize_adjacency(dataset.graph)
        cfg = replace(model_config, use_high_pass=estimator == "gcn_hp")
    result = train(
        dataset.features, dataset.labels, a_hat, None, split, cfg, train_config
    )
    proba = predict_proba(result.params, a_hat, None, dataset.features, cfg)
    yhat = np.argmax(proba, axis=1).astype(np.int64)
    conf = proba.max(axis=1)
    overridden = False
    if not pure_predictions:
        yhat[split.train] = dataset.labels[split.train]
        conf[split.train] = 1.0
        overridden = True
    return PseudoLabels(
        labels=yhat,
        confidence=conf,
        estimator=estimator,
        split_id=split_id,
        train_overridden=overridden,
    )


@dataclass(frozen=True)
class SplitOutcome:
    split_id: int
    best_delta: float
    best_lambda: float
    val_acc: float
    test_acc: float
    h_hat_true: dict[float, float]
    estimator: str


@dataclass(frozen=True)
class RunResult:
    splits: list[SplitOutcome]
    mean_test_acc: float
    std_test_acc: float


class _SplitWorkspace:
    """Everything reusable within one split: pseudo-labels, rewired graphs,
    per-cell training results (cached so identical cells never retrain)."""

    def __init__(self, dataset: Dataset, config: ExperimentConfig, split_id: int):
        self.dataset = dataset
        self.config = config
        self.split_id = split_id
        self.seed = split_seed(config.seed, split_id)
        self.train_config = replace(config.train, seed=self.seed)
        self.pseudo = estimate_labels(
            dataset,
            split_id,
            config.estimator,
            config.model,
            self.train_config,
            config.pure_predictions,
        )
        self.hetero: HeteroInfoMatrix = hetero_info(
            dataset.graph, self.pseudo.labels, dataset.n_classes
        )
        self.a_hat = normalize_adjacency(dataset.graph)
        self._rewired: dict[float, Graph] = {}
        self._a_hat_new: dict[float, NormalizedAdjacency] = {}
        self._baseline: TrainResult | None = None
        self._cells: dict[tuple[float, float], TrainResult] = {}

    def rewired(self, delta: float) -> Graph:
        if delta not in self._rewired:
            self._rewired[delta] = build_hi_adjacency(self.hetero, delta)
        return self._rewired[delta]

    def a_hat_new(self, delta: float) -> NormalizedAdjacency:
        if delta not in self._a_hat_new:
            self._a_hat_new[delta] = normalize_adjacency(self.rewired(delta))
        return self._a_hat_new[delta]

    def h_hat_true(self, delta: float) -> float:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return edge_homophily(self.rewired(delta), self.dataset.labels)

    def baseline(self) -> TrainResult:
        """Single-channel run on the original adjacency (the lam == 0 cell)."""
        if self._baseline is None:
            self._baseline = train(
                self.dataset.features,
                self.dataset.labels,
                self.a_hat,
                None,
                self.dataset.splits[self.split_id],
                replace(self.config.model, lam=0.0),
                self.train_config,
            )
        return self._baseline

    def cell(self, delta: float, lam: float) -> TrainResult:
        if lam == 0.0:
            return self.baseline()
        key = (delta, lam)
        if key not in self._cells:
            self._cells[key] = train(
                self.dataset.features,
                self.dataset.labels,
                self.a_hat,
                self.a_hat_new(delta),
                self.dataset.splits[self.split_id],
                replace(self.config.model, lam=lam),
                self.train_config,
            )
        return self._cells[key]

    def single_channel(self, adjacency: NormalizedAdjacency) -> TrainResult:
        return train(
            self.dataset.features,
            self.dataset.labels,
            adjacency,
            None,
            self.dataset.splits[self.split_id],
            replace(self.config.model, lam=0.0),
            self.train_config,
        )


def _split_ids(dataset: Dataset, config: ExperimentConfig) -> list[int]:
    ids = (
        list(range(len(dataset.splits)))
        if config.split_ids is None
        else list(config.split_ids)
    )
    if not ids:
        raise ValueError("dataset has no splits to run")
    for s in ids:
        if not 0 <= s < len(dataset.splits):
            raise ValueError(f"split id {s} outside [0, {len(dataset.splits)})")
    return ids


class SplitFailure(RuntimeError):
    """A per-split job failed; the message names the split."""


@contextmanager
def _split_context(split_id: int):
    try:
        yield
    except (ValueError, FloatingPointError) as exc:
        raise SplitFailure(f"split {split_id} failed: {exc}") from exc


def _select_best(ws: _SplitWorkspace) -> tuple[float, float, TrainResult]:
    """Validation-selected (delta, lambda) cell; earliest grid cell wins ties."""
    best = None
    for delta in ws.config.delta_grid:
        for lam in ws.config.lambda_grid:
            res = ws.cell(delta, lam)
            if best is None or res.best_val_acc > best[2].best_val_acc:
                best = (delta, lam, res)
    return best


def run_hignn(dataset: Dataset, config: ExperimentConfig) -> RunResult:
    """Full workflow over the configured splits; see the module docstring."""
    outcomes = []
    for split_id in _split_ids(dataset, config):
        with _split_context(split_id):
            ws = _SplitWorkspace(dataset, config, split_id)
            delta, lam, res = _select_best(ws)
            outcomes.append(
                SplitOutcome(
                    split_id=split_id,
                    best_delta=delta,
                    best_lambda=lam,
                    val_acc=res.best_val_acc,
                    test_acc=res.test_acc,
                    h_hat_true={d: ws.h_hat_true(d) for d in config.delta_grid},
                    estimator=config.estimator,
                )
            )
    tests = np.array([o.test_acc for o in outcomes])
    return RunResult(
        splits=outcomes,
        mean_test_acc=float(tests.mean()),
        std_test_acc=float(tests.std()),
    )


ABLATION_VARIANTS = ("full", "without_a_new", "without_a", "early_fusion")


@dataclass(frozen=True)
class AblationRow:
    variant: str
    mean_test_acc: float
    std_test_acc: float
    per_split: list[dict]


def ablate(dataset: Dataset, config: ExperimentConfig) -> list[AblationRow]:
    """Channel ablations on identical splits and seeds.

    full: both channels, (delta, lambda) selected on validation.
    without_a_new: single channel on the original adjacency (the lam == 0
        run, reused bit-identically).
    without_a: single channel on the rewired adjacency, delta selected on
        validation.
    early_fusion: single channel on the edge-set union of the original and
        rewired graphs, delta selected on validation.
    """
    records = {v: [] for v in ABLATION_VARIANTS}
    for split_id in _split_ids(dataset, config):
        with _split_context(split_id):
            ws = _SplitWorkspace(dataset, config, split_id)
            delta, lam, full = _select_best(ws)
            records["full"].append(
                {"split_id": split_id, "delta": delta, "lambda": lam,
                 "val_acc": full.best_val_acc, "test_acc": full.test_acc}
            )
            base = ws.baseline()
            records["without_a_new"].append(
                {"split_id": split_id, "delta": None, "lambda": 0.0,
                 "val_acc": base.best_val_acc, "test_acc": base.test_acc}
            )
            for variant, adj_for in (
                ("without_a", ws.a_hat_new),
                ("early_fusion",
                 lambda d: normalize_adjacency(union_graph(dataset.graph, ws.rewired(d)))),
            ):
                best = None
                for d in config.delta_grid:
                    res = ws.single_channel(adj_for(d))
                    if best is None or res.best_val_acc > best[1].best_val_acc:
                        best = (d, res)
                d, res = best
                records[variant].append(
                    {"split_id": split_id, "delta": d, "lambda": None,
                     "val_acc": res.best_val_acc, "test_acc": res.test_acc}
                )
    rows = []
    for variant in ABLATION_VARIANTS:
        tests = np.array([r["test_acc"] for r in records[variant]])
        rows.append(
            AblationRow(
                variant=variant,
                mean_test_acc=float(tests.mean()),
                std_test_acc=float(tests.std()),
                per_split=records[variant],
            )
        )
    return rows


@dataclass(frozen=True)
class SweepCell:
    delta: float
    lam: float
    val_acc: float
    test_acc: float


def hyperparam_sweep(dataset: Dataset, config: ExperimentConfig) -> list[SweepCell]:
    """Cartesian (delta, lambda) sweep; accuracies are means over splits."""
    workspaces = []
    for split_id in _split_ids(dataset, config):
        with _split_context(split_id):
            workspaces.append(_SplitWorkspace(dataset, config, split_id))
    cells = []
    for delta in config.delta_grid:
        for lam in config.lambda_grid:
            results = []
            for ws in workspaces:
                with _split_context(ws.split_id):
                    results.append(ws.cell(delta, lam))
            vals = [r.best_val_acc for r in results]
            tests = [r.test_acc for r in results]
            cells.append(
                SweepCell(
                    delta=float(delta),
                    lam=float(lam),
                    val_acc=float(np.mean(vals)),
                    test_acc=float(np.mean(tests)),
                )
            )
    return cells
