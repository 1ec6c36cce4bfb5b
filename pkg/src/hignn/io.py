"""Dataset container and file formats.

Formats (all UTF-8 text):
  * edges: one "src,dst" pair per line, 0-based indices; '#' starts a comment.
  * features: CSV, one row per node, real values; the row count defines the
    number of nodes.
  * labels: CSV "node_id,label"; every node must appear exactly once.
  * splits: JSON {"splits": [{"train": [...], "val": [...], "test": [...]}]}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError, build_graph

__all__ = [
    "Dataset",
    "Split",
    "DataFormatError",
    "load_dataset",
    "save_dataset",
    "read_edges",
    "write_edges",
    "read_splits",
    "write_splits",
]


class DataFormatError(ValueError):
    """Malformed input file; message names the file and line."""


@dataclass(frozen=True)
class Split:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray


@dataclass(frozen=True)
class Dataset:
    graph: Graph
    features: np.ndarray
    labels: np.ndarray
    n_classes: int
    splits: list[Split]

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])


def read_edges(path) -> np.ndarray:
    """Raw (possibly directed/duplicated) edge pairs from an edges file."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split(",")
            if len(parts) != 2:
                raise DataFormatError(
                    f"{path}:{lineno}: expected 'src,dst', got {line.strip()!r}"
                )
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise DataFormatError(
                    f"{path}:{lineno}: non-integer node index in {line.strip()!r}"
                ) from None
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64)


def write_edges(path, graph: Graph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in graph.edges:
            fh.write(f"{u},{v}\n")


def _read_features(path) -> np.ndarray:
    try:
        feats = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except Exception:
        # Slow path only to point at the offending line.
        with open(path, encoding="utf-8") as fh:
            width = None
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                parts = line.strip().split(",")
                if width is None:
                    width = len(parts)
                if len(parts) != width:
                    raise DataFormatError(
                        f"{path}:{lineno}: expected {width} values, got {len(parts)}"
                    )
                for p in parts:
                    try:
                        float(p)
                    except ValueError:
                        raise DataFormatError(
                            f"{path}:{lineno}: non-numeric value {p!r}"
                        ) from None
        raise DataFormatError(f"{path}: unreadable features file")
    if feats.size == 0:
        raise DataFormatError(f"{path}: empty features file")
    return feats


def _read_labels(path, n_nodes: int) -> np.ndarray:
    labels = np.full(n_nodes, -1, dtype=np.int64)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split(",")
            if len(parts) != 2:
                raise DataFormatError(
                    f"{path}:{lineno}: expected 'node_id,label', got {line.strip()!r}"
                )
            try:
                node, lab = int(parts[0]), int(parts[1])
            except ValueError:
                raise DataFormatError(
                    f"{path}:{lineno}: non-integer entry in {line.strip()!r}"
                ) from None
            if not 0 <= node < n_nodes:
                raise DataFormatError(
                    f"{path}:{lineno}: node {node} outside [0, {n_nodes})"
                )
            if lab < 0:
                raise DataFormatError(f"{path}:{lineno}: negative label {lab}")
            if labels[node] != -1:
                raise DataFormatError(
                    f"{path}:{lineno}: duplicate label assignment for node {node}"
                )
            labels[node] = lab
    missing = np.nonzero(labels < 0)[0]
    if missing.size:
        raise DataFormatError(f"{path}: no label for node {missing[0]}")
    return labels


def read_splits(path, n_nodes: int) -> list[Split]:
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(payload, dict) or "splits" not in payload:
        raise DataFormatError(f'{path}: expected an object with a "splits" key')
    splits = []
    for i, entry in enumerate(payload["splits"]):
        parts = {}
        for key in ("train", "val", "test"):
            if key not in entry:
                raise DataFormatError(f"{path}: split {i} is missing {key!r}")
            idx = np.asarray(entry[key], dtype=np.int64)
            if idx.size and (idx.min() < 0 or idx.max() >= n_nodes):
                raise DataFormatError(
                    f"{path}: split {i} {key!r} has an index outside [0, {n_nodes})"
                )
            parts[key] = idx
        combined = np.concatenate([parts["train"], parts["val"], parts["test"]])
        if len(np.unique(combined)) != combined.size:
            raise DataFormatError(f"{path}: split {i} has overlapping index sets")
        splits.append(Split(**parts))
    if not splits:
        raise DataFormatError(f"{path}: no splits defined")
    return splits


def write_splits(path, splits: list[Split]) -> None:
    payload = {
        "splits": [
            {
                "train": s.train.tolist(),
                "val": s.val.tolist(),
                "test": s.test.tolist(),
            }
            for s in splits
        ]
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_dataset(
    edges_path,
    features_path,
    labels_path,
    splits_path=None,
    n_classes: int | None = None,
) -> Dataset:
    """Load a dataset from the four files.

    The features file is the single source of truth for the node count;
    edges and labels must fit it. The class count defaults to
    max(label) + 1 and can be overridden for datasets where some class is
    absent from the file. ``splits_path`` may be None for metric-only
    work; the dataset then carries no splits and cannot be trained on.
    """
    features = _read_features(features_path)
    n = features.shape[0]
    raw = read_edges(edges_path)
    try:
        graph = build_graph(raw, n)
    except GraphError as exc:
        raise DataFormatError(f"{edges_path}: {exc}") from None
    labels = _read_labels(labels_path, n)
    c = int(labels.max()) + 1 if n_classes is None else int(n_classes)
    if labels.max() >= c:
        raise DataFormatError(
            f"{labels_path}: label {int(labels.max())} >= n_classes={c}"
        )
    splits = [] if splits_path is None else read_splits(splits_path, n)
    features.flags.writeable = False
    labels.flags.writeable = False
    return Dataset(graph=graph, features=features, labels=labels, n_classes=c, splits=splits)


def save_dataset(directory, dataset: Dataset) -> dict[str, str]:
    """Write a dataset into ``directory`` using the standard file names.

    Returns a mapping of role -> written path. Reloading the files yields
    an identical dataset.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "edges": directory / "edges.txt",
        "features": directory / "features.csv",
        "labels": directory / "labels.csv",
        "splits": directory / "splits.json",
    }
    write_edges(paths["edges"], dataset.graph)
    with open(paths["features"], "w", encoding="utf-8") as fh:
        for row in dataset.features:
            fh.write(",".join(repr(float(x)) for x in row))
            fh.write("\n")
    with open(paths["labels"], "w", encoding="utf-8") as fh:
        for node, lab in enumerate(dataset.labels):
            fh.write(f"{node},{lab}\n")
    write_splits(paths["splits"], dataset.splits)
    return {k: str(v) for k, v in paths.items()}
