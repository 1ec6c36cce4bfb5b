"""Scikit-learn style estimators over the graph models.

Transductive semi-supervised interface, following the sklearn
semi-supervised convention: ``y`` carries -1 for unlabeled nodes, and the
graph structure is passed to ``fit`` alongside the feature matrix.
``get_params``/``set_params`` come from BaseEstimator, so the classes slot
into grid searches and pipelines that treat the graph as a fit parameter.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._validation import as_graph, check_features, check_semi_labels, resolve_mask
from .graph import Graph, NormalizedAdjacency, normalize_adjacency
from .homophily import build_hi_adjacency, hetero_info
from .io import Split
from .nn import ModelConfig, TrainConfig, predict_proba, train

__all__ = ["GCNNodeClassifier", "HiGNNClassifier", "HeterophilyRewirer"]

_VAL_FRACTION = 0.25


def _train_val_split(labeled: np.ndarray, val_mask, n_nodes: int, seed: int):
    if val_mask is not None:
        val = resolve_mask(val_mask, n_nodes)
        train_idx = np.setdiff1d(labeled, val)
    else:
        rng = np.random.default_rng(seed)
        shuffled = rng.permutation(labeled)
        n_val = max(1, int(_VAL_FRACTION * labeled.size))
        if n_val >= labeled.size:
            raise ValueError("not enough labeled nodes to carve out validation")
        val = np.sort(shuffled[:n_val])
        train_idx = np.sort(shuffled[n_val:])
    if train_idx.size == 0 or val.size == 0:
        raise ValueError("train/validation split came out empty")
    return train_idx, val


class GCNNodeClassifier(BaseEstimator):
    """Transductive node classifier: graph convolution with early stopping.

    Parameters mirror the model and training configuration. ``fit`` takes
    the node feature matrix, semi-supervised labels (-1 = unlabeled), and
    the graph (a Graph or an edge array); it stores predictions for every
    node in ``transduction_``.
    """

    def __init__(
        self,
        hidden_dim: int = 16,
        n_layers: int = 2,
        use_high_pass: bool = False,
        dropout: float = 0.5,
        lr: float = 0.01,
        weight_decay: float = 5e-4,
        max_epochs: int = 2000,
        patience: int = 40,
        random_state: int = 0,
    ):
        self.hidden_dim = hidden_dim
        self.n_layers = n_layers
        self.use_high_pass = use_high_pass
        self.dropout = dropout
        self.lr = lr
        self.weight_decay = weight_decay
        self.max_epochs = max_epochs
        self.patience = patience
        self.random_state = random_state

    def _model_config(self, lam: float = 0.0) -> ModelConfig:
        return ModelConfig(
            hidden_dim=self.hidden_dim,
            n_layers=self.n_layers,
            lam=lam,
            use_high_pass=self.use_high_pass,
            dropout=self.dropout,
        )

    def _train_config(self) -> TrainConfig:
        return TrainConfig(
            lr=self.lr,
            weight_decay=self.weight_decay,
            max_epochs=self.max_epochs,
            patience=self.patience,
            seed=self.random_state,
        )

    def _adjacencies(self, X, y, graph):
        """Hook for subclasses that add a second channel."""
        a_hat = normalize_adjacency(self.graph_)
        return a_hat, None

    def fit(self, X, y, *, graph, val_mask=None):
        X = check_features(X)
        y = check_semi_labels(y, X.shape[0])
        self.graph_ = as_graph(graph, X.shape[0])
        labeled = np.nonzero(y >= 0)[0]
        train_idx, val_idx = _train_val_split(
            labeled, val_mask, X.shape[0], self.random_state
        )
        self.classes_ = np.arange(int(y[labeled].max()) + 1)
        split = Split(train=train_idx, val=val_idx, test=np.zeros(0, dtype=np.int64))
        a_hat, a_hat_new = self._adjacencies(X, y, graph)
        config = self._model_config(getattr(self, "lam", 0.0))
        result = train(X, y, a_hat, a_hat_new, split, config, self._train_config())
        proba = predict_proba(result.params, a_hat, a_hat_new, X, config)
        self.params_ = result.params
        self.proba_ = proba
        self.transduction_ = np.argmax(proba, axis=1).astype(np.int64)
        self.best_epoch_ = result.best_epoch
        self.val_acc_ = result.best_val_acc
        self.history_ = result.trace
        return self

    def _check_fitted(self):
        if not hasattr(self, "transduction_"):
            raise NotFittedError("call fit before predict")

    def predict(self, indices=None) -> np.ndarray:
        """Predicted labels for ``indices`` (all nodes when None)."""
        self._check_fitted()
        if indices is None:
            return self.transduction_.copy()
        return self.transduction_[np.asarray(indices, dtype=np.int64)]

    def predict_proba(self, indices=None) -> np.ndarray:
        self._check_fitted()
        if indices is None:
            return self.proba_.copy()
        return self.proba_[np.asarray(indices, dtype=np.int64)]

    def score(self, indices, y_true) -> float:
        pred = self.predict(indices)
        return float(np.mean(pred == np.asarray(y_true, dtype=np.int64)))


class HiGNNClassifier(GCNNodeClassifier):
    """Fused two-channel classifier with similarity rewiring.

    Before training, labels for every node are estimated by a
    single-channel model fit on the labeled nodes (ground truth kept where
    known); their neighbor-label distributions drive the similarity
    rewiring at ``delta``, and the fused model trains over the original
    and rewired adjacencies with fusion weight ``lam``.
    """

    def __init__(
        self,
        delta: float = 0.9,
        lam: float = 1.0,
        estimator: str = "gcn_hp",
        hidden_dim: int = 16,
        n_layers: int = 2,
        use_high_pass: bool = False,
        dropout: float = 0.5,
        lr: float = 0.01,
        weight_decay: float = 5e-4,
        max_epochs: int = 2000,
        patience: int = 40,
        random_state: int = 0,
    ):
        super().__init__(
            hidden_dim=hidden_dim,
            n_layers=n_layers,
            use_high_pass=use_high_pass,
            dropout=dropout,
            lr=lr,
            weight_decay=weight_decay,
            max_epochs=max_epochs,
            patience=patience,
            random_state=random_state,
        )
        self.delta = delta
        self.lam = lam
        self.estimator = estimator

    def _adjacencies(self, X, y, graph):
        if self.estimator not in ("gcn_hp", "gcn", "mlp"):
            raise ValueError(f"unknown label estimator {self.estimator!r}")
        labeled = np.nonzero(y >= 0)[0]
        train_idx, val_idx = _train_val_split(
            labeled, None, X.shape[0], self.random_state
        )
        split = Split(train=train_idx, val=val_idx, test=np.zeros(0, dtype=np.int64))
        if self.estimator == "mlp":
            est_adj = NormalizedAdjacency.identity(X.shape[0])
            est_cfg = self._model_config(0.0)
        else:
            est_adj = normalize_adjacency(self.graph_)
            est_cfg = ModelConfig(
                hidden_dim=self.hidden_dim,
                n_layers=self.n_layers,
                lam=0.0,
                use_high_pass=self.estimator == "gcn_hp",
                dropout=self.dropout,
            )
        est = train(X, y, est_adj, None, split, est_cfg, self._train_config())
        proba = predict_proba(est.params, est_adj, None, X, est_cfg)
        pseudo = np.argmax(proba, axis=1).astype(np.int64)
        pseudo[labeled] = y[labeled]
        self.pseudo_labels_ = pseudo
        c = int(pseudo.max()) + 1
        hetero = hetero_info(self.graph_, pseudo, c)
        self.rewired_graph_ = build_hi_adjacency(hetero, self.delta)
        a_hat = normalize_adjacency(self.graph_)
        a_hat_new = normalize_adjacency(self.rewired_graph_)
        return a_hat, a_hat_new


class HeterophilyRewirer(BaseEstimator, TransformerMixin):
    """Similarity rewiring as a transformer.

    ``fit(graph, y)`` measures neighbor-label distributions (labels must
    cover every node; use HiGNNClassifier when some are unknown);
    ``transform`` returns the rewired Graph connecting nodes whose
    distributions have cosine similarity at least ``delta``.
    """

    def __init__(self, delta: float = 0.9, n_classes: int | None = None):
        self.delta = delta
        self.n_classes = n_classes

    def fit(self, graph: Graph, y):
        if not isinstance(graph, Graph):
            raise ValueError("fit expects a Graph; build one with build_graph")
        y = np.asarray(y, dtype=np.int64)
        if y.shape != (graph.n_nodes,) or (y < 0).any():
            raise ValueError("y must assign a class to every node")
        c = int(y.max()) + 1 if self.n_classes is None else int(self.n_classes)
        self.hetero_info_ = hetero_info(graph, y, c)
        return self

    def transform(self, X=None) -> Graph:
        """Rewired Graph from the distributions measured at fit time.

        ``X`` is accepted for transformer-interface compatibility (pass the
        fitted graph or None); the output depends only on the fitted state.
        """
        if not hasattr(self, "hetero_info_"):
            raise NotFittedError("call fit before transform")
        return build_hi_adjacency(self.hetero_info_, self.delta)
