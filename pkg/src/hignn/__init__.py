"""Heterophily-aware graph rewiring and two-channel graph convolution.

The library measures graph homophily, extracts per-node neighbor-label
distributions, rewires the graph by thresholded cosine similarity of
those distributions, predicts the rewired homophily in closed form (with
a Monte-Carlo check), and trains a fused two-channel node classifier over
the original and rewired graphs. The ``hignn`` command exposes everything
as batch subcommands.
"""

from .graph import (
    Graph,
    GraphError,
    NormalizedAdjacency,
    build_graph,
    normalize_adjacency,
    strip_self_loops_and_symmetrize,
    union_graph,
)
from .io import DataFormatError, Dataset, Split, load_dataset, save_dataset
from .homophily import (
    HeteroInfoMatrix,
    HomophilyReport,
    build_hi_adjacency,
    edge_homophily,
    hetero_info,
    homophily_improvement,
    homophily_report,
    node_homophily,
    sigma_bar,
)
from .theory import (
    McEstimate,
    TheoryParams,
    TheoryResult,
    closed_form_hhat,
    derivative_signs,
    mc_simulate_hhat,
    std_normal_cdf,
    sweep,
)
from .synth import SynthSpec, SynthesisError, effective_sigma, generate
from .nn import ModelConfig, TrainConfig, TrainResult, evaluate, hignn_forward, train
from .pipeline import (
    ExperimentConfig,
    PseudoLabels,
    RunResult,
    ablate,
    estimate_labels,
    hyperparam_sweep,
    run_hignn,
)
from .estimators import GCNNodeClassifier, HeterophilyRewirer, HiGNNClassifier

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphError",
    "NormalizedAdjacency",
    "build_graph",
    "normalize_adjacency",
    "strip_self_loops_and_symmetrize",
    "union_graph",
    "DataFormatError",
    "Dataset",
    "Split",
    "load_dataset",
    "save_dataset",
    "HeteroInfoMatrix",
    "HomophilyReport",
    "build_hi_adjacency",
    "edge_homophily",
    "hetero_info",
    "homophily_improvement",
    "homophily_report",
    "node_homophily",
    "sigma_bar",
    "McEstimate",
    "TheoryParams",
    "TheoryResult",
    "closed_form_hhat",
    "derivative_signs",
    "mc_simulate_hhat",
    "std_normal_cdf",
    "sweep",
    "SynthSpec",
    "SynthesisError",
    "effective_sigma",
    "generate",
    "ModelConfig",
    "TrainConfig",
    "TrainResult",
    "evaluate",
    "hignn_forward",
    "train",
    "ExperimentConfig",
    "PseudoLabels",
    "RunResult",
    "ablate",
    "estimate_labels",
    "hyperparam_sweep",
    "run_hignn",
    "GCNNodeClassifier",
    "HeterophilyRewirer",
    "HiGNNClassifier",
    "__version__",
]
