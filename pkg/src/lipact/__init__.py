"""Piece-wise linear activations with Lipschitz-derived slopes, a
Lipschitz-analysis toolkit, and a small trainable feed-forward network.

Hot elementwise kernels and the pairwise separation scan run on a
compiled extension when it is available; set ``LIPACT_BACKEND`` to
``python`` or ``compiled`` to force a backend (default ``auto``).
"""

__version__ = "0.1.0"

from .activations import (
    ActivationSpec,
    PiecewiseView,
    derivative,
    descriptor,
    eval,
    make_lstar_relu,
    parse_descriptor,
    piecewise_view,
)
from .backends import BACKEND_NAME
from .datasets import (
    Dataset,
    FineGrainedConfig,
    MoonsConfig,
    load_cifar10,
    make_fine_grained,
    make_moons,
    subsample,
)
from .errors import (
    DataError,
    DomainError,
    IngestionError,
    LipactError,
    ParameterError,
    ShapeError,
)
from .lipschitz import (
    LipschitzEstimate,
    SeparationReport,
    class_separation,
    estimate_secant,
    estimate_sup_derivative,
    is_contraction,
)
from .network import (
    Network,
    TrainConfig,
    TrainResult,
    adam_step,
    gradient_check,
    train,
)

__all__ = [
    "__version__",
    "BACKEND_NAME",
    "ActivationSpec",
    "PiecewiseView",
    "eval",
    "derivative",
    "piecewise_view",
    "make_lstar_relu",
    "parse_descriptor",
    "descriptor",
    "LipschitzEstimate",
    "SeparationReport",
    "estimate_sup_derivative",
    "estimate_secant",
    "is_contraction",
    "class_separation",
    "Dataset",
    "MoonsConfig",
    "FineGrainedConfig",
    "make_moons",
    "make_fine_grained",
    "load_cifar10",
    "subsample",
    "Network",
    "TrainConfig",
    "TrainResult",
    "train",
    "adam_step",
    "gradient_check",
    "LipactError",
    "ParameterError",
    "DomainError",
    "ShapeError",
    "DataError",
    "IngestionError",
]
