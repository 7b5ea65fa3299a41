"""Lipschitz constant estimation, contraction tests, and class separation.

The estimated constant of ``f`` over a closed interval is the supremum of
``|f'|`` there, which also bounds every secant slope; both estimators are
provided so one can cross-check the other.  Class separation measures the
smallest Euclidean distance between samples of different classes; half of
it is the slope recommendation for the piece-wise linear activations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import backends
from .activations import ActivationSpec, derivative, eval as af_value
from .errors import DataError, ParameterError

__all__ = [
    "LipschitzEstimate",
    "SeparationReport",
    "estimate_sup_derivative",
    "estimate_secant",
    "is_contraction",
    "class_separation",
    "DEFAULT_NEGATIVE_INTERVAL",
    "DEFAULT_GRID_POINTS",
]

# Finite stand-in for "the negative half-line": every family member's
# |f'| on x <= 0 is maximized near 0, so this is wide enough even for
# unusual parameters.
DEFAULT_NEGATIVE_INTERVAL = (-50.0, 0.0)
DEFAULT_GRID_POINTS = 100001


@dataclass(frozen=True)
class LipschitzEstimate:
    """Estimated sup of ``|f'|`` over ``interval``, with method metadata.

    ``grid_points`` is the grid size for the derivative method and the
    number of sampled pairs for the secant method.
    """

    af: ActivationSpec
    interval: tuple[float, float]
    l_hat: float
    method: str
    grid_points: int

    def to_dict(self) -> dict:
        return {
            "kind": self.af.kind,
            "params": self.af.params,
            "interval": list(self.interval),
            "grid_points": self.grid_points,
            "method": self.method,
            "l_hat": self.l_hat,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class SeparationReport:
    """Minimum cross-class distance ``c`` and the derived slope ``c/2``."""

    c: float
    recommended_l: float
    class_pair: tuple[int, int]


def _check_interval(lo: float, hi: float):
    if not (lo < hi):
        raise ParameterError(f"degenerate interval [{lo}, {hi}]")


def estimate_sup_derivative(
    af: ActivationSpec, interval: tuple[float, float],
    grid_points: int = DEFAULT_GRID_POINTS,
) -> LipschitzEstimate:
    """Max of ``|f'|`` over a uniform grid spanning ``interval``.

    The family's only corner is at x = 0.  When 0 is a grid point, the
    slope seen from inside the interval is used: the one-sided derivative
    at an endpoint, the larger of the two one-sided derivatives in the
    interior.  This makes the estimate the sup of secant slopes within
    the interval rather than an artifact of the corner convention.
    """
    lo, hi = float(interval[0]), float(interval[1])
    _check_interval(lo, hi)
    if grid_points < 2:
        raise ParameterError(f"grid_points must be >= 2, got {grid_points}")
    xs = np.linspace(lo, hi, grid_points)
    g = np.abs(derivative(af, xs))
    zero = xs == 0.0
    if np.any(zero):
        sides = []
        if lo < 0.0:
            sides.append(abs(derivative(af, 0.0, side="left")))
        if hi > 0.0:
            sides.append(abs(derivative(af, 0.0, side="right")))
        g[zero] = max(sides)
    return LipschitzEstimate(
        af=af,
        interval=(lo, hi),
        l_hat=float(np.max(g)),
        method="derivative_grid",
        grid_points=int(grid_points),
    )


def estimate_secant(
    af: ActivationSpec, interval: tuple[float, float], n_pairs: int, seed: int
) -> LipschitzEstimate:
    """Max secant slope ``|f(x_i) - f(x_j)| / |x_i - x_j|`` over random pairs."""
    lo, hi = float(interval[0]), float(interval[1])
    _check_interval(lo, hi)
    if n_pairs < 1:
        raise ParameterError(f"n_pairs must be >= 1, got {n_pairs}")
    rng = np.random.default_rng(seed)
    xi = rng.uniform(lo, hi, size=n_pairs)
    xj = rng.uniform(lo, hi, size=n_pairs)
    clash = xi == xj
    while np.any(clash):
        xj[clash] = rng.uniform(lo, hi, size=int(np.sum(clash)))
        clash = xi == xj
    slopes = np.abs(af_value(af, xi) - af_value(af, xj)) / np.abs(xi - xj)
    return LipschitzEstimate(
        af=af,
        interval=(lo, hi),
        l_hat=float(np.max(slopes)),
        method="secant_pairs",
        grid_points=int(n_pairs),
    )


def is_contraction(estimate: LipschitzEstimate) -> bool:
    """True iff the estimated constant satisfies 0 <= L < 1 (strict)."""
    return 0.0 <= estimate.l_hat < 1.0


def class_separation(dataset) -> SeparationReport:
    """Exhaustive cross-class nearest-pair scan of a dataset.

    Ties are broken deterministically: the first attaining pair in
    row-major pair order (smallest i, then smallest j) wins.
    """
    labels = np.asarray(dataset.labels)
    if np.unique(labels).size < 2:
        raise DataError("class_separation requires at least 2 classes")
    features = np.ascontiguousarray(dataset.features, dtype=np.float64)
    c, i, j = backends.min_cross_class(features, labels.astype(np.int64))
    return SeparationReport(
        c=float(c),
        recommended_l=float(c) / 2.0,
        class_pair=(int(labels[i]), int(labels[j])),
    )
