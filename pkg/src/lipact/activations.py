"""Activation function family with explicit positive/negative decomposition.

Every supported function is described by an immutable :class:`ActivationSpec`
and evaluated through one of four shared kernels (piece-wise linear,
scaled exponential-linear, sigmoid-weighted linear, tanh-plus-linear), so
the whole family reduces to a (family, p0, p1) triple dispatched to the
selected backend.

Each function splits into a positive part ``p`` (first quadrant, detected
feature strength) and a negative part ``n`` (third quadrant, degree of the
feature's absence); :func:`piecewise_view` exposes that split and
``eval(f, x) == p(max(x, 0)) + n(min(x, 0))`` holds exactly because every
member satisfies ``f(0) == 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import backends
from .errors import DomainError, ParameterError

__all__ = [
    "ActivationSpec",
    "PiecewiseView",
    "KINDS",
    "SELU_SCALE",
    "SELU_SHAPE",
    "LEAKY_SLOPE",
    "eval",
    "derivative",
    "piecewise_view",
    "make_lstar_relu",
    "trainable_param_grad",
    "parse_descriptor",
    "descriptor",
]

# Canonical self-normalizing constants (fixed, never trainable).
SELU_SCALE = 1.0507009873554805
SELU_SHAPE = 1.6732632423543772

# The fixed small slope distinguishing LeakyReLU from the general
# slope-parameterized variant.
LEAKY_SLOPE = 0.01

KINDS = (
    "relu",
    "lrelu",
    "lstar",
    "elu",
    "selu",
    "swish",
    "pswish",
    "prelu",
    "tanhmix",
    "identity",
)

_SLOPE_KINDS = ("lrelu", "lstar", "prelu")
_BETA_KINDS = ("swish", "pswish")
_TRAINABLE = ("prelu", "pswish")


@dataclass(frozen=True)
class ActivationSpec:
    """One member of the closed activation family.

    Only the parameters relevant to ``kind`` may be set: ``alpha`` is the
    negative-domain slope of the leaky variants, ``beta`` scales the
    sigmoid factor of the swish variants, ``a``/``b`` parameterize the
    tanh-plus-linear negative branch.
    """

    kind: str
    alpha: float | None = None
    beta: float | None = None
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown activation kind {self.kind!r}")
        needed = {
            "alpha": self.kind in _SLOPE_KINDS,
            "beta": self.kind in _BETA_KINDS,
            "a": self.kind == "tanhmix",
            "b": self.kind == "tanhmix",
        }
        for name, required in needed.items():
            value = getattr(self, name)
            if required:
                if value is None:
                    raise ParameterError(f"{self.kind} requires parameter {name!r}")
                if not math.isfinite(value):
                    raise DomainError(f"{self.kind} parameter {name}={value!r} is not finite")
            elif value is not None:
                raise ParameterError(f"{self.kind} does not take parameter {name!r}")
        if self.kind in _SLOPE_KINDS and self.alpha < 0:
            raise ParameterError(
                f"negative slope alpha={self.alpha} leaves the third quadrant"
            )
        if self.kind == "lrelu" and self.alpha != LEAKY_SLOPE:
            raise ParameterError(f"lrelu slope is fixed at {LEAKY_SLOPE}")
        if self.kind == "tanhmix" and (self.a < 0 or self.b < 0):
            raise ParameterError("tanhmix requires a >= 0 and b >= 0")

    @property
    def trainable(self) -> bool:
        """Whether the spec's parameter is trained by gradient descent."""
        return self.kind in _TRAINABLE

    @property
    def trainable_value(self) -> float:
        if self.kind == "prelu":
            return self.alpha
        if self.kind == "pswish":
            return self.beta
        raise ParameterError(f"{self.kind} has no trainable parameter")

    def with_trainable_value(self, value: float) -> "ActivationSpec":
        """Copy of the spec carrying an updated trainable parameter."""
        if self.kind == "prelu":
            return replace(self, alpha=float(value))
        if self.kind == "pswish":
            return replace(self, beta=float(value))
        raise ParameterError(f"{self.kind} has no trainable parameter")

    @property
    def params(self) -> dict:
        """Parameter record for serialization (fixed constants included)."""
        if self.kind in _SLOPE_KINDS:
            return {"alpha": self.alpha}
        if self.kind in _BETA_KINDS:
            return {"beta": self.beta}
        if self.kind == "tanhmix":
            return {"a": self.a, "b": self.b}
        if self.kind == "selu":
            return {"scale": SELU_SCALE, "shape": SELU_SHAPE}
        return {}


@dataclass(frozen=True)
class PiecewiseView:
    """Positive/negative decomposition of an activation function.

    ``positive_part`` maps the first quadrant (nonnegative in, nonnegative
    out), ``negative_part`` the third.  Both accept scalars or arrays.
    """

    positive_part: Callable
    negative_part: Callable


def _family_params(af: ActivationSpec) -> tuple[int, float, float]:
    """Reduce a spec to its backend kernel triple."""
    kind = af.kind
    if kind == "relu":
        return backends.LEAKY, 0.0, 0.0
    if kind == "identity":
        return backends.LEAKY, 1.0, 0.0
    if kind in _SLOPE_KINDS:
        return backends.LEAKY, af.alpha, 0.0
    if kind == "elu":
        return backends.EXPLIN, 1.0, 1.0
    if kind == "selu":
        return backends.EXPLIN, SELU_SCALE, SELU_SHAPE
    if kind in _BETA_KINDS:
        return backends.SWISH, af.beta, 0.0
    return backends.TANHMIX, af.a, af.b


def _as_checked_array(x, what: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"non-finite {what}")
    return arr


def eval(af: ActivationSpec, x):
    """Evaluate ``f(x)``; scalar in, scalar out (arrays pass through)."""
    arr = _as_checked_array(x, "input to eval")
    family, p0, p1 = _family_params(af)
    out = backends.af_eval(family, p0, p1, arr)
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def _one_sided_at_zero(af: ActivationSpec, side: str) -> float:
    family, p0, p1 = _family_params(af)
    if family == backends.LEAKY:
        return 1.0 if side == "right" else p0
    if family == backends.EXPLIN:
        return p0 if side == "right" else p0 * p1
    if family == backends.SWISH:
        return 0.5
    return 1.0 if side == "right" else p0 + p1


def derivative(af: ActivationSpec, x, side: str = "right"):
    """Analytic ``f'(x)``.

    At the corner ``x == 0`` the one-sided derivative selected by ``side``
    is returned (right-hand by default); elsewhere ``side`` is ignored.
    """
    if side not in ("right", "left"):
        raise ParameterError(f"side must be 'left' or 'right', got {side!r}")
    arr = _as_checked_array(x, "input to derivative")
    family, p0, p1 = _family_params(af)
    out = backends.af_grad(family, p0, p1, arr)
    if side == "left":
        zero = arr == 0.0
        if np.any(zero):
            out = np.where(zero, _one_sided_at_zero(af, "left"), out)
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def trainable_param_grad(af: ActivationSpec, x):
    """Derivative of ``f(x)`` with respect to the spec's trained parameter."""
    arr = _as_checked_array(x, "input to trainable_param_grad")
    if af.kind == "prelu":
        return np.minimum(arr, 0.0)
    if af.kind == "pswish":
        # d/dbeta of x*sigmoid(beta*x) = x^2 * sigmoid'(beta*x)
        s = 0.5 * (1.0 + np.tanh(0.5 * af.beta * arr))
        return arr * arr * s * (1.0 - s)
    raise ParameterError(f"{af.kind} has no trainable parameter")


def piecewise_view(af: ActivationSpec) -> PiecewiseView:
    """Split ``af`` into its first- and third-quadrant pieces.

    For functions that are not natively piece-wise (the swish variants),
    the pieces are the restrictions of ``f`` to the two half-lines.
    """
    family, p0, p1 = _family_params(af)
    if family == backends.LEAKY:
        return PiecewiseView(
            positive_part=lambda y: np.maximum(y, 0.0),
            negative_part=lambda y: np.minimum(p0 * np.asarray(y, dtype=np.float64), 0.0),
        )
    if family == backends.EXPLIN:
        return PiecewiseView(
            positive_part=lambda y: p0 * np.maximum(y, 0.0),
            negative_part=lambda y: np.minimum(
                p0 * p1 * np.expm1(np.minimum(y, 0.0)), 0.0
            ),
        )
    if family == backends.SWISH:
        return PiecewiseView(
            positive_part=lambda y: backends.af_eval(
                backends.SWISH, p0, 0.0, np.maximum(np.asarray(y, dtype=np.float64), 0.0)
            ),
            negative_part=lambda y: backends.af_eval(
                backends.SWISH, p0, 0.0, np.minimum(np.asarray(y, dtype=np.float64), 0.0)
            ),
        )
    return PiecewiseView(
        positive_part=lambda y: np.maximum(y, 0.0),
        negative_part=lambda y: np.minimum(
            np.tanh(p0 * np.asarray(y, dtype=np.float64)) + p1 * np.asarray(y, dtype=np.float64),
            0.0,
        ),
    )


def make_lstar_relu(alpha: float) -> ActivationSpec:
    """Piece-wise linear spec: identity for x > 0, slope ``alpha`` below.

    ``alpha == 0`` behaves exactly like relu, ``alpha == 0.01`` like lrelu.
    """
    if not math.isfinite(alpha):
        raise DomainError(f"alpha={alpha!r} is not finite")
    if alpha < 0:
        raise ParameterError(f"negative slope alpha={alpha} leaves the third quadrant")
    return ActivationSpec("lstar", alpha=float(alpha))


def parse_descriptor(text: str) -> ActivationSpec:
    """Parse the textual form used by the CLI and config files.

    Grammar: ``relu``, ``lrelu``, ``lstar:<alpha>``, ``elu``, ``selu``,
    ``swish:<beta>``, ``pswish:<beta0>``, ``prelu:<alpha0>``,
    ``tanhmix:<a>:<b>``, ``identity``.  The parametric kinds fall back to
    their documented defaults when the parameter is omitted
    (swish/pswish 1.0, prelu 0.25).
    """
    parts = text.strip().split(":")
    kind, args = parts[0], parts[1:]
    try:
        values = [float(p) for p in args]
    except ValueError as exc:
        raise ParameterError(f"bad activation descriptor {text!r}: {exc}") from None
    try:
        if kind in ("relu", "elu", "selu", "identity"):
            if args:
                raise ParameterError(f"{kind} takes no parameters")
            return ActivationSpec(kind)
        if kind == "lrelu":
            if args:
                raise ParameterError("lrelu takes no parameters (slope fixed at 0.01)")
            return ActivationSpec("lrelu", alpha=LEAKY_SLOPE)
        if kind == "lstar":
            if len(args) != 1:
                raise ParameterError("lstar:<alpha> requires exactly one parameter")
            return ActivationSpec("lstar", alpha=values[0])
        if kind in ("swish", "pswish"):
            if len(args) > 1:
                raise ParameterError(f"{kind} takes at most one parameter")
            return ActivationSpec(kind, beta=values[0] if values else 1.0)
        if kind == "prelu":
            if len(args) > 1:
                raise ParameterError("prelu takes at most one parameter")
            return ActivationSpec("prelu", alpha=values[0] if values else 0.25)
        if kind == "tanhmix":
            if len(args) != 2:
                raise ParameterError("tanhmix:<a>:<b> requires exactly two parameters")
            return ActivationSpec("tanhmix", a=values[0], b=values[1])
    except ParameterError:
        raise
    raise ParameterError(f"unknown activation descriptor {text!r}")


def descriptor(af: ActivationSpec) -> str:
    """Canonical textual form; ``parse_descriptor`` round-trips it exactly."""
    if af.kind in ("relu", "lrelu", "elu", "selu", "identity"):
        return af.kind
    if af.kind == "lstar":
        return f"lstar:{af.alpha!r}"
    if af.kind in _BETA_KINDS:
        return f"{af.kind}:{af.beta!r}"
    if af.kind == "prelu":
        return f"prelu:{af.alpha!r}"
    return f"tanhmix:{af.a!r}:{af.b!r}"
