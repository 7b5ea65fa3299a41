"""Pure-NumPy implementations of the hot kernels.

This is the fallback backend; ``lipact.backends._fast`` provides the same
three functions compiled with Cython.  Both backends must agree bit-for-bit
on the piece-wise linear family and to tight tolerance elsewhere, so every
formula here is written in the same evaluation order as the C loops.
"""

import numpy as np

# Kernel families.  Every supported activation maps onto one of these with
# two scalar parameters (see lipact.activations._family_params).
LEAKY = 0    # p0 = negative-domain slope
EXPLIN = 1   # p0 = output scale, p1 = exponential shape
SWISH = 2    # p0 = sigmoid scale
TANHMIX = 3  # p0 = tanh scale, p1 = linear slope

NAME = "python"


def _sigmoid(z):
    # Branch form: never evaluates exp on a positive argument.
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def af_eval(family: int, p0: float, p1: float, x: np.ndarray) -> np.ndarray:
    """Elementwise activation value for one kernel family."""
    if family == LEAKY:
        return np.where(x > 0, x, p0 * x)
    if family == EXPLIN:
        return np.where(x > 0, p0 * x, p0 * p1 * np.expm1(np.minimum(x, 0.0)))
    if family == SWISH:
        return x * _sigmoid(p0 * x)
    if family == TANHMIX:
        t = np.tanh(p0 * x) + p1 * x
        return np.maximum(x, 0.0) + np.minimum(t, 0.0)
    raise ValueError(f"unknown kernel family {family}")


def af_grad(family: int, p0: float, p1: float, x: np.ndarray) -> np.ndarray:
    """Elementwise derivative; at x == 0 the right-hand derivative."""
    if family == LEAKY:
        return np.where(x >= 0, 1.0, p0)
    if family == EXPLIN:
        return np.where(x >= 0, p0, p0 * p1 * np.exp(np.minimum(x, 0.0)))
    if family == SWISH:
        s = _sigmoid(p0 * x)
        return s + p0 * x * s * (1.0 - s)
    if family == TANHMIX:
        t = np.tanh(p0 * x)
        return np.where(x >= 0, 1.0, p0 * (1.0 - t * t) + p1)
    raise ValueError(f"unknown kernel family {family}")


def min_cross_class(features: np.ndarray, labels: np.ndarray):
    """Minimum Euclidean distance over all cross-class sample pairs.

    Returns ``(distance, i, j)`` with ``i < j`` the first pair (row-major
    pair order) attaining the minimum.  Squared distances are accumulated
    feature-by-feature so the result is bit-identical to a sequential
    double loop, whatever the feature count.
    """
    n, d = features.shape
    best = np.inf
    bi = bj = -1
    block = max(1, int(4e6) // max(n, 1))
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        acc = np.zeros((hi - lo, n))
        for k in range(d):
            diff = features[lo:hi, k, None] - features[None, :, k]
            acc += diff * diff
        # keep only cross-class pairs with global index i < j
        same = labels[lo:hi, None] == labels[None, :]
        acc[same] = np.inf
        rows = np.arange(lo, hi)[:, None]
        acc[rows >= np.arange(n)[None, :]] = np.inf
        flat = np.argmin(acc)
        val = acc.ravel()[flat]
        if val < best:
            best = val
            r, c = divmod(int(flat), n)
            bi, bj = lo + r, c
    return float(np.sqrt(best)), bi, bj
