"""Deterministic dataset generators and CIFAR-10 binary ingestion.

Generators are pure functions of their config (including the seed), so a
dataset is reproducible from its provenance record alone.  The
fine-grained generator places class centers on a regular simplex and fills
balls around them, which bounds the measured class separation from below
by construction; that makes slope-versus-separation experiments exact
rather than probabilistic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, IngestionError, ParameterError

__all__ = [
    "Dataset",
    "MoonsConfig",
    "FineGrainedConfig",
    "make_moons",
    "make_fine_grained",
    "load_cifar10",
    "write_cifar10_batch",
    "subsample",
    "scale_minmax",
    "export_csv",
]

CIFAR_RECORD_BYTES = 3073  # 1 label byte + 32*32*3 pixel bytes
CIFAR_PIXELS = 3072
CIFAR_CLASSES = 10
_TRAIN_BATCHES = tuple(f"data_batch_{i}.bin" for i in range(1, 6))
_TEST_BATCH = "test_batch.bin"


@dataclass
class Dataset:
    """Feature matrix with integer class labels and provenance."""

    features: np.ndarray  # (n_samples, n_dims) float64
    labels: np.ndarray  # (n_samples,) int64 in [0, n_classes)
    n_classes: int
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.features = np.ascontiguousarray(self.features, dtype=np.float64)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if self.labels.shape[0] != self.features.shape[0]:
            raise DataError(
                f"{self.labels.shape[0]} labels for {self.features.shape[0]} samples"
            )
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= self.n_classes):
            raise DataError(f"labels outside [0, {self.n_classes})")
        if not np.all(np.isfinite(self.features)):
            raise DataError("non-finite feature values")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_dims(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class MoonsConfig:
    n_per_class: int
    noise_sigma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n_per_class < 1:
            raise ParameterError("n_per_class must be >= 1")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma must be >= 0")


@dataclass(frozen=True)
class FineGrainedConfig:
    n_classes: int
    n_per_class: int
    n_dims: int
    separation: float
    within_radius: float
    seed: int = 0

    def __post_init__(self):
        if self.n_classes < 2:
            raise ParameterError("n_classes must be >= 2")
        if self.n_per_class < 1:
            raise ParameterError("n_per_class must be >= 1")
        if self.n_dims < 1:
            raise ParameterError("n_dims must be >= 1")
        if self.separation <= 0:
            raise ParameterError("separation must be > 0")
        if self.within_radius <= 0:
            raise ParameterError("within_radius must be > 0")
        if self.n_classes > self.n_dims + 1:
            raise ParameterError(
                f"cannot place {self.n_classes} simplex centers in {self.n_dims} dims "
                f"(need n_classes <= n_dims + 1)"
            )


def make_moons(config: MoonsConfig) -> Dataset:
    """Two interleaving half-circles with Gaussian coordinate noise.

    Class 0 sits at (cos t, sin t) and class 1 at (1 - cos t, 0.5 - sin t)
    for t on a uniform grid over [0, pi]; exactly n_per_class points each.
    """
    n = config.n_per_class
    theta = np.linspace(0.0, np.pi, n)
    upper = np.column_stack([np.cos(theta), np.sin(theta)])
    lower = np.column_stack([1.0 - np.cos(theta), 0.5 - np.sin(theta)])
    features = np.vstack([upper, lower])
    if config.noise_sigma > 0:
        rng = np.random.default_rng(config.seed)
        features = features + rng.normal(0.0, config.noise_sigma, size=features.shape)
    labels = np.repeat([0, 1], n)
    return Dataset(
        features=features,
        labels=labels,
        n_classes=2,
        provenance={"generator": "moons", "n_per_class": n,
                    "noise_sigma": config.noise_sigma, "seed": config.seed},
    )


def _simplex_vertices(k: int, dim: int) -> np.ndarray:
    """Regular k-simplex vertices with pairwise distance sqrt(2), embedded
    in the first k-1 of ``dim`` coordinates.

    Uses the Helmert basis of the hyperplane orthogonal to the ones vector,
    so the construction is closed-form and deterministic.
    """
    centered = np.eye(k) - 1.0 / k  # vertex i = e_i - centroid, in R^k
    helmert = np.zeros((k - 1, k))
    for j in range(1, k):
        helmert[j - 1, :j] = 1.0
        helmert[j - 1, j] = -j
        helmert[j - 1] /= np.sqrt(j * (j + 1.0))
    coords = centered @ helmert.T  # (k, k-1), pairwise distance sqrt(2)
    out = np.zeros((k, dim))
    out[:, : k - 1] = coords
    return out


def make_fine_grained(config: FineGrainedConfig) -> Dataset:
    """Ball clusters on a regular simplex with controlled separation.

    Centers are spaced ``separation + 2 * within_radius`` apart and samples
    fill the balls uniformly, so the measured class separation is at least
    ``separation`` by construction.
    """
    k, d = config.n_classes, config.n_dims
    center_dist = config.separation + 2.0 * config.within_radius
    centers = _simplex_vertices(k, d) * (center_dist / np.sqrt(2.0))
    rng = np.random.default_rng(config.seed)
    n = config.n_per_class
    rows = []
    for c in range(k):
        direction = rng.normal(size=(n, d))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        radius = config.within_radius * rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / d)
        rows.append(centers[c] + direction * radius)
    features = np.vstack(rows)
    labels = np.repeat(np.arange(k), n)
    return Dataset(
        features=features,
        labels=labels,
        n_classes=k,
        provenance={"generator": "fine_grained", "n_classes": k, "n_per_class": n,
                    "n_dims": d, "separation": config.separation,
                    "within_radius": config.within_radius, "seed": config.seed},
    )


def _read_batch(path: str) -> tuple[np.ndarray, np.ndarray]:
    if not os.path.isfile(path):
        raise IngestionError(f"missing CIFAR-10 batch file: {path}")
    raw = np.fromfile(path, dtype=np.uint8)
    if raw.size == 0 or raw.size % CIFAR_RECORD_BYTES != 0:
        raise IngestionError(
            f"{path}: {raw.size} bytes is not a multiple of {CIFAR_RECORD_BYTES} "
            f"(truncated after byte {raw.size - raw.size % CIFAR_RECORD_BYTES})"
        )
    records = raw.reshape(-1, CIFAR_RECORD_BYTES)
    labels = records[:, 0]
    bad = np.nonzero(labels > CIFAR_CLASSES - 1)[0]
    if bad.size:
        idx = int(bad[0])
        raise IngestionError(
            f"{path}: label byte {int(labels[idx])} > 9 at record {idx} "
            f"(byte offset {idx * CIFAR_RECORD_BYTES})"
        )
    features = records[:, 1:].astype(np.float64) / 255.0
    return features, labels.astype(np.int64)


def load_cifar10(dir_path: str) -> tuple[Dataset, Dataset]:
    """Parse the standard binary batches into train and test datasets.

    Each 3073-byte record is a label byte followed by 1024 R, 1024 G and
    1024 B row-major pixel bytes; pixels are scaled to [0, 1] and kept in
    record order as a flat 3072-vector.
    """
    parts = [_read_batch(os.path.join(dir_path, name)) for name in _TRAIN_BATCHES]
    train = Dataset(
        features=np.vstack([p[0] for p in parts]),
        labels=np.concatenate([p[1] for p in parts]),
        n_classes=CIFAR_CLASSES,
        provenance={"source": "cifar10", "dir": dir_path, "split": "train"},
    )
    tf, tl = _read_batch(os.path.join(dir_path, _TEST_BATCH))
    test = Dataset(
        features=tf, labels=tl, n_classes=CIFAR_CLASSES,
        provenance={"source": "cifar10", "dir": dir_path, "split": "test"},
    )
    return train, test


def write_cifar10_batch(features: np.ndarray, labels: np.ndarray, path: str):
    """Serialize samples back to the 3073-byte binary record format.

    Inverse of the parse step: a parsed batch re-serializes to the exact
    input bytes.
    """
    features = np.asarray(features)
    if features.ndim != 2 or features.shape[1] != CIFAR_PIXELS:
        raise DataError(f"expected (n, {CIFAR_PIXELS}) features, got {features.shape}")
    pixels = np.rint(features * 255.0).astype(np.uint8)
    records = np.empty((features.shape[0], CIFAR_RECORD_BYTES), dtype=np.uint8)
    records[:, 0] = np.asarray(labels, dtype=np.uint8)
    records[:, 1:] = pixels
    records.tofile(path)


def subsample(dataset: Dataset, n_per_class: int, seed: int) -> Dataset:
    """Stratified deterministic subsample with exact class balance."""
    if n_per_class < 1:
        raise ParameterError("n_per_class must be >= 1")
    rng = np.random.default_rng(seed)
    keep = []
    for c in range(dataset.n_classes):
        idx = np.nonzero(dataset.labels == c)[0]
        if idx.size < n_per_class:
            raise DataError(
                f"class {c} has {idx.size} samples, need {n_per_class}"
            )
        keep.append(idx[rng.permutation(idx.size)[:n_per_class]])
    keep = np.concatenate(keep)
    return Dataset(
        features=dataset.features[keep],
        labels=dataset.labels[keep],
        n_classes=dataset.n_classes,
        provenance={"subsample_of": dataset.provenance,
                    "n_per_class": n_per_class, "seed": seed},
    )


def scale_minmax(dataset: Dataset) -> Dataset:
    """Per-feature min-max scaling to [0, 1]; constant features map to 0."""
    lo = dataset.features.min(axis=0)
    hi = dataset.features.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    return Dataset(
        features=(dataset.features - lo) / span,
        labels=dataset.labels.copy(),
        n_classes=dataset.n_classes,
        provenance={**dataset.provenance, "minmax_scaled": True},
    )


def export_csv(dataset: Dataset, path: str):
    """Write ``label,f0,f1,...`` rows, floats at 9 significant digits."""
    with open(path, "w") as fh:
        cols = ",".join(f"f{i}" for i in range(dataset.n_dims))
        fh.write(f"label,{cols}\n")
        for label, row in zip(dataset.labels, dataset.features):
            values = ",".join(format(v, ".9g") for v in row)
            fh.write(f"{label},{values}\n")
