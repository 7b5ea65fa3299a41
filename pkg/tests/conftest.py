"""Shared fixtures: one representative spec per activation kind."""

import numpy as np
import pytest

from lipact.activations import ActivationSpec

ALL_KINDS = [
    ActivationSpec("relu"),
    ActivationSpec("lrelu", alpha=0.01),
    ActivationSpec("lstar", alpha=0.25),
    ActivationSpec("elu"),
    ActivationSpec("selu"),
    ActivationSpec("swish", beta=1.0),
    ActivationSpec("pswish", beta=1.0),
    ActivationSpec("prelu", alpha=0.25),
    ActivationSpec("tanhmix", a=0.1, b=0.15),
    ActivationSpec("identity"),
]

# kinds whose derivative jumps at x=0; finite-difference oracles must
# stay away from the corner for these
PIECEWISE_KINDS = ("relu", "lrelu", "lstar", "prelu", "elu", "selu", "tanhmix")


@pytest.fixture(params=ALL_KINDS, ids=lambda af: af.kind)
def each_af(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_cifar_dir(root, records_per_file=10000, seed=99):
    """Write format-conformant binary batches with balanced labels.

    Five train files plus one test file, 3073-byte records, exactly
    records_per_file/10 samples of each class per file.
    """
    gen = np.random.default_rng(seed)
    root.mkdir(parents=True, exist_ok=True)
    per_class = records_per_file // 10
    for name in [f"data_batch_{i}.bin" for i in range(1, 6)] + ["test_batch.bin"]:
        labels = np.repeat(np.arange(10, dtype=np.uint8), per_class)
        gen.shuffle(labels)
        pixels = gen.integers(0, 256, size=(records_per_file, 3072), dtype=np.uint8)
        records = np.empty((records_per_file, 3073), dtype=np.uint8)
        records[:, 0] = labels
        records[:, 1:] = pixels
        records.tofile(str(root / name))
    return root
