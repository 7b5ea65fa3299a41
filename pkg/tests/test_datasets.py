"""Dataset generators, ingestion, subsampling, and CSV export."""

import numpy as np
import pytest

from lipact import datasets
from lipact.datasets import (
    Dataset,
    FineGrainedConfig,
    MoonsConfig,
    export_csv,
    load_cifar10,
    make_fine_grained,
    make_moons,
    scale_minmax,
    subsample,
    write_cifar10_batch,
)
from lipact.errors import DataError, IngestionError, ParameterError
from lipact.lipschitz import class_separation

from conftest import make_cifar_dir


def test_moons_parametric_form():
    ds = make_moons(MoonsConfig(n_per_class=50, noise_sigma=0.0, seed=0))
    np.testing.assert_allclose(ds.features[0], [1.0, 0.0], atol=1e-12)
    # class 1 starts at (1 - cos 0, 0.5 - sin 0) = (0, 0.5)
    np.testing.assert_allclose(ds.features[50], [0.0, 0.5], atol=1e-12)
    assert ds.n_classes == 2


def test_moons_counts_and_labels():
    ds = make_moons(MoonsConfig(n_per_class=37, noise_sigma=0.0, seed=0))
    assert ds.n_samples == 74
    np.testing.assert_array_equal(np.bincount(ds.labels), [37, 37])
    assert set(np.unique(ds.labels)) == {0, 1}


def test_moons_determinism():
    a = make_moons(MoonsConfig(100, 0.05, seed=11))
    b = make_moons(MoonsConfig(100, 0.05, seed=11))
    np.testing.assert_array_equal(a.features, b.features)
    c = make_moons(MoonsConfig(100, 0.05, seed=12))
    assert not np.array_equal(a.features, c.features)


def test_moons_radius_without_noise():
    ds = make_moons(MoonsConfig(200, 0.0, seed=0))
    upper = ds.features[ds.labels == 0]
    np.testing.assert_allclose(np.linalg.norm(upper, axis=1), 1.0, atol=1e-12)


def test_moons_config_validation():
    with pytest.raises(ParameterError):
        MoonsConfig(n_per_class=0)
    with pytest.raises(ParameterError):
        MoonsConfig(n_per_class=10, noise_sigma=-0.1)


def test_fine_grained_two_class_one_dim():
    cfg = FineGrainedConfig(n_classes=2, n_per_class=100, n_dims=1,
                            separation=1.0, within_radius=0.1, seed=0)
    ds = make_fine_grained(cfg)
    report = class_separation(ds)
    assert 0.98 <= report.c <= 1.2  # c in [separation, separation + 2r]
    centers = [ds.features[ds.labels == c].mean() for c in range(2)]
    np.testing.assert_allclose(abs(centers[0] - centers[1]), 1.2, atol=0.02)


def test_fine_grained_separation_bounds(rng):
    for trial in range(100):
        k = int(rng.integers(2, 6))
        dims = int(rng.integers(k - 1, k + 6))
        sep = float(rng.uniform(0.2, 5.0))
        r = float(rng.uniform(0.05, 1.0))
        cfg = FineGrainedConfig(n_classes=k, n_per_class=20, n_dims=dims,
                                separation=sep, within_radius=r,
                                seed=int(rng.integers(1 << 30)))
        report = class_separation(make_fine_grained(cfg))
        assert 0.95 * sep <= report.c <= sep + 2.0 * r


def test_fine_grained_small_radius_approaches_center_spacing():
    cfg = FineGrainedConfig(n_classes=3, n_per_class=50, n_dims=4,
                            separation=2.0, within_radius=1e-6, seed=5)
    report = class_separation(make_fine_grained(cfg))
    np.testing.assert_allclose(report.c, 2.0, atol=1e-4)


def test_fine_grained_determinism():
    cfg = FineGrainedConfig(5, 30, 8, 0.5, 0.25, seed=3)
    a = make_fine_grained(cfg)
    b = make_fine_grained(cfg)
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.labels, b.labels)


def test_fine_grained_infeasible_placement():
    with pytest.raises(ParameterError):
        FineGrainedConfig(n_classes=5, n_per_class=10, n_dims=3,
                          separation=1.0, within_radius=0.1, seed=0)


def test_fine_grained_config_validation():
    with pytest.raises(ParameterError):
        FineGrainedConfig(1, 10, 4, 1.0, 0.1, 0)
    with pytest.raises(ParameterError):
        FineGrainedConfig(2, 10, 4, 0.0, 0.1, 0)
    with pytest.raises(ParameterError):
        FineGrainedConfig(2, 10, 4, 1.0, -0.5, 0)


def test_dataset_validation():
    with pytest.raises(DataError):
        Dataset(features=np.zeros((3, 2)), labels=np.array([0, 1]), n_classes=2)
    with pytest.raises(DataError):
        Dataset(features=np.zeros((2, 2)), labels=np.array([0, 5]), n_classes=2)
    with pytest.raises(DataError):
        Dataset(features=np.array([[np.nan, 0.0]]), labels=np.array([0]),
                n_classes=1)


def test_cifar_load_counts(tmp_path):
    make_cifar_dir(tmp_path / "cifar", records_per_file=200)
    train, test = load_cifar10(str(tmp_path / "cifar"))
    assert train.n_samples == 1000 and train.n_dims == 3072
    assert test.n_samples == 200
    np.testing.assert_array_equal(np.bincount(train.labels), [100] * 10)
    assert train.features.min() >= 0.0 and train.features.max() <= 1.0


def test_cifar_round_trip_bytes(tmp_path):
    make_cifar_dir(tmp_path / "cifar", records_per_file=50)
    src = tmp_path / "cifar" / "data_batch_1.bin"
    raw = src.read_bytes()
    features, labels = datasets._read_batch(str(src))
    out = tmp_path / "rewritten.bin"
    write_cifar10_batch(features, labels, str(out))
    assert out.read_bytes() == raw


def test_cifar_all_zero_record(tmp_path):
    path = tmp_path / "zero.bin"
    path.write_bytes(bytes(3073))
    features, labels = datasets._read_batch(str(path))
    assert labels[0] == 0
    np.testing.assert_array_equal(features, np.zeros((1, 3072)))


def test_cifar_truncated_file(tmp_path):
    d = make_cifar_dir(tmp_path / "cifar", records_per_file=10)
    (d / "data_batch_2.bin").write_bytes(b"\x00" * 5000)
    with pytest.raises(IngestionError, match="data_batch_2.bin"):
        load_cifar10(str(d))


def test_cifar_missing_file(tmp_path):
    d = make_cifar_dir(tmp_path / "cifar", records_per_file=10)
    (d / "test_batch.bin").unlink()
    with pytest.raises(IngestionError, match="test_batch.bin"):
        load_cifar10(str(d))


def test_cifar_bad_label_byte(tmp_path):
    d = make_cifar_dir(tmp_path / "cifar", records_per_file=10)
    path = d / "data_batch_3.bin"
    raw = bytearray(path.read_bytes())
    raw[2 * 3073] = 11  # corrupt record 2's label
    path.write_bytes(bytes(raw))
    with pytest.raises(IngestionError, match="record 2"):
        load_cifar10(str(d))


def test_subsample_balance_and_determinism(rng):
    features = rng.normal(size=(120, 3))
    labels = np.repeat([0, 1, 2], 40)
    ds = Dataset(features=features, labels=labels, n_classes=3)
    sub = subsample(ds, 15, seed=4)
    assert sub.n_samples == 45
    np.testing.assert_array_equal(np.bincount(sub.labels), [15, 15, 15])
    again = subsample(ds, 15, seed=4)
    np.testing.assert_array_equal(sub.features, again.features)


def test_subsample_full_class_is_permutation(rng):
    features = rng.normal(size=(20, 2))
    labels = np.repeat([0, 1], 10)
    ds = Dataset(features=features, labels=labels, n_classes=2)
    sub = subsample(ds, 10, seed=0)
    assert sub.n_samples == 20
    original = {tuple(row) for row in features}
    assert {tuple(row) for row in sub.features} == original


def test_subsample_class_too_small():
    ds = Dataset(features=np.zeros((4, 1)), labels=np.array([0, 0, 0, 1]),
                 n_classes=2)
    with pytest.raises(DataError):
        subsample(ds, 2, seed=0)


def test_scale_minmax():
    ds = Dataset(features=np.array([[0.0, 5.0], [10.0, 5.0], [5.0, 5.0]]),
                 labels=np.array([0, 1, 0]), n_classes=2)
    scaled = scale_minmax(ds)
    np.testing.assert_allclose(scaled.features[:, 0], [0.0, 1.0, 0.5])
    np.testing.assert_array_equal(scaled.features[:, 1], [0.0, 0.0, 0.0])
    assert scaled.provenance["minmax_scaled"] is True


def test_export_csv_format(tmp_path):
    ds = Dataset(features=np.array([[1.0, 0.123456789123], [-2.5, 3.0]]),
                 labels=np.array([1, 0]), n_classes=2)
    path = tmp_path / "out.csv"
    export_csv(ds, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "label,f0,f1"
    assert lines[1] == "1,1,0.123456789"
    assert lines[2] == "0,-2.5,3"
