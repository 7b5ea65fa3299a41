"""Desk-scale experiment harness: slope sweeps, matched-Lipschitz
comparisons, trainable-activation initialization sensitivity, and the
two-moons demonstration.

Every run is a pure function of its config.  Datasets are fixed by the
dataset spec (its own seed); per-run seeds drive only weight
initialization and batch shuffling, so repeated runs differ exactly the
way repeated trainings do.  Results sort by (slope, seed) before
emission, which makes output files byte-identical across invocations and
across worker counts.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import activations, datasets, network
from .activations import ActivationSpec
from .datasets import Dataset, FineGrainedConfig, MoonsConfig
from .errors import LipactError, ParameterError
from .lipschitz import DEFAULT_GRID_POINTS, DEFAULT_NEGATIVE_INTERVAL, estimate_sup_derivative
from .network import Network, TrainConfig

__all__ = [
    "SweepConfig",
    "SeedRun",
    "RunStats",
    "ParamStats",
    "aggregate",
    "slope_sweep",
    "matched_lipschitz",
    "prelu_sensitivity",
    "pswish_sensitivity",
    "two_moon_demo",
    "resolve_dataset_spec",
    "flatten_runs",
    "write_runs_csv",
    "write_loss_sidecar",
    "write_raster_csv",
    "CSV_HEADER",
]

DEFAULT_WIDTHS = (64, 64)
DEFAULT_SLOPES = (0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.7, 1.0)
DEFAULT_SEEDS = (1, 2, 3)
CSV_HEADER = "experiment,af,param,slope,seed,final_train_acc,final_test_acc"

MOON_GRID_X = (-1.5, 2.5)
MOON_GRID_Y = (-1.0, 1.5)
MOON_GRID_N = 200


@dataclass(frozen=True)
class SweepConfig:
    slopes: tuple
    seeds: tuple
    dataset_spec: object  # spec string or (train, test) Dataset pair
    net_widths: tuple = DEFAULT_WIDTHS
    train_config: TrainConfig = None

    def __post_init__(self):
        object.__setattr__(self, "slopes", tuple(float(s) for s in self.slopes))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "net_widths", tuple(int(w) for w in self.net_widths))
        if not self.slopes:
            raise ParameterError("slopes must be nonempty")
        if any(s < 0 for s in self.slopes):
            raise ParameterError("slopes must be >= 0")
        if any(b <= a for a, b in zip(self.slopes, self.slopes[1:])):
            raise ParameterError("slopes must be strictly increasing")
        if not self.seeds:
            raise ParameterError("seeds must be nonempty")
        if any(w < 1 for w in self.net_widths):
            raise ParameterError("net_widths must be positive")
        if self.train_config is None:
            raise ParameterError("train_config is required")


@dataclass(frozen=True)
class SeedRun:
    """One training run in CSV-row form.  ``accuracy`` is final test
    accuracy; ``param`` is the varied scalar for sensitivity experiments,
    ``slope`` the L* slope where one applies."""

    seed: int
    accuracy: float
    loss_curve: tuple
    train_accuracy: float
    af: str
    experiment: str
    slope: float | None = None
    param: float | None = None
    learned: tuple | None = None  # final per-layer trainable values


@dataclass(frozen=True)
class RunStats:
    mean_accuracy: float
    std_accuracy: float
    n_runs: int
    per_seed: tuple


@dataclass(frozen=True)
class ParamStats:
    """Across-seed stats of a learned activation parameter (layer values
    pooled)."""

    mean: float
    std: float
    per_seed: tuple  # (seed, per-layer values)


def _accuracy_of(run) -> float:
    if isinstance(run, tuple):
        return float(run[1])
    return float(run.accuracy)


def aggregate(per_seed) -> RunStats:
    """Mean and population standard deviation of run accuracies."""
    per_seed = tuple(per_seed)
    if not per_seed:
        raise ParameterError("cannot aggregate zero runs")
    accs = np.array([_accuracy_of(r) for r in per_seed])
    return RunStats(float(accs.mean()), float(accs.std()), len(per_seed), per_seed)


# dataset specs


def _parse_kv(body: str, caster: dict, spec: str) -> dict:
    out = {}
    if not body:
        return out
    for part in body.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise ParameterError(f"expected key=value in dataset spec {spec!r}")
        if key not in caster:
            raise ParameterError(f"unknown key {key!r} in dataset spec {spec!r}")
        try:
            out[key] = caster[key](value)
        except ValueError:
            raise ParameterError(f"bad value for {key!r} in dataset spec {spec!r}")
    return out


def resolve_dataset_spec(spec) -> tuple[Dataset, Dataset]:
    """Materialize a dataset spec into (train, test).

    Grammar: ``moons:sigma=<f>[,n=<i>][,seed=<i>]``;
    ``fg:c=<f>[,k=<i>][,dims=<i>][,n=<i>][,r=<f>][,seed=<i>]``;
    ``cifar10:dir=<path>[,per_class=<i>][,seed=<i>]``.
    Generated test splits use the data seed + 1 so train and test never
    share noise draws.  A (train, test) pair passes through unchanged.
    """
    if isinstance(spec, tuple) and len(spec) == 2:
        return spec
    if not isinstance(spec, str):
        raise ParameterError(f"unsupported dataset spec: {spec!r}")
    head, _, body = spec.partition(":")
    if head == "moons":
        kv = _parse_kv(body, {"sigma": float, "n": int, "seed": int}, spec)
        sigma = kv.get("sigma", 0.1)
        n = kv.get("n", 200)
        seed = kv.get("seed", 0)
        train = datasets.make_moons(MoonsConfig(n, sigma, seed))
        test = datasets.make_moons(MoonsConfig(n, sigma, seed + 1))
        return train, test
    if head == "fg":
        kv = _parse_kv(
            body,
            {"c": float, "k": int, "dims": int, "n": int, "r": float, "seed": int},
            spec,
        )
        if "c" not in kv:
            raise ParameterError(f"dataset spec {spec!r} requires c=<separation>")
        cfg = FineGrainedConfig(
            n_classes=kv.get("k", 5),
            n_per_class=kv.get("n", 200),
            n_dims=kv.get("dims", 8),
            separation=kv["c"],
            within_radius=kv.get("r", 0.25),
            seed=kv.get("seed", 0),
        )
        train = datasets.make_fine_grained(cfg)
        test = datasets.make_fine_grained(replace(cfg, seed=cfg.seed + 1))
        return train, test
    if head == "cifar10":
        kv = _parse_kv(body, {"dir": str, "per_class": int, "seed": int}, spec)
        if "dir" not in kv:
            raise ParameterError(f"dataset spec {spec!r} requires dir=<path>")
        train, test = datasets.load_cifar10(kv["dir"])
        if "per_class" in kv:
            train = datasets.subsample(train, kv["per_class"], kv.get("seed", 0))
        return train, test
    raise ParameterError(f"unknown dataset spec kind {head!r} (moons|fg|cifar10)")


# single runs


def _run_one(train_data: Dataset, test_data: Dataset, af: ActivationSpec,
             widths, train_config: TrainConfig, seed: int, experiment: str,
             slope=None, param=None) -> SeedRun:
    cfg = replace(train_config, seed=seed)
    net = Network([train_data.n_dims, *widths, train_data.n_classes], af)
    result = network.train(net, train_data, test_data, cfg)
    learned = None if result.learned_af_params is None else tuple(result.learned_af_params)
    return SeedRun(
        seed=seed,
        accuracy=result.final_test_accuracy,
        loss_curve=tuple(result.loss_curve),
        train_accuracy=result.final_train_accuracy,
        af=activations.descriptor(af),
        experiment=experiment,
        slope=slope,
        param=param,
        learned=learned,
    )


def _sweep_job(spec, slope, widths, train_config, seed):
    train_data, test_data = resolve_dataset_spec(spec)
    af = activations.make_lstar_relu(slope)
    return _run_one(train_data, test_data, af, widths, train_config, seed,
                    "slope_sweep", slope=slope)


def slope_sweep(config: SweepConfig, n_jobs: int = 1):
    """Train one LStarReLU(slope) network per (slope, seed).

    Returns ``[(slope, RunStats), ...]`` ordered by slope.  With
    ``n_jobs > 1`` the (slope, seed) jobs run in a process pool; the
    collected output is identical to the sequential scan.
    """
    jobs = [(slope, seed) for slope in config.slopes for seed in sorted(config.seeds)]
    results = {}
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            futures = {
                (slope, seed): pool.submit(_sweep_job, config.dataset_spec, slope,
                                           config.net_widths, config.train_config, seed)
                for slope, seed in jobs
            }
            for key, fut in futures.items():
                results[key] = _collect(fut.result, key)
    else:
        for slope, seed in jobs:
            results[(slope, seed)] = _collect(
                lambda: _sweep_job(config.dataset_spec, slope, config.net_widths,
                                   config.train_config, seed),
                (slope, seed),
            )
    out = []
    for slope in config.slopes:
        runs = [results[(slope, seed)] for seed in sorted(config.seeds)]
        out.append((slope, aggregate(runs)))
    return out


def _collect(thunk, key):
    slope, seed = key
    try:
        return thunk()
    except LipactError as exc:
        raise type(exc)(f"slope={format(slope, '.9g')} seed={seed}: {exc}") from exc


def matched_lipschitz(dataset_spec, alpha: float, a: float, b: float, seeds,
                      train_config: TrainConfig, net_widths=DEFAULT_WIDTHS):
    """Compare LStarReLU(alpha) against the tanh-plus-line function with
    the same negative-domain Lipschitz constant.

    The premise (sup derivative of the comparison function over the
    default negative interval equals alpha within 1e-3) is checked before
    any training; a mismatch reports both constants.
    """
    comparison = ActivationSpec("tanhmix", a=a, b=b)
    est = estimate_sup_derivative(comparison, DEFAULT_NEGATIVE_INTERVAL,
                                  DEFAULT_GRID_POINTS)
    if abs(est.l_hat - alpha) > 1e-3:
        raise ParameterError(
            f"Lipschitz mismatch: slope alpha={format(alpha, '.9g')} but "
            f"tanhmix({format(a, '.9g')},{format(b, '.9g')}) has "
            f"L={format(est.l_hat, '.9g')} over "
            f"[{est.interval[0]:g}, {est.interval[1]:g}]"
        )
    train_data, test_data = resolve_dataset_spec(dataset_spec)
    lstar = activations.make_lstar_relu(alpha)
    runs_l, runs_t = [], []
    for seed in sorted(int(s) for s in seeds):
        runs_l.append(_run_one(train_data, test_data, lstar, net_widths,
                               train_config, seed, "matched_lipschitz", slope=alpha))
        runs_t.append(_run_one(train_data, test_data, comparison, net_widths,
                               train_config, seed, "matched_lipschitz"))
    return aggregate(runs_l), aggregate(runs_t)


def _sensitivity(kind: str, dataset_spec, inits, seeds, train_config,
                 net_widths, experiment: str):
    inits = [float(v) for v in inits]
    if not inits:
        raise ParameterError("inits must be nonempty")
    train_data, test_data = resolve_dataset_spec(dataset_spec)
    out = []
    for init in inits:
        if kind == "prelu":
            af = ActivationSpec("prelu", alpha=init)
        else:
            af = ActivationSpec("pswish", beta=init)
        runs = [
            _run_one(train_data, test_data, af, net_widths, train_config,
                     seed, experiment, param=init)
            for seed in sorted(int(s) for s in seeds)
        ]
        values = np.concatenate([np.asarray(r.learned) for r in runs])
        stats = ParamStats(
            float(values.mean()), float(values.std()),
            tuple((r.seed, r.learned) for r in runs),
        )
        out.append((init, aggregate(runs), stats))
    return out


def prelu_sensitivity(dataset_spec, inits, seeds, train_config: TrainConfig,
                      net_widths=DEFAULT_WIDTHS):
    """Accuracy and learned-slope statistics per PReLU initialization."""
    return _sensitivity("prelu", dataset_spec, inits, seeds, train_config,
                        net_widths, "prelu_sensitivity")


def pswish_sensitivity(dataset_spec, inits, seeds, train_config: TrainConfig,
                       net_widths=DEFAULT_WIDTHS):
    """Accuracy and learned-beta statistics per PSwish initialization."""
    return _sensitivity("pswish", dataset_spec, inits, seeds, train_config,
                        net_widths, "pswish_sensitivity")


def two_moon_demo(noise_sigma: float, alpha: float, seeds,
                  train_config: TrainConfig, n_per_class: int = 200,
                  net_widths=DEFAULT_WIDTHS):
    """Slope-alpha line versus hard zero on the two-moons task.

    Trains matched nets per seed and rasterizes the decision rule of each
    activation's best seed over [-1.5, 2.5] x [-1.0, 1.5] (200 x 200).
    Returns (stats for LStarReLU(alpha), stats for ReLU, grids) where
    grids maps "lstar"/"relu" to integer class rasters plus the axes.
    """
    if alpha < 0:
        raise ParameterError("alpha must be >= 0")
    train_data = datasets.make_moons(MoonsConfig(n_per_class, noise_sigma, seed=0))
    test_data = datasets.make_moons(MoonsConfig(n_per_class, noise_sigma, seed=1))
    lstar = activations.make_lstar_relu(alpha)
    relu = ActivationSpec("relu")

    def run_all(af, slope):
        return [
            _run_one(train_data, test_data, af, net_widths, train_config,
                     seed, "two_moon_demo", slope=slope)
            for seed in sorted(int(s) for s in seeds)
        ]

    runs_l = run_all(lstar, alpha)
    runs_r = run_all(relu, None)

    xs = np.linspace(*MOON_GRID_X, MOON_GRID_N)
    ys = np.linspace(*MOON_GRID_Y, MOON_GRID_N)
    gx, gy = np.meshgrid(xs, ys)
    points = np.column_stack([gx.ravel(), gy.ravel()])

    def raster(af, runs):
        best = max(runs, key=lambda r: (r.accuracy, -r.seed))
        cfg = replace(train_config, seed=best.seed)
        net = Network([2, *net_widths, 2], af)
        network.train(net, train_data, test_data, cfg)
        return net.predict(points).reshape(MOON_GRID_N, MOON_GRID_N)

    grids = {
        "lstar": raster(lstar, runs_l),
        "relu": raster(relu, runs_r),
        "x": xs,
        "y": ys,
    }
    return aggregate(runs_l), aggregate(runs_r), grids


# emission


def flatten_runs(results) -> list[SeedRun]:
    """Pull SeedRun rows out of harness return values, sorted for emission.

    Accepts a list of (key, RunStats) pairs, a bare RunStats, a SeedRun
    list, or any mix nested one level deep.
    """
    runs = []

    def visit(obj):
        if isinstance(obj, SeedRun):
            runs.append(obj)
        elif isinstance(obj, RunStats):
            for r in obj.per_seed:
                visit(r)
        elif isinstance(obj, (list, tuple)):
            for item in obj:
                if isinstance(item, (SeedRun, RunStats, list, tuple)):
                    visit(item)

    visit(results)
    runs.sort(key=lambda r: (r.experiment, r.af,
                             -1.0 if r.slope is None else r.slope,
                             -1.0 if r.param is None else r.param, r.seed))
    return runs


def _fmt(value) -> str:
    if value is None:
        return ""
    return format(value, ".9g")


def write_runs_csv(path: str, runs):
    runs = flatten_runs(runs)
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in runs:
            fh.write(",".join([
                r.experiment, r.af, _fmt(r.param), _fmt(r.slope), str(r.seed),
                _fmt(r.train_accuracy), _fmt(r.accuracy),
            ]) + "\n")


def write_loss_sidecar(path: str, runs):
    """One JSON record per run: {"af", "slope", "seed", "loss"}."""
    runs = flatten_runs(runs)
    records = [
        {
            "af": r.af,
            "slope": None if r.slope is None else float(_fmt(r.slope)),
            "seed": r.seed,
            "loss": [float(_fmt(v)) for v in r.loss_curve],
        }
        for r in runs
    ]
    with open(path, "w") as fh:
        json.dump(records, fh, indent=1)
        fh.write("\n")


def write_raster_csv(path: str, grid: np.ndarray):
    grid = np.asarray(grid)
    with open(path, "w") as fh:
        for row in grid:
            fh.write(",".join(str(int(v)) for v in row) + "\n")
