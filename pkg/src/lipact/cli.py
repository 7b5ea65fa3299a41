"""Command-line front door.

Exit codes: 0 success, 2 usage error (unknown flag or subcommand), 1
runtime error (message names the failing module).  All randomness is
seed-controlled, so identical argv produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__, activations, datasets, experiments, lipschitz, network
from .errors import LipactError
from .experiments import SeedRun, SweepConfig
from .network import TrainConfig

__all__ = ["main", "build_parser"]


def _fmt(value) -> str:
    return format(value, ".9g")


def _ints(text: str):
    return tuple(int(v) for v in text.split(","))


def _floats(text: str):
    return tuple(float(v) for v in text.split(","))


def _add_train_flags(p: argparse.ArgumentParser, epochs: int = 40):
    p.add_argument("--epochs", type=int, default=epochs,
                   help=f"training epochs (default {epochs})")
    p.add_argument("--batch-size", type=int, default=32,
                   help="mini-batch size (default 32)")
    p.add_argument("--lr", type=float, default=1e-3,
                   help="Adam learning rate (default 1e-3)")
    p.add_argument("--l2", type=float, default=0.0,
                   help="decoupled weight decay (default 0)")


def _train_config(args, seed: int = 0) -> TrainConfig:
    return TrainConfig(epochs=args.epochs, batch_size=args.batch_size,
                       learning_rate=args.lr, l2=args.l2, seed=seed)


def _stats_line(tag: str, stats) -> str:
    return (f"{tag} mean={_fmt(stats.mean_accuracy)} "
            f"std={_fmt(stats.std_accuracy)} n={stats.n_runs}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lipact",
        description="Activation-function zoo, Lipschitz analysis, and "
                    "desk-scale training experiments.",
    )
    parser.add_argument("--version", action="version",
                        version=f"lipact {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("af-eval", help="evaluate an activation at a point")
    p.add_argument("--af", required=True, help="descriptor, e.g. lstar:0.25")
    p.add_argument("--x", type=float, required=True)
    p.set_defaults(func=_cmd_af_eval, module="afzoo")

    p = sub.add_parser("af-grad", help="analytic derivative at a point")
    p.add_argument("--af", required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--side", choices=("right", "left"), default="right",
                   help="one-sided derivative used at corner points")
    p.set_defaults(func=_cmd_af_grad, module="afzoo")

    p = sub.add_parser("lipschitz", help="estimate sup |f'| over an interval")
    p.add_argument("--af", required=True)
    p.add_argument("--lo", type=float, default=lipschitz.DEFAULT_NEGATIVE_INTERVAL[0])
    p.add_argument("--hi", type=float, default=lipschitz.DEFAULT_NEGATIVE_INTERVAL[1])
    p.add_argument("--grid", type=int, default=lipschitz.DEFAULT_GRID_POINTS,
                   help="grid points for the derivative scan")
    p.add_argument("--secant", type=int, metavar="N_PAIRS",
                   help="use N random secant pairs instead of the grid")
    p.add_argument("--seed", type=int, default=0, help="seed for --secant")
    p.add_argument("--out", help="write the JSON estimate record here")
    p.set_defaults(func=_cmd_lipschitz, module="lipschitz")

    p = sub.add_parser("separation",
                       help="minimum cross-class distance and slope c/2")
    p.add_argument("--data", required=True, help="dataset spec, e.g. fg:c=0.5")
    p.add_argument("--split", choices=("train", "test"), default="train")
    p.set_defaults(func=_cmd_separation, module="lipschitz")

    p = sub.add_parser("gen", help="generate a dataset and write it as CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--split", choices=("train", "test"), default="train")
    p.add_argument("--minmax", action="store_true",
                   help="apply per-feature min-max scaling")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen, module="data")

    p = sub.add_parser("train", help="train one network")
    p.add_argument("--data", required=True)
    p.add_argument("--af", default="relu")
    p.add_argument("--widths", type=_ints, default=experiments.DEFAULT_WIDTHS,
                   help="hidden widths, comma separated (default 64,64)")
    p.add_argument("--seed", type=int, default=0)
    _add_train_flags(p)
    p.add_argument("--out", help="write the trained checkpoint JSON here")
    p.add_argument("--losses", help="write the loss-curve sidecar here")
    p.set_defaults(func=_cmd_train, module="net")

    p = sub.add_parser("sweep", help="multi-seed slope sweep")
    p.add_argument("--data", required=True)
    p.add_argument("--slopes", type=_floats,
                   default=experiments.DEFAULT_SLOPES)
    p.add_argument("--seeds", type=_ints, default=experiments.DEFAULT_SEEDS)
    p.add_argument("--widths", type=_ints, default=experiments.DEFAULT_WIDTHS)
    _add_train_flags(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", help="write rows CSV here (default: print stats)")
    p.add_argument("--losses", help="write the loss-curve sidecar here")
    p.set_defaults(func=_cmd_sweep, module="harness")

    p = sub.add_parser("matched",
                       help="same-Lipschitz-constant comparison")
    p.add_argument("--data", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--seeds", type=_ints, default=experiments.DEFAULT_SEEDS)
    p.add_argument("--widths", type=_ints, default=experiments.DEFAULT_WIDTHS)
    _add_train_flags(p)
    p.add_argument("--out", help="write rows CSV here")
    p.set_defaults(func=_cmd_matched, module="harness")

    p = sub.add_parser("sensitivity",
                       help="trainable-activation initialization sensitivity")
    p.add_argument("--kind", choices=("prelu", "pswish"), required=True)
    p.add_argument("--inits", type=_floats, required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--seeds", type=_ints, default=experiments.DEFAULT_SEEDS)
    p.add_argument("--widths", type=_ints, default=experiments.DEFAULT_WIDTHS)
    _add_train_flags(p)
    p.add_argument("--out", help="write rows CSV here")
    p.set_defaults(func=_cmd_sensitivity, module="harness")

    p = sub.add_parser("moons-demo",
                       help="two-moons slope-vs-ReLU comparison")
    p.add_argument("--sigma", type=float, default=0.2)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--seeds", type=_ints, default=experiments.DEFAULT_SEEDS)
    p.add_argument("--widths", type=_ints, default=experiments.DEFAULT_WIDTHS)
    _add_train_flags(p)
    p.add_argument("--out", help="write rows CSV here")
    p.add_argument("--grids", metavar="PREFIX",
                   help="write decision rasters to PREFIXlstar_grid.csv "
                        "and PREFIXrelu_grid.csv")
    p.set_defaults(func=_cmd_moons_demo, module="harness")

    return parser


def _cmd_af_eval(args) -> int:
    af = activations.parse_descriptor(args.af)
    print(_fmt(activations.eval(af, args.x)))
    return 0


def _cmd_af_grad(args) -> int:
    af = activations.parse_descriptor(args.af)
    print(_fmt(activations.derivative(af, args.x, side=args.side)))
    return 0


def _cmd_lipschitz(args) -> int:
    af = activations.parse_descriptor(args.af)
    interval = (args.lo, args.hi)
    if args.secant is not None:
        est = lipschitz.estimate_secant(af, interval, args.secant, args.seed)
    else:
        est = lipschitz.estimate_sup_derivative(af, interval, args.grid)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(est.to_json() + "\n")
    print(_fmt(est.l_hat))
    return 0


def _cmd_separation(args) -> int:
    train, test = experiments.resolve_dataset_spec(args.data)
    report = lipschitz.class_separation(train if args.split == "train" else test)
    print(f"c={_fmt(report.c)} recommended_l={_fmt(report.recommended_l)} "
          f"classes={report.class_pair[0]},{report.class_pair[1]}")
    return 0


def _cmd_gen(args) -> int:
    train, test = experiments.resolve_dataset_spec(args.data)
    ds = train if args.split == "train" else test
    if args.minmax:
        ds = datasets.scale_minmax(ds)
    datasets.export_csv(ds, args.out)
    print(f"wrote {ds.n_samples} samples x {ds.n_dims} features to {args.out}")
    return 0


def _cmd_train(args) -> int:
    train_data, test_data = experiments.resolve_dataset_spec(args.data)
    af = activations.parse_descriptor(args.af)
    cfg = _train_config(args, seed=args.seed)
    net = network.Network(
        [train_data.n_dims, *args.widths, train_data.n_classes], af)
    result = network.train(net, train_data, test_data, cfg)
    if args.out:
        network.save_checkpoint(net, args.out)
    if args.losses:
        run = SeedRun(
            seed=args.seed, accuracy=result.final_test_accuracy,
            loss_curve=tuple(result.loss_curve),
            train_accuracy=result.final_train_accuracy,
            af=activations.descriptor(af), experiment="train",
        )
        experiments.write_loss_sidecar(args.losses, [run])
    line = f"train_acc={_fmt(result.final_train_accuracy)}"
    if result.final_test_accuracy is not None:
        line += f" test_acc={_fmt(result.final_test_accuracy)}"
    if result.learned_af_params is not None:
        values = ",".join(_fmt(v) for v in result.learned_af_params)
        line += f" af_params={values}"
    print(line)
    return 0


def _cmd_sweep(args) -> int:
    config = SweepConfig(slopes=args.slopes, seeds=args.seeds,
                         dataset_spec=args.data, net_widths=args.widths,
                         train_config=_train_config(args))
    results = experiments.slope_sweep(config, n_jobs=args.jobs)
    if args.out:
        experiments.write_runs_csv(args.out, results)
    if args.losses:
        experiments.write_loss_sidecar(args.losses, results)
    for slope, stats in results:
        print(_stats_line(f"slope={_fmt(slope)}", stats))
    return 0


def _cmd_matched(args) -> int:
    cfg = _train_config(args)
    stats_l, stats_t = experiments.matched_lipschitz(
        args.data, args.alpha, args.a, args.b, args.seeds, cfg,
        net_widths=args.widths)
    if args.out:
        experiments.write_runs_csv(args.out, [stats_l, stats_t])
    print(_stats_line(f"lstar:{_fmt(args.alpha)}", stats_l))
    print(_stats_line(f"tanhmix:{_fmt(args.a)}:{_fmt(args.b)}", stats_t))
    return 0


def _cmd_sensitivity(args) -> int:
    cfg = _train_config(args)
    fn = (experiments.prelu_sensitivity if args.kind == "prelu"
          else experiments.pswish_sensitivity)
    results = fn(args.data, args.inits, args.seeds, cfg, net_widths=args.widths)
    if args.out:
        experiments.write_runs_csv(args.out, [stats for _, stats, _ in results])
    for init, stats, pstats in results:
        print(_stats_line(f"init={_fmt(init)}", stats)
              + f" learned_mean={_fmt(pstats.mean)} learned_std={_fmt(pstats.std)}")
    return 0


def _cmd_moons_demo(args) -> int:
    cfg = _train_config(args)
    stats_l, stats_r, grids = experiments.two_moon_demo(
        args.sigma, args.alpha, args.seeds, cfg, net_widths=args.widths)
    if args.out:
        experiments.write_runs_csv(args.out, [stats_l, stats_r])
    if args.grids:
        experiments.write_raster_csv(args.grids + "lstar_grid.csv", grids["lstar"])
        experiments.write_raster_csv(args.grids + "relu_grid.csv", grids["relu"])
    print(_stats_line(f"lstar:{_fmt(args.alpha)}", stats_l))
    print(_stats_line("relu", stats_r))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.func(args)
    except LipactError as exc:
        print(f"error in {args.module}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error in {args.module}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
