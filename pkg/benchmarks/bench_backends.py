"""Timing comparison of the compiled and pure-python backends.

Runs each activation kernel family over a large grid and the pairwise
class-separation scan over a mid-size dataset, reporting best-of-5 wall
times per backend.  Usage: python3 benchmarks/bench_backends.py [n]
"""

import sys
import time

import numpy as np

from lipact.backends import _ref

try:
    from lipact.backends import _fast
except ImportError:
    _fast = None

FAMILIES = [
    ("leaky(0.25)", _ref.LEAKY, 0.25, 0.0),
    ("explin(selu)", _ref.EXPLIN, 1.0507009873554805, 1.6732632423543772),
    ("swish(1)", _ref.SWISH, 1.0, 0.0),
    ("tanhmix(.1,.15)", _ref.TANHMIX, 0.1, 0.15),
]


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernels(n):
    rng = np.random.default_rng(0)
    x = rng.normal(scale=3.0, size=n)
    print(f"elementwise kernels, n={n}")
    header = f"{'kernel':<18}{'op':<6}{'python':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    for name, fam, p0, p1 in FAMILIES:
        for op, ref_fn, fast_fn in [
            ("eval", _ref.af_eval, _fast.af_eval if _fast else None),
            ("grad", _ref.af_grad, _fast.af_grad if _fast else None),
        ]:
            t_ref = best_of(lambda: ref_fn(fam, p0, p1, x))
            if fast_fn is None:
                print(f"{name:<18}{op:<6}{t_ref * 1e3:>10.2f}ms{'n/a':>12}{'':>10}")
                continue
            t_fast = best_of(lambda: fast_fn(fam, p0, p1, x))
            np.testing.assert_allclose(
                fast_fn(fam, p0, p1, x), ref_fn(fam, p0, p1, x), rtol=1e-12)
            print(f"{name:<18}{op:<6}{t_ref * 1e3:>10.2f}ms"
                  f"{t_fast * 1e3:>10.2f}ms{t_ref / t_fast:>9.1f}x")


def bench_separation(n):
    rng = np.random.default_rng(1)
    features = rng.normal(size=(n, 16))
    labels = rng.integers(0, 5, size=n)
    print(f"\npairwise class-separation scan, n={n} x 16, 5 classes")
    t_ref = best_of(lambda: _ref.min_cross_class(features, labels), repeats=3)
    line = f"{'pair scan':<24}{t_ref * 1e3:>10.2f}ms"
    if _fast is not None:
        t_fast = best_of(lambda: _fast.min_cross_class(features, labels), repeats=3)
        assert _fast.min_cross_class(features, labels) == _ref.min_cross_class(features, labels)
        line += f"{t_fast * 1e3:>10.2f}ms{t_ref / t_fast:>9.1f}x"
    print(line)


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_000
    if _fast is None:
        print("compiled backend not available; timing python backend only")
    bench_kernels(n)
    bench_separation(max(200, int(np.sqrt(n))))


if __name__ == "__main__":
    main()
