"""Compiled vs pure-Python kernel timings on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 5]

Each workload is run on both backends; results are checked for equality
before timings are reported.
"""

from __future__ import annotations

import argparse
import timeit
from fractions import Fraction

from gchaos import _pykernels, presets
from gchaos.plmap import pl_power

try:
    from gchaos import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _nd(x):
    x = Fraction(x)
    return x.numerator, x.denominator


def workloads():
    tent = presets.tent().dynamics
    t10 = pl_power(tent, 10).packed
    t6 = pl_power(tent, 6).packed
    ex42 = presets.ex42()
    ball = [None if e.word == () else e.realized.packed for e in ex42.ball(6)]
    zig = presets.zigzag_z2().dynamics
    z8 = pl_power(zig, 8).packed
    probes = [_nd(Fraction(k, 997)) for k in range(997)]
    return {
        "compose tent^10 o tent^6": lambda k: k.compose(t10, t6, 10**7),
        "evaluate tent^10 at 997 points": lambda k: [k.evaluate(t10, n, d) for n, d in probes],
        "image zigzag^8 of 200 intervals": lambda k: [
            k.image(z8, *_nd(Fraction(-i, 201)), *_nd(Fraction(i, 201))) for i in range(1, 201)
        ],
        f"ball_extrema over ex42 radius-6 ball ({len(ball)} maps)": lambda k: k.ball_extrema(
            ball, *_nd(Fraction(1, 4)), *_nd(Fraction(3, 4))
        ),
        "canonicalize tent^10": lambda k: k.canonicalize(t10),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels unavailable; build with `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'workload':<52} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in workloads().items():
        if fn(_pykernels) != fn(_ckernels):
            raise SystemExit(f"backends disagree on {name!r}")
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<52} {py * 1e3:>10.2f} {cy * 1e3:>10.2f} {py / cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
