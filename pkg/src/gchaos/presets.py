"""The worked example systems, with their coefficients in one auditable place.

``ex33``  f(x) = -|x| on [-2, 2], generators g1, g2 and the identity phi.
``ex42``  identity dynamics on [-2, 2], generators g1, g2 and f (= identity).
``ex62``  identity dynamics on the circle, one rotation by a Fibonacci-ratio
          approximant of an irrational angle.
``tent``  tent map 1 - |1 - 2x| on [0, 1], trivial group.
``zigzag-z2``  odd three-piece map on [-1, 1] with the reflection x -> -x.
"""

from __future__ import annotations

from fractions import Fraction as F

from .group import IDENTITY, GeneratorSet, Rotation
from .gspace import CircleSpace, GSystem, IntervalSpace
from .plmap import from_pieces, identity

#: Fibonacci-ratio convergents of the golden angle, coarse to fine
EX62_ANGLES = (F(89, 144), F(987, 1597), F(6765, 10946))


def ex33() -> GSystem:
    f = from_pieces([(1, 0, 0), (-1, 0, 2)], -2, 2)
    g1 = from_pieces(
        [(F(2, 3), F(-2, 3), F(-1, 2)), (2, 0, 0), (1, 0, 2)],
        -2,
        2,
    )
    g2 = from_pieces([(-2, -2, F(-1, 2)), (F(-2, 5), F(-6, 5), 2)], -2, 2)
    phi = identity(-2, 2)
    gens = GeneratorSet.from_maps([("g1", g1), ("g2", g2), ("phi", phi)])
    return GSystem(IntervalSpace(-2, 2), f, gens, "ex33")


def ex42() -> GSystem:
    f = identity(-2, 2)
    g1 = from_pieces(
        [(1, 0, 0), (2, 0, F(1, 2)), (F(2, 3), F(2, 3), 2)],
        -2,
        2,
    )
    g2 = from_pieces([(F(-2, 5), F(6, 5), F(1, 2)), (-2, 2, 2)], -2, 2)
    gens = GeneratorSet.from_maps([("g1", g1), ("g2", g2), ("f", f)])
    return GSystem(IntervalSpace(-2, 2), f, gens, "ex42")


def ex62(angle: F = EX62_ANGLES[-1]) -> GSystem:
    gens = GeneratorSet.from_maps([("g", Rotation(angle))])
    name = "ex62" if angle == EX62_ANGLES[-1] else f"ex62:{angle.denominator}"
    return GSystem(CircleSpace(), IDENTITY, gens, name)


def tent() -> GSystem:
    f = from_pieces([(2, 0, F(1, 2)), (-2, 2, 1)], 0, 1)
    return GSystem(IntervalSpace(0, 1), f, GeneratorSet(), "tent")


def zigzag_z2() -> GSystem:
    f = from_pieces([(2, 2, F(-1, 2)), (-2, 0, F(1, 2)), (2, -2, 1)], -1, 1)
    sigma = from_pieces([(-1, 0, 1)], -1, 1)
    gens = GeneratorSet.from_maps([("sigma", sigma)])
    return GSystem(IntervalSpace(-1, 1), f, gens, "zigzag-z2")


PRESETS = {
    "ex33": ex33,
    "ex42": ex42,
    "ex62": ex62,
    "tent": tent,
    "zigzag-z2": zigzag_z2,
}
for _a in EX62_ANGLES:
    PRESETS[f"ex62:{_a.denominator}"] = lambda a=_a: ex62(a)


def load(name: str) -> GSystem:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
