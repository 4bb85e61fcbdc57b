"""Exact piecewise-linear continuous self-maps of closed rational intervals.

A map is stored by interpolation: breakpoints ``t_0 < ... < t_k`` and values
``v_0, ..., v_k``; on ``[t_j, t_{j+1}]`` it is the affine segment joining
``(t_j, v_j)`` and ``(t_{j+1}, v_{j+1})``.  Continuity therefore holds by
construction.  All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

from . import kernels
from .errors import DomainError, NotInvertibleError, ParseError

Rational = Fraction
Interval = tuple  # (lo, hi) with lo <= hi, both Fraction
FixedItem = Union[Fraction, tuple]

#: default guard on breakpoints per map; compositions fail loudly past it
MAX_BREAKPOINTS = 100_000


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; refuse floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        try:
            if "." in s or "e" in s.lower():
                raise ValueError
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not an exact rational: {x!r}") from None
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pack(points):
    tn, td, vn, vd = [], [], [], []
    for t, v in points:
        tn.append(t.numerator)
        td.append(t.denominator)
        vn.append(v.numerator)
        vd.append(v.denominator)
    return tuple(tn), tuple(td), tuple(vn), tuple(vd)


class PLMap:
    """Continuous piecewise-linear map ``[lo, hi] -> codomain``.

    Equality and hashing use the canonical form, so two maps compare equal
    exactly when they agree pointwise on the same domain.
    """

    __slots__ = ("_packed", "codomain", "_canon", "_bps", "_vals")

    def __init__(self, points: Iterable[Sequence], codomain: Interval | None = None):
        pts = [(as_rational(t), as_rational(v)) for t, v in points]
        if len(pts) < 2:
            raise ValueError("a PL map needs at least two breakpoints")
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if not a < b:
                raise ValueError(f"breakpoints must strictly increase: {a} !< {b}")
        if codomain is None:
            codomain = (pts[0][0], pts[-1][0])
        lo, hi = as_rational(codomain[0]), as_rational(codomain[1])
        if lo > hi:
            raise ValueError("empty codomain")
        for t, v in pts:
            if not lo <= v <= hi:
                raise ValueError(f"value {v} at {t} outside codomain [{lo}, {hi}]")
        self._init(_pack(pts), (lo, hi))

    def _init(self, packed, codomain):
        self._packed = packed
        self.codomain = codomain
        self._canon = None
        self._bps = None
        self._vals = None

    @classmethod
    def _from_packed(cls, packed, codomain) -> "PLMap":
        m = cls.__new__(cls)
        m._init(packed, codomain)
        return m

    @property
    def packed(self):
        return self._packed

    @property
    def breakpoints(self) -> tuple:
        if self._bps is None:
            tn, td, _, _ = self._packed
            self._bps = tuple(Fraction(n, d) for n, d in zip(tn, td))
        return self._bps

    @property
    def values(self) -> tuple:
        if self._vals is None:
            _, _, vn, vd = self._packed
            self._vals = tuple(Fraction(n, d) for n, d in zip(vn, vd))
        return self._vals

    @property
    def points(self) -> list:
        return list(zip(self.breakpoints, self.values))

    @property
    def domain(self) -> Interval:
        tn, td, _, _ = self._packed
        return Fraction(tn[0], td[0]), Fraction(tn[-1], td[-1])

    def __len__(self) -> int:
        return len(self._packed[0])

    def canonical_packed(self):
        if self._canon is None:
            self._canon = kernels.canonicalize(self._packed)
        return self._canon

    def is_identity(self) -> bool:
        tn, td, vn, vd = self.canonical_packed()
        return len(tn) == 2 and tn == vn and td == vd

    def __call__(self, x) -> Fraction:
        return pl_eval(self, x)

    def __eq__(self, other):
        if not isinstance(other, PLMap):
            return NotImplemented
        return self.canonical_packed() == other.canonical_packed()

    def __hash__(self):
        return hash(self.canonical_packed())

    def __reduce__(self):
        return (PLMap._from_packed, (self._packed, self.codomain))

    def __repr__(self):
        pts = ", ".join(f"({format_rational(t)}, {format_rational(v)})" for t, v in self.points)
        return f"PLMap([{pts}])"


def identity(lo, hi) -> PLMap:
    lo, hi = as_rational(lo), as_rational(hi)
    return PLMap([(lo, lo), (hi, hi)])


def from_pieces(pieces, lo, hi, codomain=None) -> PLMap:
    """Build from affine pieces ``[(slope, intercept, right_end), ...]``.

    Pieces are listed left to right; continuity is verified at every joint.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    pts = []
    left = lo
    for slope, intercept, right in pieces:
        slope, intercept, right = map(as_rational, (slope, intercept, right))
        a = slope * left + intercept
        if pts and pts[-1][1] != a:
            raise ValueError(f"pieces disagree at {left}: {pts[-1][1]} vs {a}")
        if not pts:
            pts.append((left, a))
        pts.append((right, slope * right + intercept))
        left = right
    if left != hi:
        raise ValueError(f"pieces end at {left}, expected {hi}")
    return PLMap(pts, codomain)


def pl_eval(m: PLMap, x) -> Fraction:
    x = as_rational(x)
    r = kernels.evaluate(m._packed, x.numerator, x.denominator)
    if r is None:
        lo, hi = m.domain
        raise DomainError(f"{x} outside domain [{lo}, {hi}]")
    return Fraction(*r)


def pl_canonicalize(m: PLMap) -> PLMap:
    c = m.canonical_packed()
    if c is m._packed:
        return m
    out = PLMap._from_packed(c, m.codomain)
    out._canon = c
    return out


def pl_compose(outer: PLMap, inner: PLMap, cap: int = MAX_BREAKPOINTS) -> PLMap:
    """Exact ``outer o inner``, canonicalized."""
    packed = kernels.compose(outer._packed, inner._packed, cap)
    out = PLMap._from_packed(packed, outer.codomain)
    out._canon = packed
    return out


def pl_power(m: PLMap, n: int, cap: int = MAX_BREAKPOINTS) -> PLMap:
    """``m`` composed with itself ``n`` times (``n >= 0``)."""
    if n < 0:
        raise ValueError("power must be non-negative")
    if n == 0:
        lo, hi = m.domain
        return identity(lo, hi)
    result = pl_canonicalize(m)
    for _ in range(n - 1):
        result = pl_compose(m, result, cap)
    return result


def _slope_signs(m: PLMap):
    vals = m.values
    return [(b > a) - (b < a) for a, b in zip(vals, vals[1:])]


def is_strictly_monotone(m: PLMap) -> bool:
    signs = set(_slope_signs(m))
    return signs == {1} or signs == {-1}


def pl_invert(m: PLMap) -> PLMap:
    """Exact inverse of a strictly monotone surjection onto ``m.codomain``."""
    bps, vals = m.breakpoints, m.values
    signs = _slope_signs(m)
    for j, s in enumerate(signs):
        if s == 0 or s != signs[0]:
            raise NotInvertibleError(
                f"not strictly monotone: breakpoints {bps[j]}, {bps[j + 1]} "
                f"have values {vals[j]}, {vals[j + 1]}"
            )
    img = (min(vals[0], vals[-1]), max(vals[0], vals[-1]))
    if img != tuple(m.codomain):
        raise NotInvertibleError(
            f"image [{img[0]}, {img[1]}] is not the codomain [{m.codomain[0]}, {m.codomain[1]}]"
        )
    pts = list(zip(vals, bps))
    if signs[0] < 0:
        pts.reverse()
    return pl_canonicalize(PLMap(pts, m.domain))


def pl_equal(a: PLMap, b: PLMap) -> bool:
    return a.canonical_packed() == b.canonical_packed()


def pl_image_interval(m: PLMap, interval) -> Interval:
    u, v = as_rational(interval[0]), as_rational(interval[1])
    lo, hi = m.domain
    if u > v:
        raise ValueError(f"empty interval [{u}, {v}]")
    if u < lo or v > hi:
        raise DomainError(f"[{u}, {v}] not inside domain [{lo}, {hi}]")
    ln, ld, hn, hd = kernels.image(m._packed, u.numerator, u.denominator, v.numerator, v.denominator)
    return Fraction(ln, ld), Fraction(hn, hd)


def merge_intervals(intervals) -> list:
    """Union of closed intervals as sorted, pairwise disjoint list."""
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def intersect_intervals(xs, ys) -> list:
    """Intersection of two sorted disjoint lists of closed intervals."""
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return out


def pl_preimage_interval(m: PLMap, interval) -> list:
    """``m^{-1}([u, v])`` as sorted disjoint closed intervals."""
    u, v = as_rational(interval[0]), as_rational(interval[1])
    if u > v:
        return []
    bps, vals = m.breakpoints, m.values
    pieces = []
    for t0, t1, a, b in zip(bps, bps[1:], vals, vals[1:]):
        if a == b:
            if u <= a <= v:
                pieces.append((t0, t1))
            continue
        # parameter s in [0, 1] along the piece; value a + s (b - a)
        s_u = (u - a) / (b - a)
        s_v = (v - a) / (b - a)
        s_lo, s_hi = max(min(s_u, s_v), Fraction(0)), min(max(s_u, s_v), Fraction(1))
        if s_lo <= s_hi:
            pieces.append((t0 + s_lo * (t1 - t0), t0 + s_hi * (t1 - t0)))
    return merge_intervals(pieces)


def pl_fixed_points(m: PLMap, power: int = 1, cap: int = MAX_BREAKPOINTS) -> list:
    """Exact solutions of ``m^power(x) = x``.

    Isolated roots come back as Fractions, whole fixed pieces as ``(lo, hi)``
    tuples; the list is sorted and no point is covered twice.
    """
    if power < 1:
        raise ValueError("power must be >= 1")
    f = pl_power(m, power, cap)
    bps, vals = f.breakpoints, f.values
    intervals = []
    for t0, t1, a, b in zip(bps, bps[1:], vals, vals[1:]):
        g0, g1 = a - t0, b - t1
        if g0 == 0 and g1 == 0:
            intervals.append((t0, t1))
        elif g0 == 0:
            intervals.append((t0, t0))
        elif g1 == 0:
            intervals.append((t1, t1))
        elif (g0 < 0) != (g1 < 0):
            r = t0 + g0 * (t1 - t0) / (g0 - g1)
            intervals.append((r, r))
    return [a if a == b else (a, b) for a, b in merge_intervals(intervals)]


def fixed_set_intervals(items) -> list:
    """Normalize a fixed-point list to closed intervals (points as ``(a, a)``)."""
    return [(x, x) if isinstance(x, Fraction) else tuple(x) for x in items]


def intervals_to_items(intervals) -> list:
    return [a if a == b else (a, b) for a, b in intervals]


__all__ = [
    "MAX_BREAKPOINTS",
    "PLMap",
    "Rational",
    "as_rational",
    "format_rational",
    "from_pieces",
    "identity",
    "intersect_intervals",
    "is_strictly_monotone",
    "merge_intervals",
    "pl_canonicalize",
    "pl_compose",
    "pl_equal",
    "pl_eval",
    "pl_fixed_points",
    "pl_image_interval",
    "pl_invert",
    "pl_power",
    "pl_preimage_interval",
]
