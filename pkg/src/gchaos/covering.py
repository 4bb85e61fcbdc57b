"""Covering-relation certificates for G-Li-Yorke chaos.

A structure of depth ``k`` lists nested intervals ``A_0 > ... > A_k`` and
``B_0 > ... > B_k``, times ``n_i`` and group words ``w_i`` such that for every
level ``i < k`` both ``w_i f^{n_i}(A_i)`` and ``w_i f^{n_i}(B_i)`` contain
``A_{i+1} u B_{i+1}``, and ``A_k``, ``B_k`` are disjoint.  Verification is exact
and is the only authority; :func:`search_covering` proposes candidates.

Symbolic codes pick ``C_i`` in ``{A_i, B_i}`` per level; pulling the chosen
sets back level by level yields an interval of points that follow the code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Optional

from .chaos import Params, classify_pair, distance_profile
from .errors import GChaosError
from .gspace import (
    GSystem,
    IntervalSpace,
    _pmap,
    dynamics_power,
    segment_contains,
    segment_image,
    segments_intersect,
)
from .group import compose_maps
from .plmap import PLMap, as_rational, pl_eval, pl_preimage_interval

DEFAULT_DEPTH = 8


@dataclass(frozen=True)
class CoveringStructure:
    A: tuple  # k + 1 closed intervals (lo, hi)
    B: tuple
    times: tuple  # k positive ints
    words: tuple  # k words

    def __post_init__(self):
        k = len(self.times)
        if len(self.A) != k + 1 or len(self.B) != k + 1 or len(self.words) != k:
            raise ValueError("structure needs k+1 intervals per side and k times/words")
        if any(n < 1 for n in self.times):
            raise ValueError("times must be positive")
        for a, b in self.A + self.B:
            if a > b:
                raise ValueError(f"empty interval [{a}, {b}]")

    @property
    def depth(self) -> int:
        return len(self.times)

    def sets(self, symbol: str) -> tuple:
        return self.A if symbol == "A" else self.B

    def truncate(self, depth: int) -> "CoveringStructure":
        return CoveringStructure(self.A[: depth + 1], self.B[: depth + 1], self.times[:depth], self.words[:depth])


@dataclass(frozen=True)
class CoveringVerdict:
    ok: bool
    level: Optional[int] = None
    reason: str = ""
    separation: Optional[Fraction] = None  # gap between A_k and B_k


def level_map(sys: GSystem, n: int, word) -> object:
    """Exact ``w o f^n`` for one level."""
    return compose_maps(sys.generators.realize(word), dynamics_power(sys, n))


def _gap(sys, s, t) -> Fraction:
    if isinstance(sys.space, IntervalSpace):
        return max(Fraction(0), max(s[0], t[0]) - min(s[1], t[1]))
    d = sys.space.distance
    if segments_intersect(sys, s, t):
        return Fraction(0)
    return min(d(s[1], t[0]), d(t[1], s[0]))


def verify_covering(sys: GSystem, s: CoveringStructure) -> CoveringVerdict:
    """Check nesting, terminal disjointness and every covering inclusion."""
    for side, seq in (("A", s.A), ("B", s.B)):
        for i in range(s.depth):
            if not segment_contains(sys, seq[i], seq[i + 1]):
                return CoveringVerdict(False, i, f"{side}_{i + 1} is not inside {side}_{i}")
    if segments_intersect(sys, s.A[-1], s.B[-1]):
        return CoveringVerdict(False, s.depth, f"A_{s.depth} and B_{s.depth} intersect")
    for i in range(s.depth):
        m = level_map(sys, s.times[i], s.words[i])
        for side, src in (("A", s.A[i]), ("B", s.B[i])):
            img = segment_image(sys, m, src)
            for tname, target in (("A", s.A[i + 1]), ("B", s.B[i + 1])):
                if not segment_contains(sys, img, target):
                    return CoveringVerdict(
                        False, i, f"{tname}_{i + 1} not inside image of {side}_{i} under level map"
                    )
    return CoveringVerdict(True, separation=_gap(sys, s.A[-1], s.B[-1]))


def _around(sys: GSystem, c: Fraction, r: Fraction) -> tuple:
    if isinstance(sys.space, IntervalSpace):
        return max(sys.space.lo, c - r), min(sys.space.hi, c + r)
    return (c - r) % 1, (c - r) % 1 + 2 * r


def _iter_image(sys, seg, n):
    # f^n(seg) by repeated interval images: continuous images of intervals
    for _ in range(n):
        seg = segment_image(sys, sys.dynamics, seg)
    return seg


def search_covering(
    sys: GSystem,
    depth: int,
    seeds: tuple,
    radius: int = 0,
    horizon: int = 32,
    initial_radius=None,
) -> Optional[CoveringStructure]:
    """Grow intervals around two seeds, halving their radius per level.

    At each level the smallest ``n <= horizon`` and first word of the ball
    (in tie-break order) whose image of both current intervals covers both
    next intervals is taken.  Returns a verified structure or ``None``.
    """
    a0, b0 = (sys.space.normalize(x) for x in seeds)
    if a0 == b0:
        raise ValueError("seeds must differ")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    r = as_rational(initial_radius) if initial_radius is not None else sys.space.distance(a0, b0) / 4
    A, B = [_around(sys, a0, r)], [_around(sys, b0, r)]
    if segments_intersect(sys, A[0], B[0]):
        return None
    ball = sys.ball(radius)
    times, words = [], []
    for _ in range(depth):
        r /= 2
        na, nb = _around(sys, a0, r), _around(sys, b0, r)
        found = None
        ia, ib = A[-1], B[-1]
        for n in range(1, horizon + 1):
            ia = segment_image(sys, sys.dynamics, ia)
            ib = segment_image(sys, sys.dynamics, ib)
            for el in ball:
                ja = segment_image(sys, el.realized, ia)
                jb = segment_image(sys, el.realized, ib)
                if all(segment_contains(sys, j, t) for j in (ja, jb) for t in (na, nb)):
                    found = (n, el.word)
                    break
            if found:
                break
        if found is None:
            return None
        times.append(found[0])
        words.append(found[1])
        A.append(na)
        B.append(nb)
    s = CoveringStructure(tuple(A), tuple(B), tuple(times), tuple(words))
    return s if verify_covering(sys, s).ok else None


@dataclass(frozen=True)
class PointEnclosure:
    code: str
    interval: tuple
    depth: int  # levels constrained

    @property
    def midpoint(self) -> Fraction:
        return (self.interval[0] + self.interval[1]) / 2


def _check_code(code: str, s: CoveringStructure):
    if not code or set(code) - {"A", "B"}:
        raise ValueError(f"code must be a nonempty string over A/B, got {code!r}")
    if len(code) > s.depth + 1:
        raise ValueError(f"code of length {len(code)} exceeds structure depth {s.depth} + 1")


def code_to_enclosure(sys: GSystem, s: CoveringStructure, code: str) -> PointEnclosure:
    """Points of ``C_0`` whose level images follow ``code``.

    ``code[i]`` chooses ``C_i``; a code of length ``l`` constrains levels
    ``0..l-2``.  The pull-back runs from the last level down, keeping the
    leftmost preimage component each time.
    """
    if not isinstance(sys.space, IntervalSpace):
        raise GChaosError("enclosures are computed for interval phase spaces only")
    _check_code(code, s)
    maps = [level_map(sys, s.times[i], s.words[i]) for i in range(len(code) - 1)]
    target = s.sets(code[-1])[len(code) - 1]
    for i in range(len(code) - 2, -1, -1):
        c = s.sets(code[i])[i]
        m = maps[i]
        if isinstance(m, PLMap):
            pre = pl_preimage_interval(m, target)
        else:
            pre = [target]
        comps = [(max(lo, c[0]), min(hi, c[1])) for lo, hi in pre if max(lo, c[0]) <= min(hi, c[1])]
        if not comps:
            raise GChaosError(f"empty pull-back at level {i}: structure was not verified or was mutated")
        target = comps[0]
    enc = PointEnclosure(code, target, len(code) - 1)
    x = enc.midpoint
    for i, m in enumerate(maps):
        x = pl_eval(m, x) if isinstance(m, PLMap) else m(x)
        c = s.sets(code[i + 1])[i + 1]
        if not c[0] <= x <= c[1]:
            raise GChaosError(f"forward check failed at level {i}")  # pragma: no cover
    return enc


def forward_consistent(sys: GSystem, s: CoveringStructure, enc: PointEnclosure) -> bool:
    """Push the midpoint through every level and test membership exactly."""
    x = enc.midpoint
    c0 = s.sets(enc.code[0])[0]
    if not c0[0] <= x <= c0[1]:
        return False
    for i in range(enc.depth):
        x =sys.generators.apply_word(s.words[i], sys.orbit(x, s.times[i])[-1])
        c = s.sets(enc.code[i + 1])[i + 1]
        if not c[0] <= x <= c[1]:
            return False
    return True


def _hadamard(x: int, bits: int) -> list:
    return [bin(x & y).count("1") & 1 for y in range(1 << bits)]


def build_code_family(m: int, k: int) -> list:
    """``m`` distinct length-``k`` codes, every pair agreeing on >= k/4 and
    disagreeing on >= k/4 positions.

    Units of length ``2^(b+1)`` (``b = ceil(log2 m)``) alternate a shared
    block of ``A`` with a Hadamard codeword of the code's index; distinct
    Hadamard words differ in exactly half their positions.
    """
    if m < 2:
        raise ValueError("need at least two codes")
    bits = max(1, math.ceil(math.log2(m)))
    unit = 1 << (bits + 1)
    if k < unit:
        raise ValueError(f"length {k} too short for {m} codes; need >= {unit}")
    codes = []
    for idx in range(m):
        h = "".join("B" if bit else "A" for bit in _hadamard(idx, bits))
        block = "A" * (unit // 2) + h
        codes.append((block * (k // unit + 1))[:k])
    for i in range(m):
        for j in range(i + 1, m):
            agree = sum(a == b for a, b in zip(codes[i], codes[j]))
            if 4 * agree < k or 4 * (k - agree) < k:
                raise ValueError(f"length {k} does not balance agreements for {m} codes")
    return codes


def family_length(m: int, max_len: int) -> int:
    """Longest code length ``<= max_len`` that :func:`build_code_family` balances."""
    if m < 2:
        raise ValueError("need at least two codes")
    unit = 1 << (max(1, math.ceil(math.log2(m))) + 1)
    if max_len < unit:
        raise ValueError(f"{m} codes need length >= {unit}; the structure allows {max_len}")
    return max_len - max_len % unit


@dataclass(frozen=True)
class ScrambledReport:
    enclosures: tuple
    verdicts: dict  # (i, j) -> PairVerdict
    params: Params

    def all_candidates(self) -> bool:
        return all(v.candidate for v in self.verdicts.values())


def _cross_pair(sys, p, hints, points, ij):
    i, j = ij
    prof = distance_profile(sys, points[i], points[j], p.horizon, p.radius, p.beam, hints)
    return ij, classify_pair(prof, p.eps, p.delta, p.window)


def scrambled_from_covering(
    sys: GSystem,
    s: CoveringStructure,
    m: int,
    params: Params | None = None,
    codes=None,
    workers: int = 1,
) -> ScrambledReport:
    """Enclose ``m`` code-family points and cross-check them pairwise.

    The covering facts are the certificate; the detector run on enclosure
    midpoints, with the structure's words as extra candidates, corroborates.
    The default horizon is the total time spanned by the structure.
    """
    if codes is None:
        codes = build_code_family(m, family_length(m, s.depth + 1)) if s.depth >= 1 else ["A", "B"][:m]
    encs = tuple(code_to_enclosure(sys, s, c) for c in codes)
    if params is None:
        params = Params(horizon=max(1, sum(s.times)))
    p = params.resolve(sys)
    hints = tuple(sorted(set(s.words)))
    points = [e.midpoint for e in encs]
    pairs = [(i, j) for i in range(len(points)) for j in range(i + 1, len(points)) if points[i] != points[j]]
    verdicts = dict(_pmap(partial(_cross_pair, sys, p, hints, points), pairs, workers))
    return ScrambledReport(encs, verdicts, p)


def all_codes(length: int) -> list:
    return ["".join("AB"[(i >> (length - 1 - b)) & 1] for b in range(length)) for i in range(1 << length)]


__all__ = [
    "CoveringStructure",
    "CoveringVerdict",
    "PointEnclosure",
    "ScrambledReport",
    "all_codes",
    "build_code_family",
    "code_to_enclosure",
    "family_length",
    "forward_consistent",
    "level_map",
    "scrambled_from_covering",
    "search_covering",
    "verify_covering",
]
