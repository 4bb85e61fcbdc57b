"""Finitely generated groups of homeomorphisms and their Cayley balls.

Words are tuples of letter names; a letter is a generator name or the name
followed by ``'`` for its inverse.  The word ``(l1, ..., lk)`` realizes the
composition ``l1 o ... o lk`` (rightmost letter acts first).  Relations are
never assumed: two words are identified only when their realized maps agree
exactly.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Sequence, Union

from . import kernels
from .errors import ResourceCapError
from .plmap import MAX_BREAKPOINTS, PLMap, as_rational, pl_compose, pl_eval, pl_invert

log = logging.getLogger(__name__)

#: default cap on the number of stored ball elements
MAX_BALL_ELEMENTS = 200_000
#: default cap on total breakpoints stored across a ball
MAX_BALL_BREAKPOINTS = 20_000_000


@dataclass(frozen=True)
class IdentityMap:
    """The identity of any phase space."""

    def __call__(self, x):
        return x


@dataclass(frozen=True)
class Rotation:
    """Rotation of the unit-circumference circle ``R/Z`` by ``angle``."""

    angle: Fraction

    def __post_init__(self):
        object.__setattr__(self, "angle", as_rational(self.angle) % 1)

    def __call__(self, x):
        return (as_rational(x) + self.angle) % 1


Map = Union[PLMap, Rotation, IdentityMap]
IDENTITY = IdentityMap()


def compose_maps(outer: Map, inner: Map, cap: int = MAX_BREAKPOINTS) -> Map:
    if isinstance(outer, IdentityMap):
        return inner
    if isinstance(inner, IdentityMap):
        return outer
    if isinstance(outer, Rotation) and isinstance(inner, Rotation):
        r = Rotation(outer.angle + inner.angle)
        return IDENTITY if r.angle == 0 else r
    if isinstance(outer, PLMap) and isinstance(inner, PLMap):
        m = pl_compose(outer, inner, cap)
        return IDENTITY if m.is_identity() else m
    raise TypeError(f"cannot compose {type(outer).__name__} with {type(inner).__name__}")


def invert_map(m: Map) -> Map:
    if isinstance(m, IdentityMap):
        return m
    if isinstance(m, Rotation):
        return Rotation(-m.angle)
    return pl_invert(m)


def map_key(m: Map):
    """Hashable key: equal keys iff the maps agree pointwise."""
    if isinstance(m, IdentityMap):
        return ("id",)
    if isinstance(m, Rotation):
        return ("id",) if m.angle == 0 else ("rot", m.angle)
    if m.is_identity():
        return ("id",)
    return m.canonical_packed()


def apply_map(m: Map, x) -> Fraction:
    if isinstance(m, PLMap):
        return pl_eval(m, x)
    return m(x)


def inverse_name(letter: str) -> str:
    return letter[:-1] if letter.endswith("'") else letter + "'"


def format_word(word: Sequence[str]) -> str:
    return " ".join(word) if word else "e"


def parse_word(text: str) -> tuple:
    tokens = text.split()
    return () if tokens in ([], ["e"]) else tuple(tokens)


@dataclass(frozen=True)
class GeneratorSet:
    """Named generators with their exact inverses.

    ``letters`` lists every letter in lexicographic name order, which is the
    letter order all tie-breaking uses.
    """

    names: tuple = ()
    maps: tuple = ()
    inverses: tuple = ()
    _table: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names: {self.names}")
        for n in self.names:
            if not n or n == "e" or "'" in n or any(c.isspace() for c in n):
                raise ValueError(f"invalid generator name {n!r}")
        if len(self.maps) != len(self.names) or len(self.inverses) != len(self.names):
            raise ValueError("names, maps and inverses must have equal length")
        table = {}
        for n, m, mi in zip(self.names, self.maps, self.inverses):
            table[n] = m
            table[n + "'"] = mi
        object.__setattr__(self, "_table", table)

    @classmethod
    def from_maps(cls, pairs: Iterable, inverses: dict | None = None) -> "GeneratorSet":
        names, maps, invs = [], [], []
        for name, m in pairs:
            names.append(name)
            maps.append(m)
            invs.append(inverses[name] if inverses and name in inverses else invert_map(m))
        return cls(tuple(names), tuple(maps), tuple(invs))

    def __len__(self):
        return len(self.names)

    @property
    def letters(self) -> tuple:
        return tuple(sorted(self._table))

    def letter_map(self, letter: str) -> Map:
        try:
            return self._table[letter]
        except KeyError:
            raise ValueError(f"unknown generator {letter!r}") from None

    def apply_word(self, word: Sequence[str], x) -> Fraction:
        for letter in reversed(word):
            x = apply_map(self.letter_map(letter), x)
        return x

    def realize(self, word: Sequence[str], cap: int = MAX_BREAKPOINTS) -> Map:
        m: Map = IDENTITY
        for letter in reversed(word):
            m = compose_maps(self.letter_map(letter), m, cap)
        return m


def word_reduce(word, gens: GeneratorSet | None = None) -> tuple:
    """Free reduction; accepts a word tuple or a space-separated string."""
    if isinstance(word, str):
        word = parse_word(word)
    stack: list = []
    for letter in word:
        if gens is not None:
            gens.letter_map(letter)
        if stack and stack[-1] == inverse_name(letter):
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def word_key(word: Sequence[str]):
    """Shortest first, then lexicographic by letter name."""
    return len(word), tuple(word)


@dataclass(frozen=True)
class GroupElement:
    word: tuple
    realized: Map = field(compare=False)

    def __call__(self, x):
        return apply_map(self.realized, x)

    def __str__(self):
        return format_word(self.word)


@dataclass(frozen=True)
class CayleyBall:
    generators: GeneratorSet
    radius: int
    elements: tuple  # GroupElements sorted by word_key
    _packed: list = field(default=None, compare=False, hash=False, repr=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def packed_maps(self):
        """Packed PL maps for the kernel scan, ``None`` meaning identity."""
        if self._packed is None:
            out = []
            for el in self.elements:
                m = el.realized
                if isinstance(m, IdentityMap):
                    out.append(None)
                elif isinstance(m, PLMap):
                    out.append(m.packed)
                else:
                    out = False
                    break
            object.__setattr__(self, "_packed", out)
        return self._packed or None


def _expand(args):
    gens, layer, cap = args
    out = {}
    letters = gens.letters
    for word, m in layer:
        banned = inverse_name(word[0]) if word else None
        for letter in letters:
            if letter == banned:
                continue
            new = compose_maps(gens.letter_map(letter), m, cap)
            key = map_key(new)
            w = (letter,) + word
            prev = out.get(key)
            if prev is None or w < prev[0]:
                out[key] = (w, new)
    return out


def ball_enumerate(
    gens: GeneratorSet,
    radius: int,
    cap: int = MAX_BALL_ELEMENTS,
    breakpoint_budget: int = MAX_BALL_BREAKPOINTS,
    workers: int = 1,
) -> CayleyBall:
    """Breadth-first Cayley ball with exact deduplication of realized maps.

    Each element keeps its shortest, then lexicographically smallest, word.
    The result does not depend on ``workers``.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    return _ball_cached(gens, radius, cap, breakpoint_budget, max(1, workers))


@lru_cache(maxsize=32)
def _ball_cached(gens, radius, cap, budget, workers):
    seen = {map_key(IDENTITY): ((), IDENTITY)}
    layer = [((), IDENTITY)]
    elements = [GroupElement((), IDENTITY)]
    total_bps = 0
    for r in range(1, radius + 1):
        if not layer or not len(gens):
            break
        if workers > 1 and len(layer) >= 2 * workers:
            size = -(-len(layer) // workers)
            chunks = [(gens, layer[i : i + size], MAX_BREAKPOINTS) for i in range(0, len(layer), size)]
            with ProcessPoolExecutor(max_workers=workers) as ex:
                parts = list(ex.map(_expand, chunks))
        else:
            parts = [_expand((gens, layer, MAX_BREAKPOINTS))]
        merged: dict = {}
        for part in parts:
            for key, (w, m) in part.items():
                if key in seen:
                    continue
                prev = merged.get(key)
                if prev is None or w < prev[0]:
                    merged[key] = (w, m)
        layer = sorted(merged.values(), key=lambda wm: wm[0])
        for key, wm in merged.items():
            seen[key] = wm
        for w, m in layer:
            elements.append(GroupElement(w, m))
            if isinstance(m, PLMap):
                total_bps += len(m)
        if len(elements) > cap or total_bps > budget:
            raise ResourceCapError(
                f"Cayley ball exceeds cap ({len(elements)} elements, {total_bps} breakpoints) "
                f"at radius {r}; completed radius {r - 1}"
            )
        log.debug("ball radius %d: %d elements", r, len(elements))
    return CayleyBall(gens, radius, tuple(elements))


class Extremum(NamedTuple):
    element: GroupElement
    value: Fraction
    exact: bool


def abs_distance(x, y) -> Fraction:
    return abs(x - y)


def _better(objective, value, word, best_value, best_word) -> bool:
    if best_value is None:
        return True
    if value != best_value:
        return value < best_value if objective == "min" else value > best_value
    return word_key(word) < word_key(best_word)


def ball_extrema(ball: CayleyBall, p, q, metric: Callable = abs_distance):
    """Both extrema of ``d(g p, g q)`` over the ball: ``(min, max)`` Extrema."""
    p, q = as_rational(p), as_rational(q)
    packed = ball.packed_maps() if metric is abs_distance else None
    if packed is not None:
        mn, md, i, xn, xd, j = kernels.ball_extrema(packed, p.numerator, p.denominator, q.numerator, q.denominator)
        els = ball.elements
        return Extremum(els[i], Fraction(mn, md), True), Extremum(els[j], Fraction(xn, xd), True)
    lo = hi = None
    for el in ball.elements:
        d = metric(el(p), el(q))
        if lo is None or d < lo[1]:
            lo = (el, d)
        if hi is None or d > hi[1]:
            hi = (el, d)
    return Extremum(lo[0], lo[1], True), Extremum(hi[0], hi[1], True)


def beam_optimize(
    gens: GeneratorSet,
    radius: int,
    p,
    q,
    metric: Callable = abs_distance,
    objective: str = "min",
    width: int = 64,
) -> Extremum:
    """Layered beam search over words of length <= radius.

    States are image pairs ``(g p, g q)``: words with equal image pairs have
    equal extensions, so deduplicating states loses nothing.  The returned
    value is attained by the returned element but need not be optimal.
    """
    if objective not in ("min", "max"):
        raise ValueError("objective must be 'min' or 'max'")
    if width < 1:
        raise ValueError("beam width must be >= 1")
    p, q = as_rational(p), as_rational(q)
    best_w, best_v = (), metric(p, q)
    beam = [((), p, q)]
    seen = {(p, q)}
    letters = gens.letters
    sign = 1 if objective == "min" else -1
    for _ in range(radius):
        cand: dict = {}
        for word, a, b in beam:
            banned = inverse_name(word[0]) if word else None
            for letter in letters:
                if letter == banned:
                    continue
                g = gens.letter_map(letter)
                st = (apply_map(g, a), apply_map(g, b))
                if st in seen:
                    continue
                w = (letter,) + word
                prev = cand.get(st)
                if prev is None or w < prev:
                    cand[st] = w
        if not cand:
            break
        seen.update(cand)
        ranked = sorted(cand.items(), key=lambda kv: (sign * metric(*kv[0]), word_key(kv[1])))
        beam = [(w, a, b) for (a, b), w in ranked[:width]]
        for (a, b), w in ranked[:1]:
            v = metric(a, b)
            if _better(objective, v, w, best_v, best_w):
                best_w, best_v = w, v
    return Extremum(GroupElement(best_w, gens.realize(best_w)), best_v, False)


def optimize_distance(
    ball: CayleyBall,
    p,
    q,
    metric: Callable = abs_distance,
    objective: str = "min",
    beam: int | None = None,
) -> Extremum:
    """Extremum of ``d(g p, g q)`` over the ball with a witness element.

    Exact scan by default (ties: shortest word, then lexicographic).  With
    ``beam`` set, a heuristic layered search over the ball's generators and
    radius replaces the scan; its value is feasible, flagged ``exact=False``.
    """
    if objective not in ("min", "max"):
        raise ValueError("objective must be 'min' or 'max'")
    if beam is not None:
        return beam_optimize(ball.generators, ball.radius, p, q, metric, objective, beam)
    lo, hi = ball_extrema(ball, p, q, metric)
    return lo if objective == "min" else hi


__all__ = [
    "CayleyBall",
    "Extremum",
    "GeneratorSet",
    "GroupElement",
    "IDENTITY",
    "IdentityMap",
    "Rotation",
    "abs_distance",
    "apply_map",
    "ball_enumerate",
    "ball_extrema",
    "beam_optimize",
    "compose_maps",
    "format_word",
    "invert_map",
    "map_key",
    "optimize_distance",
    "parse_word",
    "word_key",
    "word_reduce",
]
