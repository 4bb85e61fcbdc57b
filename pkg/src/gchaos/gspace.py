"""Metric G-spaces and checkers for the structural hypotheses on ``f``.

Supported phase spaces are closed rational intervals and the circle ``R/Z``
of unit circumference.  Interval systems carry PL dynamics and PL
homeomorphism generators; circle systems carry rotations.  Every checker
works on exact rationals.  Checks that quantify over the whole group use a
Cayley ball of stated radius, and quantifiers over open sets or times are
replaced by a grid of cells and a finite horizon.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import partial
from typing import Optional

from .errors import InvalidSystemError
from .group import (
    IDENTITY,
    CayleyBall,
    GeneratorSet,
    IdentityMap,
    Map,
    Rotation,
    abs_distance,
    apply_map,
    ball_enumerate,
    compose_maps,
    map_key,
)
from .plmap import (
    MAX_BREAKPOINTS,
    PLMap,
    as_rational,
    fixed_set_intervals,
    intersect_intervals,
    intervals_to_items,
    is_strictly_monotone,
    pl_compose,
    pl_equal,
    pl_eval,
    pl_fixed_points,
    pl_image_interval,
    pl_power,
)


@dataclass(frozen=True)
class IntervalSpace:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if not self.lo < self.hi:
            raise InvalidSystemError(f"degenerate interval [{self.lo}, {self.hi}]")

    kind = "interval"

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo

    @property
    def metric(self):
        return abs_distance

    def distance(self, x, y) -> Fraction:
        return abs(x - y)

    def normalize(self, x) -> Fraction:
        x = as_rational(x)
        if not self.lo <= x <= self.hi:
            raise InvalidSystemError(f"point {x} outside [{self.lo}, {self.hi}]")
        return x

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def grid(self, count: int) -> list:
        """``count`` equispaced interior points."""
        step = self.length / (count + 1)
        return [self.lo + step * (i + 1) for i in range(count)]


def circle_distance(x, y) -> Fraction:
    t = (x - y) % 1
    return min(t, 1 - t)


@dataclass(frozen=True)
class CircleSpace:
    """``R/Z``: points are rationals mod 1."""

    kind = "circle"
    lo = Fraction(0)
    hi = Fraction(1)

    @property
    def length(self) -> Fraction:
        return Fraction(1)

    @property
    def diameter(self) -> Fraction:
        return Fraction(1, 2)

    @property
    def metric(self):
        return circle_distance

    def distance(self, x, y) -> Fraction:
        return circle_distance(x, y)

    def normalize(self, x) -> Fraction:
        return as_rational(x) % 1

    def contains(self, x) -> bool:
        return True

    def grid(self, count: int) -> list:
        return [Fraction(i, count) for i in range(count)]


PhaseSpace = IntervalSpace | CircleSpace


@dataclass(frozen=True)
class GSystem:
    """Phase space, dynamics ``f`` and the generators of the acting group."""

    space: PhaseSpace
    dynamics: Map
    generators: GeneratorSet = field(default_factory=GeneratorSet)
    name: str = ""

    def __post_init__(self):
        f = self.dynamics
        if isinstance(self.space, IntervalSpace):
            dom = (self.space.lo, self.space.hi)
            if isinstance(f, Rotation):
                raise InvalidSystemError("rotation dynamics need a circle phase space")
            if isinstance(f, PLMap):
                if f.domain != dom:
                    raise InvalidSystemError(f"dynamics domain {f.domain} differs from space {dom}")
                img = pl_image_interval(f, dom)
                if img[0] < dom[0] or img[1] > dom[1]:
                    raise InvalidSystemError(f"dynamics image {img} escapes the space {dom}")
            for name, g in zip(self.generators.names, self.generators.maps):
                if isinstance(g, Rotation):
                    raise InvalidSystemError(f"generator {name}: rotation on an interval space")
                if isinstance(g, PLMap) and g.domain != dom:
                    raise InvalidSystemError(f"generator {name}: domain {g.domain} differs from space")
        else:
            if isinstance(f, PLMap):
                raise InvalidSystemError("PL dynamics on the circle are not supported")
            for name, g in zip(self.generators.names, self.generators.maps):
                if isinstance(g, PLMap):
                    raise InvalidSystemError(f"generator {name}: PL generator on the circle")

    @property
    def metric(self):
        return self.space.metric

    def f(self, x) -> Fraction:
        return apply_map(self.dynamics, x)

    def orbit(self, x, n: int) -> list:
        """``[x, f x, ..., f^n x]``."""
        x = self.space.normalize(x)
        out = [x]
        for _ in range(n):
            x = apply_map(self.dynamics, x)
            out.append(x)
        return out

    def ball(self, radius: int, workers: int = 1) -> CayleyBall:
        return ball_enumerate(self.generators, radius, workers=workers)

    def with_dynamics(self, f: Map, name: str | None = None) -> "GSystem":
        return replace(self, dynamics=f, name=self.name if name is None else name)

    def trivial_group(self) -> "GSystem":
        return replace(self, generators=GeneratorSet())


def dynamics_power(sys: GSystem, n: int, cap: int = MAX_BREAKPOINTS) -> Map:
    f = sys.dynamics
    if n < 0:
        raise ValueError("power must be >= 0")
    if n == 0 or isinstance(f, IdentityMap):
        return IDENTITY
    if isinstance(f, Rotation):
        return Rotation(f.angle * n)
    return pl_power(f, n, cap)


# -- segments: closed intervals, or closed arcs (lo, lo + length) on the circle


def segment_image(sys: GSystem, m: Map, seg: tuple) -> tuple:
    a, b = seg
    if isinstance(m, IdentityMap):
        return seg
    if isinstance(m, Rotation):
        a2 = (a + m.angle) % 1
        return a2, a2 + (b - a)
    return pl_image_interval(m, seg)


def segment_contains(sys: GSystem, outer: tuple, inner: tuple) -> bool:
    if isinstance(sys.space, IntervalSpace):
        return outer[0] <= inner[0] and inner[1] <= outer[1]
    length = outer[1] - outer[0]
    if length >= 1:
        return True
    return (inner[0] - outer[0]) % 1 + (inner[1] - inner[0]) <= length


def segments_intersect(sys: GSystem, s: tuple, t: tuple) -> bool:
    if isinstance(sys.space, IntervalSpace):
        return max(s[0], t[0]) <= min(s[1], t[1])
    if s[1] - s[0] >= 1 or t[1] - t[0] >= 1:
        return True
    return (t[0] - s[0]) % 1 <= s[1] - s[0] or (s[0] - t[0]) % 1 <= t[1] - t[0]


# -- action axioms


@dataclass(frozen=True)
class ActionVerdict:
    ok: bool
    failures: tuple = ()  # (generator, reason)


def check_action(sys: GSystem) -> ActionVerdict:
    """Each generator must be a self-homeomorphism with a true inverse."""
    failures = []
    gens = sys.generators
    for name, g, gi in zip(gens.names, gens.maps, gens.inverses):
        if isinstance(g, (IdentityMap, Rotation)):
            if map_key(compose_maps(g, gi)) != ("id",):
                failures.append((name, "supplied inverse does not cancel"))
            continue
        dom = (sys.space.lo, sys.space.hi)
        if not is_strictly_monotone(g):
            failures.append((name, f"not strictly monotone on [{dom[0]}, {dom[1]}]"))
            continue
        img = pl_image_interval(g, dom)
        if img != dom:
            failures.append((name, f"image [{img[0]}, {img[1]}] is not [{dom[0]}, {dom[1]}]"))
            continue
        if not isinstance(gi, PLMap) or not (
            pl_compose(g, gi).is_identity() and pl_compose(gi, g).is_identity()
        ):
            failures.append((name, "supplied inverse does not compose to the identity"))
    return ActionVerdict(not failures, tuple(failures))


# -- equivariance


@dataclass(frozen=True)
class EquivarianceVerdict:
    equivariant: bool
    generator: Optional[str] = None
    witness: Optional[Fraction] = None
    f_of_g: Optional[Fraction] = None  # f(g(witness))
    g_of_f: Optional[Fraction] = None  # g(f(witness))
    method: str = "exact"


def check_equivariance(sys: GSystem) -> EquivarianceVerdict:
    """Decide ``f o g == g o f`` for every generator, exactly."""
    f = sys.dynamics
    if isinstance(f, IdentityMap):
        return EquivarianceVerdict(True, method="identity dynamics")
    if isinstance(f, Rotation):
        # rotations of the circle commute
        return EquivarianceVerdict(True, method="algebraic (rotations commute)")
    for name, g in zip(sys.generators.names, sys.generators.maps):
        if isinstance(g, IdentityMap):
            continue
        fg, gf = pl_compose(f, g), pl_compose(g, f)
        if pl_equal(fg, gf):
            continue
        # PL maps agreeing on all breakpoints of both agree everywhere
        for x in sorted(set(fg.breakpoints) | set(gf.breakpoints)):
            a, b = pl_eval(fg, x), pl_eval(gf, x)
            if a != b:
                return EquivarianceVerdict(False, name, x, a, b)
        raise AssertionError("canonical forms differ but no breakpoint witness")  # pragma: no cover
    return EquivarianceVerdict(True)


# -- G-transitivity on a grid of closed cells


@dataclass(frozen=True)
class TransitivityResult:
    passed: bool
    delta: Fraction
    horizon: int
    radius: int
    cells: int
    coverage: dict  # (i, j) -> (n, word) smallest reaching pair
    unreached: Optional[tuple] = None

    def reached_fraction(self) -> Fraction:
        return Fraction(len(self.coverage), self.cells * self.cells)


def _cells_hit(sys: GSystem, seg, delta, ncells):
    lo = sys.space.lo
    first = math.ceil((seg[0] - lo) / delta) - 1
    last = math.floor((seg[1] - lo) / delta)
    if isinstance(sys.space, IntervalSpace):
        return range(max(first, 0), min(last, ncells - 1) + 1)
    if last - first + 1 >= ncells:
        return range(ncells)
    return sorted({k % ncells for k in range(first, last + 1)})


def _reach_from_cell(sys: GSystem, delta, horizon, radius, ncells, i):
    lo = sys.space.lo
    ball = sys.ball(radius)
    seg = (lo + i * delta, lo + (i + 1) * delta)
    found = {}
    for n in range(1, horizon + 1):
        seg = segment_image(sys, sys.dynamics, seg)
        for el in ball:
            for j in _cells_hit(sys, segment_image(sys, el.realized, seg), delta, ncells):
                if j not in found:
                    found[j] = (n, el.word)
            if len(found) == ncells:
                return i, found
    return i, found


def _pmap(fn, items, workers):
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def check_g_transitivity(sys: GSystem, delta, horizon: int, radius: int, workers: int = 1) -> TransitivityResult:
    """Every ordered cell pair ``(U, V)`` needs ``n <= N`` and ``g`` in the
    ball with ``g f^n(U)`` meeting ``V``; per pair the smallest ``(n, word)``
    is recorded.  Closed cells with exact intersection.
    """
    delta = as_rational(delta)
    if delta <= 0:
        raise ValueError("grid size must be positive")
    ratio = sys.space.length / delta
    if ratio.denominator != 1:
        raise ValueError(f"grid size {delta} does not divide the space length {sys.space.length}")
    if horizon < 1 or radius < 0:
        raise ValueError("need horizon >= 1 and radius >= 0")
    ncells = int(ratio)
    sys.ball(radius)  # surface resource errors before fanning out
    fn = partial(_reach_from_cell, sys, delta, horizon, radius, ncells)
    coverage = {}
    unreached = None
    for i, found in sorted(_pmap(fn, range(ncells), workers)):
        for j in range(ncells):
            if j in found:
                coverage[(i, j)] = found[j]
            elif unreached is None:
                unreached = (i, j)
    return TransitivityResult(unreached is None, delta, horizon, radius, ncells, coverage, unreached)


# -- G-transitive points


@dataclass(frozen=True)
class TransitivePoint:
    point: Fraction
    orbit_size: int
    max_gap: Fraction


def _max_gap(sys: GSystem, pts) -> Fraction:
    pts = sorted(set(pts))
    gaps = [b - a for a, b in zip(pts, pts[1:])]
    if isinstance(sys.space, IntervalSpace):
        # boundary gaps count double: a point at distance e from an end covers it
        gaps += [2 * (pts[0] - sys.space.lo), 2 * (sys.space.hi - pts[-1])]
    else:
        gaps.append(1 - pts[-1] + pts[0])
    return max(gaps)


def g_orbit(sys: GSystem, x, horizon: int, radius: int) -> set:
    """``{g f^k x : 0 <= k <= N, g in ball}``."""
    ball = sys.ball(radius)
    return {el(y) for y in sys.orbit(x, horizon) for el in ball}


def find_g_transitive_point(sys: GSystem, eps, horizon: int, radius: int, grid: int | None = None):
    """First grid point whose finite G-orbit is ``eps``-dense, else ``None``."""
    eps = as_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    count = grid or max(1, math.ceil(sys.space.length / eps))
    for x in sys.space.grid(count):
        orb = g_orbit(sys, x, horizon, radius)
        gap = _max_gap(sys, orb)
        if gap <= 2 * eps:
            return TransitivePoint(x, len(orb), gap)
    return None


# -- G-recurrence


@dataclass(frozen=True)
class RecurrenceVerdict:
    recurrent: bool
    point: Fraction
    n: int
    word: tuple
    distance: Fraction


def check_g_recurrent(sys: GSystem, x, eps, horizon: int, radius: int) -> RecurrenceVerdict:
    """Is ``d(g f^n x, x) < eps`` for some ``1 <= n <= N`` and ``g`` in the ball?"""
    eps = as_rational(eps)
    if eps <= 0 or horizon < 1:
        raise ValueError("need eps > 0 and horizon >= 1")
    x = sys.space.normalize(x)
    ball = sys.ball(radius)
    d = sys.space.distance
    best = None
    for n, y in enumerate(sys.orbit(x, horizon)[1:], start=1):
        for el in ball:
            v = d(el(y), x)
            if best is None or v < best[0]:
                best = (v, n, el.word)
        if best[0] == 0:
            break
    v, n, w = best
    return RecurrenceVerdict(v < eps, x, n, w, v)


# -- fixed and periodic points common to f and the group


def _whole(sys: GSystem) -> list:
    return [(sys.space.lo, sys.space.hi)]


def _map_fixed(sys: GSystem, m: Map) -> list:
    if isinstance(m, IdentityMap):
        return _whole(sys)
    if isinstance(m, Rotation):
        return _whole(sys) if m.angle == 0 else []
    return fixed_set_intervals(pl_fixed_points(m, 1))


def _generator_fixed(sys: GSystem) -> list:
    common = _whole(sys)
    for g in sys.generators.maps:
        common = intersect_intervals(common, _map_fixed(sys, g))
    return common


def check_common_fixed_point(sys: GSystem) -> list:
    """Exact points (or whole intervals) fixed by ``f`` and every generator.

    A point fixed by every generator is fixed by every word, so generators
    suffice.
    """
    return intervals_to_items(intersect_intervals(_map_fixed(sys, sys.dynamics), _generator_fixed(sys)))


def check_periodic_common_point(sys: GSystem, max_period: int, cap: int = MAX_BREAKPOINTS) -> list:
    """``(point_or_interval, minimal_period)`` with period <= max_period, every
    point fixed by all generators."""
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    common = _generator_fixed(sys)
    fixed_by_power = []
    out = []
    f = sys.dynamics
    fn = IDENTITY
    for n in range(1, max_period + 1):
        fn = compose_maps(f, fn, cap)
        items = intersect_intervals(_map_fixed(sys, fn), common)
        fixed_by_power.append(items)
        for a, b in items:
            if a == b:
                y, d = apply_map(f, a), 1
                while y != a:
                    y, d = apply_map(f, y), d + 1
                if d == n:
                    out.append((a, n))
            else:
                earlier = any(
                    any(c <= a and b <= e for c, e in fixed_by_power[k]) for k in range(n - 1)
                )
                if not earlier:
                    out.append(((a, b), n))
    return out


@dataclass(frozen=True)
class HypothesisReport:
    """Everything the main-theorem hypotheses ask of a system."""

    equivariance: EquivarianceVerdict
    transitivity: TransitivityResult
    common_fixed_points: tuple
    recurrence: tuple = ()  # RecurrenceVerdict per sample

    @property
    def hypotheses_hold(self) -> bool:
        return self.equivariance.equivariant and self.transitivity.passed and bool(self.common_fixed_points)


def hypothesis_report(
    sys: GSystem,
    delta,
    horizon: int,
    radius: int,
    recurrence_points=(),
    eps=None,
    workers: int = 1,
) -> HypothesisReport:
    eps = as_rational(eps) if eps is not None else sys.space.diameter / 100
    rec = tuple(check_g_recurrent(sys, x, eps, horizon, radius) for x in recurrence_points)
    return HypothesisReport(
        check_equivariance(sys),
        check_g_transitivity(sys, delta, horizon, radius, workers),
        tuple(check_common_fixed_point(sys)),
        rec,
    )


__all__ = [
    "ActionVerdict",
    "CircleSpace",
    "EquivarianceVerdict",
    "GSystem",
    "HypothesisReport",
    "IntervalSpace",
    "RecurrenceVerdict",
    "TransitivePoint",
    "TransitivityResult",
    "check_action",
    "check_common_fixed_point",
    "check_equivariance",
    "check_g_recurrent",
    "check_g_transitivity",
    "check_periodic_common_point",
    "circle_distance",
    "dynamics_power",
    "find_g_transitive_point",
    "g_orbit",
    "hypothesis_report",
    "segment_contains",
    "segment_image",
    "segments_intersect",
]
