"""Finite-horizon detection of G-Li-Yorke pairs.

The limits in the definition are replaced by a surrogate with five stated
parameters: proximity threshold ``eps``, separation threshold ``delta``,
tail window ``W``, horizon ``N`` and ball radius ``L``.  Verdicts are
*candidates*: they certify finite facts (distances at given times under
given group elements), never the limit statements themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Optional

from .errors import GChaosError
from .group import ball_extrema, beam_optimize, word_key
from .gspace import GSystem, _pmap, check_equivariance, dynamics_power
from .plmap import as_rational

CANDIDATE = "g_li_yorke_candidate"
PROXIMAL_ONLY = "proximal_only"
DISTAL = "distal_at_horizon"
UNDECIDED = "undecided"

DEFAULT_HORIZON = 64
DEFAULT_RADIUS = 6


@dataclass(frozen=True)
class ProfileRow:
    n: int
    m: Fraction  # min over the ball of d(g f^n x, g f^n y)
    M: Fraction  # max
    argmin: tuple
    argmax: tuple


@dataclass(frozen=True)
class DistanceProfile:
    x: Fraction
    y: Fraction
    horizon: int
    radius: int
    beam: Optional[int]
    rows: tuple

    @property
    def exact(self) -> bool:
        return self.beam is None

    def tail(self, window: int) -> tuple:
        return self.rows[self.horizon - window :]

    def same_values(self, other: "DistanceProfile") -> bool:
        """Rows agree in every distance and witness word."""
        return self.rows == other.rows


@dataclass(frozen=True)
class Params:
    """Surrogate thresholds; ``None`` fields take scale-aware defaults."""

    eps: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    window: Optional[int] = None
    horizon: int = DEFAULT_HORIZON
    radius: int = DEFAULT_RADIUS
    beam: Optional[int] = None

    def resolve(self, sys: GSystem) -> "Params":
        diam = sys.space.diameter
        return Params(
            as_rational(self.eps) if self.eps is not None else diam / 100,
            as_rational(self.delta) if self.delta is not None else diam / 4,
            self.window if self.window is not None else max(1, self.horizon // 2),
            self.horizon,
            self.radius,
            self.beam,
        )

    def as_dict(self) -> dict:
        return {
            "eps_prox": self.eps,
            "delta_sep": self.delta,
            "window": self.window,
            "horizon": self.horizon,
            "radius": self.radius,
            "beam": self.beam,
        }


def _hint_extrema(sys, hints, a, b):
    d = sys.space.distance
    vals = [(d(sys.generators.apply_word(w, a), sys.generators.apply_word(w, b)), w) for w in hints]
    return min(vals, key=lambda t: (t[0], word_key(t[1]))), min(vals, key=lambda t: (-t[0], word_key(t[1])))


def _profile_rows(sys: GSystem, radius: int, beam, hints, chunk):
    metric = sys.space.metric
    cache: dict = {}
    ball = None if beam is not None else sys.ball(radius)
    rows = []
    for n, a, b in chunk:
        key = (a, b)
        if key not in cache:
            if beam is None:
                lo, hi = ball_extrema(ball, a, b, metric)
            else:
                lo = beam_optimize(sys.generators, radius, a, b, metric, "min", beam)
                hi = beam_optimize(sys.generators, radius, a, b, metric, "max", beam)
            m, wm, M, wM = lo.value, lo.element.word, hi.value, hi.element.word
            if hints:
                (hm, hwm), (hM, hwM) = _hint_extrema(sys, hints, a, b)
                if (hm, word_key(hwm)) < (m, word_key(wm)):
                    m, wm = hm, hwm
                if (-hM, word_key(hwM)) < (-M, word_key(wM)):
                    M, wM = hM, hwM
            cache[key] = (m, M, wm, wM)
        m, M, wm, wM = cache[key]
        rows.append(ProfileRow(n, m, M, wm, wM))
    return rows


def distance_profile(
    sys: GSystem,
    x,
    y,
    horizon: int = DEFAULT_HORIZON,
    radius: int = DEFAULT_RADIUS,
    beam: int | None = None,
    hints=(),
    workers: int = 1,
) -> DistanceProfile:
    """Per-step extrema of ``d(g f^n x, g f^n y)`` for ``n = 1..N`` over the
    radius-``L`` ball, with witness words.

    ``hints`` are extra words scanned alongside the ball (e.g. the words of a
    covering certificate).  Orbit points are exact; repeated pairs along the
    orbit are computed once.
    """
    x, y = sys.space.normalize(x), sys.space.normalize(y)
    if x == y:
        raise ValueError("distance profile needs distinct points")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    xs, ys = sys.orbit(x, horizon), sys.orbit(y, horizon)
    items = [(n, xs[n], ys[n]) for n in range(1, horizon + 1)]
    hints = tuple(tuple(h) for h in hints)
    if beam is None:
        sys.ball(radius)
    fn = partial(_profile_rows, sys, radius, beam, hints)
    if workers > 1:
        size = -(-len(items) // workers)
        parts = _pmap(fn, [items[i : i + size] for i in range(0, len(items), size)], workers)
        rows = [r for part in parts for r in part]
    else:
        rows = fn(items)
    return DistanceProfile(x, y, horizon, radius, beam, tuple(rows))


@dataclass(frozen=True)
class PairVerdict:
    classification: str
    eps: Fraction
    delta: Fraction
    window: int
    horizon: int
    radius: int
    beam: Optional[int]
    tail_min: Fraction
    tail_max: Fraction
    argmin_n: int
    argmax_n: int

    @property
    def candidate(self) -> bool:
        return self.classification == CANDIDATE


def _validate(profile: DistanceProfile, eps, delta, window):
    eps, delta = as_rational(eps), as_rational(delta)
    if not 1 <= window <= profile.horizon:
        raise ValueError(f"tail window {window} must lie in [1, {profile.horizon}]")
    if not 0 < eps < delta:
        raise ValueError(f"need 0 < eps_prox < delta_sep, got {eps}, {delta}")
    return eps, delta


def classify_pair(profile: DistanceProfile, eps, delta, window: int) -> PairVerdict:
    """Classify over the tail ``N - W < n <= N``.

    Beam profiles only bound the true extrema from the wrong side, so a
    non-proximal beam tail is ``undecided`` rather than distal.
    """
    eps, delta = _validate(profile, eps, delta, window)
    tail = profile.tail(window)
    lo = min(tail, key=lambda r: r.m)
    hi = max(tail, key=lambda r: r.M)
    if lo.m < eps:
        cls = CANDIDATE if hi.M > delta else PROXIMAL_ONLY
    else:
        cls = DISTAL if profile.exact else UNDECIDED
    return PairVerdict(
        cls, eps, delta, window, profile.horizon, profile.radius, profile.beam, lo.m, hi.M, lo.n, hi.n
    )


@dataclass(frozen=True)
class WitnessSequence:
    """One group word per time step; ``proximal`` and ``separated`` are the
    disjoint index sets realizing the two threshold facts."""

    x: Fraction
    y: Fraction
    eps: Fraction
    delta: Fraction
    words: tuple  # words[n - 1] is g_n
    proximal: tuple
    separated: tuple


def witness_sequence(profile: DistanceProfile, eps, delta, window: int) -> WitnessSequence:
    """Interleave minimizing and maximizing words into a single sequence.

    Tail steps that only qualify for one set go there; steps qualifying for
    both alternate by parity (even ``n`` proximal, odd ``n`` separated), and a
    set left empty by parity takes the first eligible step from the other.
    """
    eps, delta = _validate(profile, eps, delta, window)
    tail = profile.tail(window)
    pc = [r.n for r in tail if r.m < eps]
    sc = [r.n for r in tail if r.M > delta]
    if not pc or not sc:
        raise GChaosError("profile is not a G-Li-Yorke candidate: no witness sequence")
    both = set(pc) & set(sc)
    P = {n for n in pc if n not in both or n % 2 == 0}
    S = {n for n in sc if n not in both or n % 2 == 1}
    if not P:
        n = min(both)
        if S == {n}:
            raise GChaosError("one tail step carries both facts; disjoint witnesses impossible")
        S.discard(n)
        P.add(n)
    elif not S:
        n = min(both)
        if P == {n}:
            raise GChaosError("one tail step carries both facts; disjoint witnesses impossible")
        P.discard(n)
        S.add(n)
    words = []
    for r in profile.rows:
        if r.n in P:
            words.append(r.argmin)
        elif r.n in S:
            words.append(r.argmax)
        else:
            words.append(())
    return WitnessSequence(profile.x, profile.y, eps, delta, tuple(words), tuple(sorted(P)), tuple(sorted(S)))


def verify_witness(sys: GSystem, ws: WitnessSequence) -> bool:
    """Recompute every listed distance from scratch."""
    d = sys.space.distance
    gens = sys.generators
    xs = sys.orbit(ws.x, len(ws.words))
    ys = sys.orbit(ws.y, len(ws.words))
    if set(ws.proximal) & set(ws.separated) or not ws.proximal or not ws.separated:
        return False
    for n in ws.proximal:
        w = ws.words[n - 1]
        if not d(gens.apply_word(w, xs[n]), gens.apply_word(w, ys[n])) < ws.eps:
            return False
    for n in ws.separated:
        w = ws.words[n - 1]
        if not d(gens.apply_word(w, xs[n]), gens.apply_word(w, ys[n])) > ws.delta:
            return False
    return True


def analyze_pair(sys: GSystem, x, y, params: Params = Params(), hints=(), workers: int = 1):
    """Profile + verdict (+ witness sequence for candidates)."""
    p = params.resolve(sys)
    prof = distance_profile(sys, x, y, p.horizon, p.radius, p.beam, hints, workers)
    verdict = classify_pair(prof, p.eps, p.delta, p.window)
    ws = None
    if verdict.candidate:
        try:
            ws = witness_sequence(prof, p.eps, p.delta, p.window)
        except GChaosError:
            ws = None
    return prof, verdict, ws


@dataclass(frozen=True)
class ScanResult:
    samples: tuple
    params: Params
    verdicts: dict  # (i, j) with i < j -> PairVerdict
    clique: tuple  # sample indices, pairwise candidates

    def candidate_pairs(self) -> list:
        return [ij for ij, v in sorted(self.verdicts.items()) if v.candidate]


def _scan_pair(sys, params, samples, ij):
    i, j = ij
    prof = distance_profile(sys, samples[i], samples[j], params.horizon, params.radius, params.beam)
    return ij, classify_pair(prof, params.eps, params.delta, params.window)


def scan_scrambled(sys: GSystem, samples, params: Params = Params(), workers: int = 1) -> ScanResult:
    """Classify all sample pairs and greedily grow a pairwise-candidate set
    in sample-index order."""
    samples = tuple(sys.space.normalize(s) for s in samples)
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    if len(set(samples)) != len(samples):
        raise ValueError("samples must be distinct")
    p = params.resolve(sys)
    if p.beam is None:
        sys.ball(p.radius)
    pairs = [(i, j) for i in range(len(samples)) for j in range(i + 1, len(samples))]
    verdicts = dict(_pmap(partial(_scan_pair, sys, p, samples), pairs, workers))
    clique: list = []
    for i in range(len(samples)):
        if all(verdicts[(k, i)].candidate for k in clique):
            clique.append(i)
    return ScanResult(samples, p, verdicts, tuple(clique))


def residue_split(indices, modulus: int):
    """Most populated residue class mod ``modulus`` (ties: smallest residue)
    and the subsequence in it."""
    indices = list(indices)
    if not indices:
        raise ValueError("empty index sequence")
    if modulus < 1:
        raise ValueError("modulus must be >= 1")
    counts = [0] * modulus
    for i in indices:
        counts[i % modulus] += 1
    r = max(range(modulus), key=lambda k: (counts[k], -k))
    return r, [i for i in indices if i % modulus == r]


@dataclass(frozen=True)
class LiftReport:
    power: int
    equivariant: bool
    base: PairVerdict
    lifted: PairVerdict
    base_profile: DistanceProfile = field(repr=False)
    lifted_profile: DistanceProfile = field(repr=False)
    caveat: str = ""

    @property
    def preserved(self) -> bool:
        return (not self.base.candidate) or self.lifted.candidate

    @property
    def identical_profiles(self) -> bool:
        return self.base_profile.same_values(self.lifted_profile)


def lift_to_power(sys: GSystem, x, y, power: int, params: Params = Params(), workers: int = 1) -> LiftReport:
    """Compare the verdict for ``f`` with the verdict for ``f^power`` at the
    same parameters (``f^power`` composed exactly)."""
    if power < 1:
        raise ValueError("power must be >= 1")
    p = params.resolve(sys)
    lifted_sys = sys.with_dynamics(dynamics_power(sys, power), name=f"{sys.name}^{power}")
    base_prof = distance_profile(sys, x, y, p.horizon, p.radius, p.beam, workers=workers)
    lift_prof = distance_profile(lifted_sys, x, y, p.horizon, p.radius, p.beam, workers=workers)
    eq = check_equivariance(sys).equivariant
    caveat = "" if eq else (
        "CAVEAT: f is not equivariant; the iteration theorem does not apply, "
        "so agreement or disagreement between f and its power is purely empirical"
    )
    return LiftReport(
        power,
        eq,
        classify_pair(base_prof, p.eps, p.delta, p.window),
        classify_pair(lift_prof, p.eps, p.delta, p.window),
        base_prof,
        lift_prof,
        caveat,
    )


__all__ = [
    "CANDIDATE",
    "DISTAL",
    "PROXIMAL_ONLY",
    "UNDECIDED",
    "DistanceProfile",
    "LiftReport",
    "PairVerdict",
    "Params",
    "ProfileRow",
    "ScanResult",
    "WitnessSequence",
    "analyze_pair",
    "classify_pair",
    "distance_profile",
    "lift_to_power",
    "residue_split",
    "scan_scrambled",
    "verify_witness",
    "witness_sequence",
]
