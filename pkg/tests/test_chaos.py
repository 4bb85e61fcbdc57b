from dataclasses import replace
from fractions import Fraction as F

import pytest

from gchaos import presets
from gchaos.chaos import (
    CANDIDATE,
    DISTAL,
    PROXIMAL_ONLY,
    UNDECIDED,
    DistanceProfile,
    Params,
    ProfileRow,
    analyze_pair,
    classify_pair,
    distance_profile,
    lift_to_power,
    residue_split,
    scan_scrambled,
    verify_witness,
    witness_sequence,
)
from gchaos.errors import GChaosError
from gchaos.gspace import circle_distance

from oracles import letter_table, naive_orbit, state_bfs_extrema


def _profile(rows, horizon=None, beam=None):
    rows = tuple(ProfileRow(n, F(m), F(M), (), ()) for n, (m, M) in enumerate(rows, start=1))
    return DistanceProfile(F(0), F(1), horizon or len(rows), 0, beam, rows)


class TestProfile:
    def test_isometry(self):
        sys = presets.ex62()
        prof = distance_profile(sys, F(1, 4), F(2, 3), 16, 6)
        d = circle_distance(F(1, 4), F(2, 3))
        assert all(r.m == r.M == d for r in prof.rows)

    def test_trivial_group_is_orbit_distance(self):
        sys = presets.tent()
        x, y = F(1, 7), F(3, 11)
        prof = distance_profile(sys, x, y, 20, 3)
        xs, ys = naive_orbit(sys.dynamics.points, x, 20), naive_orbit(sys.dynamics.points, y, 20)
        assert [(r.m, r.M) for r in prof.rows] == [(abs(a - b), abs(a - b)) for a, b in zip(xs[1:], ys[1:])]

    def test_sandwich_and_witnesses(self):
        sys = presets.ex42()
        x, y = F(1, 4), F(3, 4)
        prof = distance_profile(sys, x, y, 12, 4)
        xs, ys = sys.orbit(x, 12), sys.orbit(y, 12)
        gens = sys.generators
        for r in prof.rows:
            assert r.m <= abs(xs[r.n] - ys[r.n]) <= r.M
            assert abs(gens.apply_word(r.argmin, xs[r.n]) - gens.apply_word(r.argmin, ys[r.n])) == r.m
            assert abs(gens.apply_word(r.argmax, xs[r.n]) - gens.apply_word(r.argmax, ys[r.n])) == r.M

    def test_matches_state_oracle(self):
        sys = presets.ex33()
        gens = sys.generators
        table = letter_table((n, m.points) for n, m in zip(gens.names, gens.maps))
        x, y = F(1, 3), F(-5, 4)
        prof = distance_profile(sys, x, y, 6, 3)
        xs, ys = sys.orbit(x, 6), sys.orbit(y, 6)
        for r in prof.rows:
            assert (r.m, r.M) == state_bfs_extrema(table, 3, xs[r.n], ys[r.n])

    def test_monotone_in_radius(self):
        sys = presets.ex42()
        profs = [distance_profile(sys, F(1, 4), F(3, 4), 8, L) for L in range(5)]
        for a, b in zip(profs, profs[1:]):
            for ra, rb in zip(a.rows, b.rows):
                assert rb.m <= ra.m and rb.M >= ra.M

    def test_beam_flag_and_bounds(self):
        sys = presets.ex42()
        exact = distance_profile(sys, F(1, 4), F(3, 4), 8, 5)
        beam = distance_profile(sys, F(1, 4), F(3, 4), 8, 5, beam=3)
        assert exact.exact and not beam.exact
        for re, rb in zip(exact.rows, beam.rows):
            assert re.m <= rb.m and rb.M <= re.M

    def test_workers_identical(self):
        sys = presets.ex42()
        a = distance_profile(sys, F(1, 4), F(3, 4), 16, 4, workers=1)
        b = distance_profile(sys, F(1, 4), F(3, 4), 16, 4, workers=3)
        assert a == b

    def test_hints_only_improve(self):
        sys = presets.ex42()
        base = distance_profile(sys, F(1, 4), F(3, 4), 6, 1)
        hinted = distance_profile(sys, F(1, 4), F(3, 4), 6, 1, hints=[("g1", "g1", "g1")])
        for a, b in zip(base.rows, hinted.rows):
            assert b.m <= a.m and b.M >= a.M

    def test_validation(self):
        with pytest.raises(ValueError):
            distance_profile(presets.tent(), F(1, 3), F(1, 3), 4, 0)
        with pytest.raises(ValueError):
            distance_profile(presets.tent(), F(1, 3), F(1, 5), 0, 0)


class TestClassify:
    def test_four_outcomes(self):
        eps, delta = F(1, 10), F(1, 2)
        assert classify_pair(_profile([(1, 1), (F(1, 20), 1)]), eps, delta, 2).classification == CANDIDATE
        assert classify_pair(_profile([(F(1, 20), F(1, 4))] * 2), eps, delta, 2).classification == PROXIMAL_ONLY
        assert classify_pair(_profile([(F(1, 5), 1)] * 2), eps, delta, 2).classification == DISTAL
        assert classify_pair(_profile([(F(1, 5), 1)] * 2, beam=4), eps, delta, 2).classification == UNDECIDED

    def test_only_tail_counts(self):
        prof = _profile([(0, 1), (F(1, 5), F(1, 5)), (F(1, 5), F(1, 5))])
        assert classify_pair(prof, F(1, 10), F(1, 2), 3).classification == CANDIDATE
        assert classify_pair(prof, F(1, 10), F(1, 2), 2).classification == DISTAL

    def test_thresholds_are_strict(self):
        prof = _profile([(F(1, 10), F(1, 2))])
        assert classify_pair(prof, F(1, 10), F(1, 2), 1).classification == DISTAL
        prof = _profile([(F(1, 20), F(1, 2))])
        assert classify_pair(prof, F(1, 10), F(1, 2), 1).classification == PROXIMAL_ONLY

    def test_parameter_validation(self):
        prof = _profile([(0, 1)])
        with pytest.raises(ValueError):
            classify_pair(prof, F(1, 2), F(1, 10), 1)
        with pytest.raises(ValueError):
            classify_pair(prof, F(1, 10), F(1, 2), 2)

    def test_ex62_never_candidate(self):
        sys = presets.ex62()
        for x, y in [(F(1, 4), F(2, 3)), (0, F(1, 1000)), (F(1, 3), F(1, 2))]:
            _, v, _ = analyze_pair(sys, x, y, Params(horizon=16))
            assert v.classification in (DISTAL, PROXIMAL_ONLY)

    def test_stamps_parameters(self):
        _, v, _ = analyze_pair(presets.ex42(), F(1, 4), F(3, 4), Params(F(1, 10), F(2, 5), 16, 32, 4))
        assert (v.eps, v.delta, v.window, v.horizon, v.radius, v.beam) == (F(1, 10), F(2, 5), 16, 32, 4, None)


class TestWitness:
    def test_parity_rule(self):
        prof = _profile([(0, 1)] * 6)
        ws = witness_sequence(prof, F(1, 10), F(1, 2), 4)
        assert ws.proximal == (4, 6) and ws.separated == (3, 5)

    def test_exclusive_steps_kept(self):
        prof = _profile([(0, F(1, 4)), (F(1, 5), 1), (0, F(1, 4))])
        ws = witness_sequence(prof, F(1, 10), F(1, 2), 3)
        assert ws.proximal == (1, 3) and ws.separated == (2,)

    def test_parity_fixup(self):
        # both facts only at odd steps: a step must move to the proximal side
        prof = _profile([(0, 1), (F(1, 5), F(1, 5)), (0, 1)])
        ws = witness_sequence(prof, F(1, 10), F(1, 2), 3)
        assert ws.proximal == (1,) and ws.separated == (3,)

    def test_single_step_carrying_both_facts(self):
        prof = _profile([(F(1, 5), F(1, 5)), (0, 1)])
        assert classify_pair(prof, F(1, 10), F(1, 2), 2).candidate
        with pytest.raises(GChaosError, match="one tail step"):
            witness_sequence(prof, F(1, 10), F(1, 2), 2)

    def test_non_candidate(self):
        with pytest.raises(GChaosError):
            witness_sequence(_profile([(F(1, 5), 1)]), F(1, 10), F(1, 2), 1)

    def test_ex42_reverifies(self):
        sys = presets.ex42()
        prof, v, ws = analyze_pair(sys, F(1, 4), F(3, 4), Params(F(1, 10), F(2, 5), 16, 32, 6))
        assert v.candidate and ws is not None
        assert verify_witness(sys, ws)
        assert all(ws.words[n - 1] != () for n in ws.proximal)
        assert set(ws.proximal).isdisjoint(ws.separated)

    def test_tampered_witness_fails(self):
        sys = presets.ex42()
        _, _, ws = analyze_pair(sys, F(1, 4), F(3, 4), Params(F(1, 10), F(2, 5), 16, 32, 6))
        words = list(ws.words)
        words[ws.proximal[0] - 1] = ()
        assert not verify_witness(sys, replace(ws, words=tuple(words)))


class TestScan:
    def test_ex62_no_clique(self):
        sys = presets.ex62()
        res = scan_scrambled(sys, sys.space.grid(6), Params(horizon=8))
        assert res.candidate_pairs() == [] and len(res.clique) <= 1

    def test_single_candidate_pair(self):
        sys = presets.ex42()
        res = scan_scrambled(sys, [F(1, 4), F(3, 4)], Params(F(1, 10), F(2, 5), 16, 32, 6))
        assert res.clique == (0, 1)

    def test_greedy_order(self):
        sys = presets.ex42()
        res = scan_scrambled(sys, [F(k, 9) for k in range(1, 9)], Params(F(1, 10), F(2, 5), 16, 32, 6))
        clique = list(res.clique)
        assert clique[0] == 0
        for a in clique:
            for b in clique:
                if a < b:
                    assert res.verdicts[(a, b)].candidate

    def test_validation(self):
        with pytest.raises(ValueError):
            scan_scrambled(presets.tent(), [F(1, 3)])
        with pytest.raises(ValueError):
            scan_scrambled(presets.tent(), [F(1, 3), F(1, 3)])


class TestResidues:
    def test_uniform(self):
        r, sub = residue_split(range(1, 101), 4)
        assert r == 0 and len(sub) == 25
        r, sub = residue_split(range(1, 102), 4)
        assert r == 1 and len(sub) == 26

    def test_single_class(self):
        assert residue_split([3, 7, 11, 15], 4) == (3, [3, 7, 11, 15])

    def test_primes(self):
        primes = [p for p in range(2, 101) if all(p % d for d in range(2, p))]
        counts = {r: sum(1 for p in primes if p % 4 == r) for r in range(4)}
        assert counts == {0: 0, 1: 11, 2: 1, 3: 13}
        r, sub = residue_split(primes, 4)
        assert r == 3 and len(sub) == 13

    def test_validation(self):
        with pytest.raises(ValueError):
            residue_split([], 3)
        with pytest.raises(ValueError):
            residue_split([1], 0)


class TestLift:
    def test_ex62_never_candidate(self):
        sys = presets.ex62()
        for k in (1, 2, 3):
            rep = lift_to_power(sys, F(1, 4), F(2, 3), k, Params(horizon=8))
            assert not rep.base.candidate and not rep.lifted.candidate

    def test_caveat_when_not_equivariant(self):
        rep = lift_to_power(presets.ex33(), F(1, 3), F(-1, 5), 2, Params(horizon=8, radius=2))
        assert not rep.equivariant and "CAVEAT" in rep.caveat

    def test_no_caveat_when_equivariant(self):
        rep = lift_to_power(presets.zigzag_z2(), F(1, 3), F(-1, 5), 2, Params(horizon=8, radius=2))
        assert rep.equivariant and rep.caveat == ""

    def test_power_one_is_identity(self):
        rep = lift_to_power(presets.tent(), F(1, 7), F(3, 11), 1, Params(horizon=16))
        assert rep.identical_profiles

    def test_validation(self):
        with pytest.raises(ValueError):
            lift_to_power(presets.tent(), F(1, 7), F(3, 11), 0)
