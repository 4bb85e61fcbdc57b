from fractions import Fraction as F
from itertools import product

import pytest

from gchaos import presets
from gchaos.errors import ResourceCapError
from gchaos.group import (
    IDENTITY,
    GeneratorSet,
    Rotation,
    abs_distance,
    ball_enumerate,
    beam_optimize,
    compose_maps,
    format_word,
    map_key,
    optimize_distance,
    parse_word,
    word_key,
    word_reduce,
)
from gchaos.gspace import circle_distance
from gchaos.plmap import pl_eval

from oracles import all_words_extrema, apply_word, letter_table, state_bfs_extrema


def _table(sys):
    gens = sys.generators
    return letter_table((n, m.points) for n, m in zip(gens.names, gens.maps))


@pytest.fixture(scope="module")
def ex42():
    return presets.ex42()


class TestWords:
    def test_reduce_cancellation(self):
        assert word_reduce("g1 g1' g2") == ("g2",)
        assert word_reduce("") == ()
        assert word_reduce("g1 g2 g2' g1'") == ()

    def test_reduce_full_cancellation_realizes_identity(self, ex42):
        gens = ex42.generators
        assert map_key(gens.realize(("g1", "g2", "g2'", "g1'"))) == ("id",)

    def test_unknown_generator(self, ex42):
        with pytest.raises(ValueError):
            word_reduce("g1 h", ex42.generators)

    def test_format_and_parse(self):
        assert format_word(()) == "e"
        assert format_word(("g1", "g2'")) == "g1 g2'"
        assert parse_word("e") == ()
        assert parse_word(" g1  g2' ") == ("g1", "g2'")

    def test_word_order_is_shortest_then_lex(self):
        words = [("g2",), ("g1", "g1"), (), ("g1",)]
        assert sorted(words, key=word_key) == [(), ("g1",), ("g2",), ("g1", "g1")]

    def test_realize_order(self, ex42):
        gens = ex42.generators
        x = F(1, 3)
        g1, g2 = gens.letter_map("g1"), gens.letter_map("g2")
        # the word "g1 g2" acts as g1 o g2
        assert gens.apply_word(("g1", "g2"), x) == pl_eval(g1, pl_eval(g2, x))
        assert pl_eval(gens.realize(("g1", "g2")), x) == pl_eval(g1, pl_eval(g2, x))

    @pytest.mark.parametrize("bad", ["e", "a'", "a b", ""])
    def test_bad_names(self, bad):
        with pytest.raises(ValueError):
            GeneratorSet.from_maps([(bad, IDENTITY)])


class TestBall:
    def test_radius_zero(self, ex42):
        ball = ball_enumerate(ex42.generators, 0)
        assert [e.word for e in ball] == [()]

    def test_rotation_ball_counts(self):
        for a in presets.EX62_ANGLES:
            gens = presets.ex62(a).generators
            for L in range(7):
                assert len(ball_enumerate(gens, L)) == min(2 * L + 1, a.denominator)

    def test_small_rational_rotation_wraps(self):
        gens = GeneratorSet.from_maps([("g", Rotation(F(1, 5)))])
        assert len(ball_enumerate(gens, 6)) == 5

    def test_ex42_identity_generator_removed(self, ex42):
        ball = ball_enumerate(ex42.generators, 4)
        assert all("f" not in w and "f'" not in w for w in (e.word for e in ball))
        # the remaining letters generate a free group on two letters
        assert [len(ball_enumerate(ex42.generators, L)) for L in range(5)] == [1, 5, 17, 53, 161]

    def test_dedup_against_naive_enumeration(self, ex42):
        gens = ex42.generators
        table = _table(ex42)
        ball = ball_enumerate(gens, 3)
        keys = {map_key(e.realized) for e in ball}
        assert len(keys) == len(ball)
        probes = [F(k, 7) for k in range(-14, 15)]
        naive_sigs = set()
        for k in range(4):
            for w in product(sorted(table), repeat=k):
                naive_sigs.add(tuple(apply_word(table, w, x) for x in probes))
        ball_sigs = {tuple(e(x) for x in probes) for e in ball}
        assert ball_sigs == naive_sigs

    def test_elements_realize_their_words(self, ex42):
        gens = ex42.generators
        table = _table(ex42)
        for e in ball_enumerate(gens, 3):
            for x in (F(-2), F(-1, 3), F(1, 4), F(3, 4), F(2)):
                assert e(x) == apply_word(table, e.word, x)

    def test_kept_word_is_smallest(self, ex42):
        ball = ball_enumerate(ex42.generators, 2)
        words = [e.word for e in ball]
        assert words == sorted(words, key=word_key)
        assert ("g1",) in words and ("f",) not in words

    def test_cap(self, ex42):
        with pytest.raises(ResourceCapError, match="radius"):
            ball_enumerate(ex42.generators, 5, cap=100)

    def test_workers_do_not_change_ball(self, ex42):
        a = ball_enumerate(ex42.generators, 4, workers=1)
        b = ball_enumerate(ex42.generators, 4, workers=3)
        assert [e.word for e in a] == [e.word for e in b]
        assert [map_key(e.realized) for e in a] == [map_key(e.realized) for e in b]

    def test_negative_radius(self, ex42):
        with pytest.raises(ValueError):
            ball_enumerate(ex42.generators, -1)


class TestCompose:
    def test_rotations(self):
        r = compose_maps(Rotation(F(1, 3)), Rotation(F(2, 3)))
        assert r is IDENTITY
        assert compose_maps(Rotation(F(1, 4)), Rotation(F(1, 4))).angle == F(1, 2)

    def test_mixed_types_refused(self, ex42):
        with pytest.raises(TypeError):
            compose_maps(Rotation(F(1, 3)), ex42.generators.letter_map("g1"))


class TestOptimize:
    def test_radius_zero_is_identity(self, ex42):
        ball = ball_enumerate(ex42.generators, 0)
        e = optimize_distance(ball, F(1, 4), F(3, 4), objective="min")
        assert e.element.word == () and e.value == F(1, 2) and e.exact

    def test_rotations_preserve_distance(self):
        for a in presets.EX62_ANGLES:
            ball = ball_enumerate(presets.ex62(a).generators, 6)
            for obj in ("min", "max"):
                e = optimize_distance(ball, F(1, 4), F(2, 3), circle_distance, obj)
                assert e.value == circle_distance(F(1, 4), F(2, 3))

    def test_ex42_min_shrinks(self, ex42):
        ball = ball_enumerate(ex42.generators, 8)
        e = optimize_distance(ball, F(1, 4), F(3, 4), objective="min")
        assert e.value < F(1, 2)
        assert abs(e.element(F(1, 4)) - e.element(F(3, 4))) == e.value

    @pytest.mark.parametrize("L", [0, 1, 2, 3, 4])
    def test_exact_matches_oracles(self, ex42, L):
        table = _table(ex42)
        ball = ball_enumerate(ex42.generators, L)
        for p, q in [(F(1, 4), F(3, 4)), (F(-3, 2), F(1, 5)), (F(0), F(2))]:
            lo = optimize_distance(ball, p, q, objective="min")
            hi = optimize_distance(ball, p, q, objective="max")
            expect = state_bfs_extrema(table, L, p, q)
            assert (lo.value, hi.value) == expect
            if L <= 3:
                assert all_words_extrema(table, L, p, q) == expect

    @pytest.mark.parametrize("L", [1, 2, 3, 4])
    def test_unbounded_beam_is_exhaustive(self, ex42, L):
        ball = ball_enumerate(ex42.generators, L)
        for p, q in [(F(1, 4), F(3, 4)), (F(-1), F(1, 3))]:
            for obj in ("min", "max"):
                exact = optimize_distance(ball, p, q, objective=obj)
                beam = beam_optimize(ex42.generators, L, p, q, abs_distance, obj, width=10**9)
                assert beam.value == exact.value
                assert not beam.exact

    def test_beam_value_is_attained(self, ex42):
        b = beam_optimize(ex42.generators, 6, F(1, 4), F(3, 4), width=4)
        assert abs(b.element(F(1, 4)) - b.element(F(3, 4))) == b.value

    def test_tie_break_prefers_shorter_word(self):
        gens = GeneratorSet.from_maps([("g", Rotation(F(1, 7)))])
        ball = ball_enumerate(gens, 3)
        e = optimize_distance(ball, 0, F(1, 2), circle_distance, "min")
        assert e.element.word == ()

    def test_bad_objective(self, ex42):
        ball = ball_enumerate(ex42.generators, 1)
        with pytest.raises(ValueError):
            optimize_distance(ball, 0, 1, objective="median")
