from fractions import Fraction as F

import pytest

from gchaos import presets
from gchaos.errors import InvalidSystemError
from gchaos.group import GeneratorSet, Rotation
from gchaos.gspace import (
    CircleSpace,
    GSystem,
    IntervalSpace,
    check_action,
    check_common_fixed_point,
    check_equivariance,
    check_g_recurrent,
    check_g_transitivity,
    check_periodic_common_point,
    circle_distance,
    find_g_transitive_point,
    hypothesis_report,
)
from gchaos.plmap import PLMap, from_pieces, identity, pl_eval

from oracles import naive_circle_distance, naive_image


class TestSpaces:
    def test_interval_metric(self):
        s = IntervalSpace(-2, 2)
        assert s.distance(F(-1), F(3, 2)) == F(5, 2)
        assert s.diameter == 4

    def test_degenerate_interval(self):
        with pytest.raises(InvalidSystemError):
            IntervalSpace(1, 1)

    def test_circle_metric(self):
        assert circle_distance(F(1, 10), F(9, 10)) == F(1, 5)
        assert circle_distance(F(1, 4), F(3, 4)) == F(1, 2)
        assert CircleSpace().normalize(F(-1, 4)) == F(3, 4)
        assert CircleSpace().diameter == F(1, 2)

    def test_grids(self):
        assert IntervalSpace(0, 1).grid(3) == [F(1, 4), F(1, 2), F(3, 4)]
        assert CircleSpace().grid(4) == [0, F(1, 4), F(1, 2), F(3, 4)]


class TestSystem:
    def test_dynamics_must_stay_inside(self):
        f = PLMap([(0, 0), (1, 2)], codomain=(0, 2))
        with pytest.raises(InvalidSystemError, match="escapes"):
            GSystem(IntervalSpace(0, 1), f)

    def test_domain_mismatch(self):
        with pytest.raises(InvalidSystemError):
            GSystem(IntervalSpace(0, 2), identity(0, 1))

    def test_rotation_on_interval(self):
        with pytest.raises(InvalidSystemError):
            GSystem(IntervalSpace(0, 1), Rotation(F(1, 3)))

    def test_orbit(self):
        assert presets.tent().orbit(F(1, 5), 3) == [F(1, 5), F(2, 5), F(4, 5), F(2, 5)]


class TestAction:
    def test_presets_valid(self):
        for name in ("ex33", "ex42", "ex62", "tent", "zigzag-z2"):
            assert check_action(presets.load(name)).ok, name

    def test_generator_not_onto(self):
        squash = PLMap([(-2, -1), (2, 1)], codomain=(-2, 2))
        inv = PLMap([(-2, -2), (2, 2)])
        gens = GeneratorSet(("s",), (squash,), (inv,))
        v = check_action(GSystem(IntervalSpace(-2, 2), identity(-2, 2), gens))
        assert not v.ok
        assert v.failures[0][0] == "s" and "image" in v.failures[0][1]

    def test_bad_supplied_inverse(self):
        g = from_pieces([(2, 0, F(1, 2)), (F(2, 3), F(2, 3), 2)], 0, 2)
        gens = GeneratorSet(("g",), (g,), (g,))
        v = check_action(GSystem(IntervalSpace(0, 2), identity(0, 2), gens))
        assert not v.ok and "inverse" in v.failures[0][1]

    def test_empty_group(self):
        assert check_action(presets.tent()).ok


class TestEquivariance:
    def test_ex33_witness(self):
        v = check_equivariance(presets.ex33())
        assert not v.equivariant
        assert (v.generator, v.witness, v.f_of_g, v.g_of_f) == ("g1", F(1, 2), F(-1, 2), F(-1))

    def test_ex62(self):
        assert check_equivariance(presets.ex62()).equivariant

    def test_zigzag(self):
        sys = presets.zigzag_z2()
        v = check_equivariance(sys)
        assert v.equivariant and v.method == "exact"
        sigma = sys.generators.letter_map("sigma")
        for k in range(-32, 33):
            x = F(k, 32)
            assert pl_eval(sys.dynamics, pl_eval(sigma, x)) == pl_eval(sigma, pl_eval(sys.dynamics, x))


class TestTransitivity:
    def test_tent(self):
        r = check_g_transitivity(presets.tent(), F(1, 16), 16, 0)
        assert r.passed and r.cells == 16 and len(r.coverage) == 256

    def test_tent_cell_reaches_everything_quickly(self):
        # oracle: a cell of length 1/16 covers [0, 1] after at most 5 tent steps
        tent = presets.tent()
        f = tent.dynamics
        worst = 0
        for i in range(16):
            seg, n = (F(i, 16), F(i + 1, 16)), 0
            while seg != (0, 1):
                seg = naive_image(f.points, *seg)
                n += 1
            worst = max(worst, n)
        assert worst <= 5
        r = check_g_transitivity(tent, F(1, 16), worst, 0)
        assert r.passed

    def test_rational_rotation_fails(self):
        sys = presets.ex62(presets.EX62_ANGLES[0])
        r = check_g_transitivity(sys, F(1, 144), 4, 3)
        assert not r.passed and r.unreached is not None

    def test_whole_space_cell(self):
        r = check_g_transitivity(presets.ex33(), 4, 1, 0)
        assert r.passed and r.coverage[(0, 0)] == (1, ())

    def test_delta_must_divide(self):
        with pytest.raises(ValueError):
            check_g_transitivity(presets.tent(), F(1, 3) + F(1, 100), 4, 0)

    def test_monotone_in_horizon_and_radius(self):
        sys = presets.zigzag_z2()
        assert check_g_transitivity(sys, F(1, 16), 5, 1).passed
        assert check_g_transitivity(sys, F(1, 16), 8, 2).passed

    def test_workers(self):
        sys = presets.zigzag_z2()
        a = check_g_transitivity(sys, F(1, 16), 6, 1, workers=1)
        b = check_g_transitivity(sys, F(1, 16), 6, 1, workers=3)
        assert a == b


class TestTransitivePoint:
    def test_golden_rotation(self):
        p = find_g_transitive_point(presets.ex62(), F(1, 100), 1, 50)
        assert p is not None and p.max_gap <= F(2, 100)

    def test_rational_rotation_none(self):
        sys = GSystem(CircleSpace(), Rotation(0), GeneratorSet.from_maps([("g", Rotation(F(1, 5)))]))
        assert find_g_transitive_point(sys, F(1, 100), 3, 10) is None

    def test_full_diameter(self):
        p = find_g_transitive_point(presets.tent(), 1, 1, 0)
        assert p is not None and p.point == F(1, 2)


class TestRecurrence:
    def test_tent_fixed_point(self):
        v = check_g_recurrent(presets.tent(), F(2, 3), F(1, 1000), 4, 0)
        assert v.recurrent and v.n == 1 and v.word == () and v.distance == 0

    def test_rotation_returns(self):
        v = check_g_recurrent(presets.ex62(), F(1, 3), F(1, 100), 1, 40)
        assert v.recurrent

    def test_contraction_escapes(self):
        f = PLMap([(0, 0), (1, F(1, 2))])
        sys = GSystem(IntervalSpace(0, 1), f)
        v = check_g_recurrent(sys, 1, F(1, 10), 5, 0)
        assert not v.recurrent and v.distance == F(1, 2)


class TestFixedPoints:
    def test_zigzag(self):
        assert check_common_fixed_point(presets.zigzag_z2()) == [0]

    def test_ex62_none(self):
        assert check_common_fixed_point(presets.ex62()) == []

    def test_tent(self):
        assert check_common_fixed_point(presets.tent()) == [0, F(2, 3)]

    def test_ex42_none(self):
        # g1 fixes [-2, 0] while g2 fixes only 2/3
        assert check_common_fixed_point(presets.ex42()) == []

    def test_common_points_fixed_by_ball(self):
        sys = presets.zigzag_z2()
        for x in check_common_fixed_point(sys):
            assert sys.f(x) == x
            assert all(e(x) == x for e in sys.ball(4))

    def test_tent_periodic(self):
        items = check_periodic_common_point(presets.tent(), 2)
        assert (F(2, 5), 2) in items and (F(4, 5), 2) in items
        assert (F(2, 3), 1) in items and (0, 1) in items
        assert presets.tent().f(F(2, 5)) == F(4, 5)

    def test_zigzag_period_one(self):
        assert check_periodic_common_point(presets.zigzag_z2(), 1) == [(0, 1)]

    def test_identity_dynamics(self):
        sys = GSystem(IntervalSpace(0, 1), identity(0, 1))
        assert check_periodic_common_point(sys, 3) == [((0, 1), 1)]


def test_hypothesis_report_zigzag():
    rep = hypothesis_report(presets.zigzag_z2(), F(1, 16), 20, 2, recurrence_points=[0])
    assert rep.hypotheses_hold
    assert rep.recurrence[0].recurrent


def test_circle_metric_matches_oracle():
    for a in range(-7, 15):
        for b in range(0, 9):
            x, y = F(a, 7), F(b, 9)
            assert circle_distance(x, y) == naive_circle_distance(x, y)
