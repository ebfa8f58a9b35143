import math

import pytest

from nonautodyn import build_example, induced, iterate, orbit_segment, window_compose
from nonautodyn.errors import HorizonTooLarge
from nonautodyn.space import HALF_TURN, TURN, Ball, CirclePoint, IsolatedPoint, WedgePoint
from nonautodyn.system import PeriodicSystem

E1, E2, E3 = (build_example(e) for e in ("E1", "E2", "E3"))


def test_iterate_e1_isolated_points():
    f = E1.system
    assert iterate(f, IsolatedPoint(2), 1) == IsolatedPoint(3)
    assert iterate(f, IsolatedPoint(3), 1) == IsolatedPoint(2)
    x = CirclePoint(12345)
    assert iterate(f, x, 0) is x


def test_e1_second_map_table():
    f2 = E1.system.maps[1]
    assert f2(IsolatedPoint(3)) == IsolatedPoint(3)
    assert f2(IsolatedPoint(2)) == CirclePoint(0)


def test_induced_e2_rotates_circle_a():
    g = induced(E2.system)
    x = WedgePoint("A", TURN // 7)
    y = g.maps[0](x)
    rho = (math.sqrt(5) - 1) / 2
    assert y.circle == "A"
    assert ((y.turn - x.turn) % TURN) / TURN == pytest.approx(rho, abs=1e-15)


def test_induced_e1_isolated():
    assert induced(E1.system).maps[0](IsolatedPoint(2)) == IsolatedPoint(3)


def test_induced_of_period_one_is_itself():
    rot = build_example("rotation").system
    g = induced(rot)
    for x in rot.space.sample_points(20, 0):
        assert g.maps[0](x) == rot.maps[0](x)


def test_window_compose_e2_sends_b_back_to_a():
    h = window_compose(E2.system, 2, 1)
    t = TURN // 5
    assert h(WedgePoint("B", t)) == WedgePoint("A", t)


def test_window_compose_identity_and_agreement():
    for entry in (E1, E2, E3):
        for x in entry.space.sample_points(10, 1):
            assert window_compose(entry.system, 3, 0)(x) == x
            assert window_compose(entry.system, 1, 5)(x) == iterate(entry.system, x, 5)


def test_window_compose_e3_matches_stepwise():
    f = E3.system
    h = window_compose(f, 2, 2)  # f_1 o f_2
    for x in E3.space.sample_points(10, 2):
        want = f.maps[0](f.maps[1](x))
        got = h(x)
        assert got.copy == want.copy and got.seq.window(64) == want.seq.window(64)


def test_orbit_segment_e1():
    seg = orbit_segment(E1.system, IsolatedPoint(3), 2)
    assert seg.states == [IsolatedPoint(3), IsolatedPoint(2), CirclePoint(0)]
    assert seg.check(E1.system)
    assert orbit_segment(E1.system, IsolatedPoint(3), 0).states == [IsolatedPoint(3)]


def test_orbit_segment_tangent_point_well_defined():
    a = orbit_segment(E2.system, WedgePoint("A", 0), 2).states
    b = orbit_segment(E2.system, WedgePoint("B", HALF_TURN), 2).states
    assert a == b


def test_pasting_branches_agree():
    for f in E2.system.maps:
        assert f.branch("A", 0) == f.branch("B", HALF_TURN)


def test_horizon_limit(monkeypatch):
    monkeypatch.setenv("NONAUTODYN_MAX_HORIZON", "10")
    with pytest.raises(HorizonTooLarge):
        orbit_segment(E1.system, IsolatedPoint(3), 11)


def test_periodic_indexing():
    f = E1.system
    assert f.map_at(1) is f.maps[0] and f.map_at(3) is f.maps[0] and f.map_at(4) is f.maps[1]
    with pytest.raises(ValueError):
        PeriodicSystem((), E1.space)


@pytest.mark.parametrize("entry", [E2, E3], ids=["E2", "E3"])
def test_continuity_probe(entry):
    space = entry.space
    for fi in entry.system.maps:
        for x in space.sample_points(4, 8):
            diams = []
            for j in range(2, 9):
                ys = space.sample_in_ball(Ball(x, 2.0**-j), 6, j)
                diams.append(max(space.distance(fi(x), fi(y)) for y in ys))
            assert diams[-1] <= diams[0]
            assert diams[-1] <= 2.0**-4
