import numpy as np
import pytest

from nonautodyn import DetectorParams, build_example, induced, iterate
from nonautodyn import detect as dt
from nonautodyn.hitting import HittingSet, classify
from nonautodyn.space import Ball, CirclePoint, Entourage, FiniteCover, IsolatedPoint, WedgePoint, cylinder_cover, lebesgue_radius

E1, E2, E3, E4 = (build_example(e) for e in ("E1", "E2", "E3", "E4"))
IDENTITY = build_example("identity-circle")
ODOMETER = build_example("odometer")
STURMIAN = build_example("sturmian-shift")


def _point_in(space, copy, seed=0):
    return next(x for x in space.sample_points(20, seed) if x.copy == copy)


# -- separation sets --------------------------------------------------------


def test_b_copy_cylinder_separates():
    x = _point_in(E3.space, "b")
    U = Ball(x, 2.0**-5)  # the depth-6 cylinder of x
    S = dt.separation_hitting_set(E3.system, U, Entourage(0.5), DetectorParams(horizon=2000))
    assert len(S) > 0


def test_a_copy_ball_never_separates():
    x = _point_in(E3.space, "a")
    S = dt.separation_hitting_set(E3.system, Ball(x, 2.0**-6), Entourage(0.5), DetectorParams(horizon=2000))
    assert len(S) == 0
    # h is not an isometry, so separations may grow past 2^-6, but never to 1/2
    assert S.info["max_value"] < 0.5


def test_identity_never_separates():
    U = Ball(CirclePoint(0), 0.04)  # diameter below eps_D
    S = dt.separation_hitting_set(IDENTITY.system, U, Entourage(0.1), DetectorParams(horizon=200))
    assert len(S) == 0 and S.info["max_growth"] == 0.0


@pytest.mark.parametrize("entry", [E2, E3], ids=["E2", "E3"])
def test_witnesses_reproduce(entry):
    sys_ = entry.system
    P = DetectorParams(horizon=300, net_eps=0.5 if entry is E2 else 2.0**-3, separation_eps=0.05 if entry is E2 else 0.5)
    regions, sets = dt.separation_family(sys_, P)
    checked = 0
    for S in sets:
        for n in S.members[:5]:
            w = S.witness(int(n))
            d = entry.space.distance(iterate(sys_, w.x, int(n)), iterate(sys_, w.y, int(n)))
            if entry is E3:
                assert d == w.value
            else:
                assert abs(d - w.value) <= 1e-9
            checked += 1
    assert checked > 0


def test_monotone_in_horizon_and_samples():
    x = _point_in(E3.space, "b", 3)
    U, D = Ball(x, 2.0**-4), Entourage(0.5)
    small = dt.separation_hitting_set(E3.system, U, D, DetectorParams(horizon=400, pair_samples=4))
    big_n = dt.separation_hitting_set(E3.system, U, D, DetectorParams(horizon=800, pair_samples=4))
    big_s = dt.separation_hitting_set(E3.system, U, D, DetectorParams(horizon=400, pair_samples=8))
    assert set(small.members) <= set(big_n.members)
    # sample draws are prefix-stable, so more samples means a superset of pairs
    assert set(small.members) <= set(big_s.members)


# -- sensitivity ------------------------------------------------------------


def test_b_copy_plain_sensitivity():
    v = dt.sensitivity_verdict(E3.system, "plain", DetectorParams(horizon=500, net_eps=2.0**-4, region_component="b"))
    assert v.outcome == dt.FOR
    assert all(w["value"] >= 0.5 for w in v.certificate["witnesses"])


def test_sensitivity_modes_validate():
    with pytest.raises(ValueError):
        dt.sensitivity_verdict(E3.system, "weird", DetectorParams())


def test_sensitive_implies_eventually_sensitive():
    P = DetectorParams(horizon=300, net_eps=2.0**-4, region_component="b", basis_depth=4, starts=3)
    assert dt.sensitivity_verdict(E3.system, "plain", P).outcome == dt.FOR
    ev = dt.eventual_sensitivity_check(E3.system, P)
    assert ev.outcome == dt.FOR
    # the witnesses come from the n = 0 specialisation
    assert all(w["n"] == 0 for p in ev.certificate["points"] for w in p["witnesses"])


# -- equicontinuity ---------------------------------------------------------


def test_e2_isometry_keeps_delta():
    x = E2.space.sample_points(1, 3)[0]
    v = dt.equicontinuity_at(E2.system, x, Entourage(0.1), DetectorParams(horizon=1000))
    assert v.outcome == dt.FOR and v.certificate["best_delta"] == 0.1


def test_b_copy_not_equicontinuous():
    x = _point_in(E3.space, "b")
    v = dt.equicontinuity_at(E3.system, x, Entourage(0.25), DetectorParams(horizon=1000))
    assert v.outcome == dt.AGAINST
    assert len(v.certificate["failed"]) == DetectorParams().basis_depth + 1


def test_identity_delta_equals_eps():
    v = dt.equicontinuity_at(IDENTITY.system, CirclePoint(0), Entourage(0.2), DetectorParams(horizon=50))
    assert v.certificate["best_delta"] == 0.2


def test_odometer_stability_set_is_everything():
    x = ODOMETER.space.sample_points(1, 0)[0]
    J = dt.stability_set(ODOMETER.system, Ball(x, 2.0**-3), Entourage(2.0**-2), DetectorParams(horizon=500), 1)
    assert len(J) == 500 and J.gaps().size == 0
    v = dt.syndetic_equicontinuity_at(ODOMETER.system, x, Entourage(2.0**-2), DetectorParams(horizon=500))
    assert v.outcome == dt.FOR and v.certificate["measured_bound"] == 0


def test_chacon_copy_not_syndetically_equicontinuous():
    x = _point_in(E4.space, "b")
    v = dt.syndetic_equicontinuity_at(E4.system, x, Entourage(0.25), DetectorParams(horizon=2000, basis_depth=5))
    assert v.outcome == dt.AGAINST


# -- eventual sensitivity ---------------------------------------------------


def test_isometries_are_not_eventually_sensitive():
    P = DetectorParams(horizon=300, separation_eps=0.1, basis_depth=6, starts=3)
    assert dt.eventual_sensitivity_check(E2.system, P).outcome == dt.AGAINST
    assert dt.eventual_sensitivity_check(IDENTITY.system, P).outcome == dt.AGAINST


# -- cover detectors --------------------------------------------------------


def test_cover_separation_on_b_copy():
    x = _point_in(E3.space, "b")
    cover = cylinder_cover(E3.space, 1)
    S = dt.cover_hitting_set(E3.system, Ball(x, 2.0**-5), cover, DetectorParams(horizon=500))
    assert len(S) > 0


def test_single_ball_cover_never_separates():
    cover = FiniteCover([Ball(CirclePoint(0), 10.0)])
    S = dt.cover_hitting_set(build_example("rotation").system, Ball(CirclePoint(0), 1.0), cover,
                             DetectorParams(horizon=200))
    assert len(S) == 0


def test_odometer_fine_cover_below_lebesgue_radius():
    space = ODOMETER.space
    cover = cylinder_cover(space, 4)
    samples = space.sample_points(64, 0)
    r = lebesgue_radius(space, cover, samples)
    x = samples[0]
    S = dt.cover_hitting_set(ODOMETER.system, Ball(x, r / 2), cover, DetectorParams(horizon=500))
    assert len(S) == 0


def test_hausdorff_verdicts():
    Pb = DetectorParams(horizon=500, net_eps=2.0**-4, region_component="b")
    assert dt.hausdorff_sensitivity_verdict(E3.system, "plain", Pb).outcome == dt.FOR
    P2 = DetectorParams(horizon=500, net_eps=0.1, cover_eps=0.5)
    v = dt.hausdorff_sensitivity_verdict(E2.system, "plain", P2)
    assert v.outcome == dt.AGAINST


def test_thick_hausdorff_on_chacon_copy():
    P = DetectorParams(horizon=2000, net_eps=2.0**-4, region_component="b", pair_samples=6)
    v = dt.hausdorff_sensitivity_verdict(E4.system, "thick", P)
    assert v.outcome == dt.FOR


# -- equicontinuity pairs ---------------------------------------------------


def test_eqp_identity():
    x, y = CirclePoint(0), CirclePoint.from_theta(1.0)
    v = dt.eqp_check(IDENTITY.system, x, y, Ball(y, 0.5), DetectorParams(horizon=50, basis_depth=3))
    assert v.outcome == dt.FOR


def test_eqp_copies():
    P = DetectorParams(horizon=300, basis_depth=8)
    xa, ya = _point_in(E3.space, "a", 0), _point_in(E3.space, "a", 1)
    assert dt.eqp_check(E3.system, xa, ya, Ball(ya, 2.0**-4), P).outcome == dt.FOR
    xb, yb = _point_in(E3.space, "b", 0), _point_in(E3.space, "b", 1)
    v = dt.eqp_check(E3.system, xb, yb, Ball(yb, 2.0**-4), P)
    assert v.outcome == dt.AGAINST
    assert v.certificate["splitting_neighbourhood"]["radius"] == 2.0**-4
    assert v.certificate["margin"] == 0.1


def test_eqp_requires_y_in_o():
    with pytest.raises(ValueError):
        dt.eqp_check(IDENTITY.system, CirclePoint(0), CirclePoint(0), Ball(CirclePoint.from_theta(2.0), 0.1), DetectorParams())


def test_seqp_examples():
    P = DetectorParams(horizon=500, basis_depth=4)
    x, y = ODOMETER.space.sample_points(2, 5)
    v = dt.seqp_check(ODOMETER.system, x, y, Ball(y, 2.0**-3), P)
    assert v.outcome == dt.FOR
    # with U inside O the implication holds at every time
    _, hit, inside = dt._implication_series(ODOMETER.system, Ball(y, 2.0**-5), Ball(y, 2.0**-3), Ball(y, 2.0**-3), P, 0)
    assert (~hit | inside).all()
    x, y = STURMIAN.space.sample_points(2, 5)
    v = dt.seqp_check(STURMIAN.system, x, y, Ball(y, 2.0**-3), DetectorParams(horizon=1000, basis_depth=6))
    assert v.outcome == dt.FOR
    xb, yb = _point_in(E4.space, "b", 0), _point_in(E4.space, "b", 1)
    v = dt.seqp_check(E4.system, xb, yb, Ball(yb, 2.0**-3), DetectorParams(horizon=2000, basis_depth=4, pair_times="aligned"))
    assert v.outcome == dt.AGAINST


# -- recurrence -------------------------------------------------------------


def test_visit_times_e1():
    f, g = E1.system, induced(E1.system)
    t = [Ball(IsolatedPoint(2), 0.5)]
    assert dt.visit_times(f, IsolatedPoint(3), t, 10) == [1]
    assert dt.visit_times(g, IsolatedPoint(3), t, 10**4) == [None]
    assert dt.visit_times(f, IsolatedPoint(3), [], 10) == []


def test_e2_orbit_hits_every_net_ball():
    x = WedgePoint("A", CirclePoint.from_theta(0.3).turn)
    targets = [Ball(c, 0.05) for c in E2.space.epsilon_net(0.05)]
    hits = dt.visit_times(E2.system, x, targets, 10**5)
    assert None not in hits


def test_minimality_against_for_e1_g():
    g = induced(E1.system)
    v = dt.minimality_estimate(g, DetectorParams(horizon=10**4, target_eps=0.1), starts=[IsolatedPoint(3)])
    assert v.outcome == dt.AGAINST
    assert any(m["target"] == "iso:(2,0)" for m in v.certificate["missed"])


def test_omega_rotation_full():
    rot = build_example("rotation")
    out = dt.omega_nonwandering_estimate(rot.system, CirclePoint(0), DetectorParams(horizon=10**5, target_eps=0.05))
    assert all(out["omega"]) and all(out["Omega"])


def test_omega_e1_misses_isolated_points():
    g = induced(E1.system)
    out = dt.omega_nonwandering_estimate(g, IsolatedPoint(3), DetectorParams(horizon=4000, target_eps=0.1))
    idx = {t: i for i, t in enumerate(out["targets"])}
    for t in ("iso:(2,0)", "iso:(3,0)"):
        assert out["omega"][idx[t]] == 0 and out["Omega"][idx[t]] == 0
    circle = [i for t, i in idx.items() if not t.startswith("iso")]
    assert all(out["omega"][i] for i in circle)


def test_omega_identity_is_the_ball_of_x():
    out = dt.omega_nonwandering_estimate(IDENTITY.system, CirclePoint(0), DetectorParams(horizon=100, target_eps=0.5))
    hit = [t for t, b in zip(out["targets"], out["omega"]) if b]
    # net balls overlap, so "the ball of x" is every net ball containing x
    space = IDENTITY.space
    want = [space.serialize(c) for c in space.epsilon_net(0.5) if space.distance(c, CirclePoint(0)) < 0.5]
    assert hit == want


# -- structure and reports -------------------------------------------------


def test_structural_certificates():
    assert dt.structural_certificate(E3)["holds"]
    assert dt.structural_certificate(E1) is None


def test_e2_report_row_is_info():
    P = DetectorParams(horizon=2000, net_eps=0.1, separation_eps=0.1, stability_eps=0.1, target_eps=0.1, starts=4)
    rep = dt.dichotomy_report(E2, P, rows=["sensitive-or-equicontinuous"])
    row = rep["matrix"][0]
    assert row["flag"] == "INFO"
    assert row["outcomes"] == {"sensitive": dt.AGAINST, "equicontinuous": dt.FOR}
    assert row["note"] == "hypothesis not applicable but horn satisfied anyway"
    flags = {m["property"]: m["flag"] for m in rep["manifest"]}
    assert flags["minimal"] == "CONSISTENT"


def test_unknown_report_rows():
    with pytest.raises(ValueError):
        dt.dichotomy_report(E2, DetectorParams(), rows=["nope"])


def test_translate_bound_within_m_plus_p():
    # shifting a J-set by a multiple of the period keeps it syndetic
    rng = np.random.default_rng(4)
    p = 2
    for _ in range(200):
        M = int(rng.integers(1, 12))
        N = 40 * M
        mask = np.zeros(N, bool)
        mask[:: int(rng.integers(1, M + 1))] = True
        J = HittingSet.from_mask(mask, 1)
        base = classify(J, "syndetic", M)
        m = int(rng.integers(1, 5))
        shifted = J.translate(m * p)
        c = classify(shifted, "syndetic", M + p)
        assert base.verdict == "holds" and c.verdict == "holds"
        assert c.bound <= M + p


def test_verdict_outcomes_validated():
    with pytest.raises(ValueError):
        dt.Verdict("x", "maybe")
