import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspgame import (AvoidancePlane, BudgetExceeded, DualWitness, Intersect,
                      ProductBall, RationalDirection, candidate_directions,
                      cross_product, delta_ball_intersects, delta_membership,
                      enumerate_dual_witnesses, height, minimal_dual,
                      plane_case_ii, plane_from_dual)

from helpers import brute_minimal_dual, brute_tube_directions

F = Fraction


def ball(lam=F(3, 4), center=(F(0), F(0), F(0)), radius=F(1, 10)):
    return ProductBall(lam, tuple(F(c) for c in center), F(radius))


# ---------------------------------------------------------------------------
# tubes
# ---------------------------------------------------------------------------


def test_membership_on_axis():
    v = RationalDirection(1, 1, 2)
    assert delta_membership(F(3, 4), (F(1, 2), F(1, 2), F(5)), v, F(1, 100))


def test_membership_strict_at_boundary():
    # q = 1 makes both thresholds exactly eps; sitting on one is outside
    v = RationalDirection(0, 0, 1)
    eps = F(1, 10)
    assert not delta_membership(F(3, 4), (F(0), eps, F(0)), v, eps)
    assert delta_membership(F(3, 4), (F(0), eps - F(1, 1000), F(0)), v, eps)


def test_membership_rejects_bad_args():
    v = RationalDirection(0, 0, 1)
    with pytest.raises(ValueError):
        delta_membership(F(1, 2), (F(0),) * 3, v, F(1, 10))
    with pytest.raises(ValueError):
        delta_membership(F(3, 4), (F(0),) * 3, v, F(0))


def test_direction_validation():
    with pytest.raises(ValueError):
        RationalDirection(1, 1, 0)
    assert RationalDirection(2, 4, 3).is_primitive()
    assert not RationalDirection(2, 4, 2).is_primitive()


def test_intersection_three_values():
    v = RationalDirection(0, 0, 1)
    onb = ball(center=(F(0), F(0), F(0)))
    assert delta_ball_intersects(onb, v, F(1, 2)).status is Intersect.NONEMPTY
    far = ball(center=(F(10), F(10), F(0)))
    assert delta_ball_intersects(far, v, F(1, 100)).status is Intersect.EMPTY


def test_intersection_witness_is_member():
    v = RationalDirection(1, 1, 3)
    b = ball(center=(F(1, 3) + F(1, 50), F(1, 3) - F(1, 60), F(0)))
    res = delta_ball_intersects(b, v, F(1, 4))
    if res.status is Intersect.NONEMPTY:
        lam, pt = res.witness
        assert b.contains_point(lam, pt)
        assert delta_membership(lam, pt, v, F(1, 4))


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 30),
       st.fractions(min_value=F(1, 64), max_value=F(1, 4),
                    max_denominator=64))
@settings(max_examples=100, deadline=None)
def test_center_membership_forces_nonempty(p, r, q, eps):
    v = RationalDirection(p, r, q)
    b = ball(center=(F(p, q), F(r, q), F(1, 3)))
    if delta_membership(b.lam, b.center, v, eps):
        assert delta_ball_intersects(b, v, eps).status is Intersect.NONEMPTY


# ---------------------------------------------------------------------------
# dual witnesses
# ---------------------------------------------------------------------------


def test_witness_validation():
    with pytest.raises(ValueError):
        DualWitness(0, 0, 5)
    w = DualWitness(1, -2, 1)
    assert w.pairs_with(RationalDirection(1, 1, 1))


def _random_case(rng):
    lam = F(rng.randrange(26, 46), 48)
    rho = F(rng.randrange(1, 40), 1000)
    center = tuple(F(rng.randrange(-200, 201), 100) for _ in range(3))
    q = rng.randrange(1, 201)
    p = rng.randrange(-2 * q, 2 * q + 1)
    r = rng.randrange(-2 * q, 2 * q + 1)
    g = math.gcd(math.gcd(abs(p), abs(r)), q)
    return ball(lam, center, rho), RationalDirection(p // g, r // g, q // g)


def test_minimal_dual_matches_brute_force():
    rng = random.Random(7)
    for _ in range(120):
        b, v = _random_case(rng)
        assert minimal_dual(b, v) == brute_minimal_dual(b, v)


def test_minimal_dual_tiebreak_prefers_negative_a_side():
    # for v = (0, 0, 1) every (a, b, 0) pairs; the key picks (0, -1, 0)
    w = minimal_dual(ball(), RationalDirection(0, 0, 1))
    assert (w.a, w.b, w.c) == (0, -1, 0)


def test_minimal_dual_large_q_fast():
    b = ball(center=(F(1, 7), F(2, 7), F(1, 3)))
    q = 2 ** 40 + 15
    v = RationalDirection(3, 7, q)
    w = minimal_dual(b, v)
    assert w.pairs_with(v)
    assert height(b, v) >= q


def test_enumerate_contains_minimum():
    rng = random.Random(11)
    for _ in range(25):
        b, v = _random_case(rng)
        ws = enumerate_dual_witnesses(b, v)
        assert minimal_dual(b, v) in ws
        assert all(w.pairs_with(v) for w in ws)
        assert ws == sorted(ws, key=lambda w: (w.a, w.b))


def test_height_bounds_lq():
    rng = random.Random(13)
    for _ in range(50):
        b, v = _random_case(rng)
        h = height(b, v)
        assert h >= v.q
        # h <= q^(1+lam) via an exact power comparison
        n, d = (1 + b.lam).numerator, (1 + b.lam).denominator
        assert h ** d <= F(v.q) ** n


# ---------------------------------------------------------------------------
# planes
# ---------------------------------------------------------------------------


def test_cross_product_example():
    v1, v2 = RationalDirection(1, 0, 2), RationalDirection(0, 1, 2)
    w = cross_product(v1, v2)
    assert (w.a, w.b, w.c) == (-2, -2, 1)
    plane = plane_from_dual(w)
    assert plane.value_at((F(1, 2), F(0), F(9))) == 0
    assert plane.value_at((F(0), F(1, 2), F(-3))) == 0


def test_case_ii_plane():
    plane = plane_case_ii(RationalDirection(1, 1, 2), F(0))
    assert plane.value_at((F(1, 2), F(7), F(0))) == 0
    assert plane.normal == (1, 0, 0)


def test_plane_serialization_roundtrip():
    p = AvoidancePlane((F(2), F(-3), F(0)), F(1, 7))
    assert AvoidancePlane.from_json(p.to_json()) == p


# ---------------------------------------------------------------------------
# direction scans
# ---------------------------------------------------------------------------


def test_candidate_directions_vs_oracle():
    rng = random.Random(17)
    eps = F(1, 32)
    for _ in range(15):
        lam = F(rng.randrange(26, 46), 48)
        center = tuple(F(rng.randrange(-40, 41), 40) for _ in range(3))
        b = ball(lam, center, F(1, 50))
        got = set((v.p, v.r, v.q) for v in candidate_directions(b, 1, 12, eps))
        sup = set((v.p, v.r, v.q) for v in brute_tube_directions(b, 12, eps))
        assert got <= sup
        for t in sup - got:
            v = RationalDirection(*t)
            assert delta_ball_intersects(b, v, eps).status is Intersect.EMPTY


def test_candidate_directions_finds_planted():
    q = 1_500_007
    p, r = 123_457, 987_643
    g = math.gcd(math.gcd(p, r), q)
    assert g == 1
    b = ball(center=(F(p, q), F(r, q), F(0)), radius=F(1, 10 ** 9))
    found = candidate_directions(b, q - 5, q + 5, F(1, 2 ** 30),
                                 budget=2 * 10 ** 6)
    assert any((v.p, v.r, v.q) == (p, r, q) for v in found)


def test_candidate_directions_budget():
    with pytest.raises(BudgetExceeded):
        candidate_directions(ball(), 1, 10 ** 8, F(1, 2 ** 20), budget=10 ** 6)


def test_candidate_directions_early_stop():
    b = ball(center=(F(0), F(0), F(0)))
    got = candidate_directions(b, 1, 50, F(1, 4),
                               stop_when=lambda found: len(found) >= 3)
    assert len(got) == 3
    full = candidate_directions(b, 1, 50, F(1, 4))
    assert got == full[:3]
