from fractions import Fraction

import pytest

from cuspgame import (GameKind, GameTranscript, HyperplaneNbhd, IllegalMove,
                      ProductBall, Verdict, adjudicate_potential,
                      legal_alice_potential, legal_bob_potential, run_game)

F = Fraction


def ball(lam="3/4", center=("0", "0", "0"), radius="1/10"):
    return ProductBall(F(lam), tuple(F(c) for c in center), F(radius))


def test_ball_validation():
    with pytest.raises(ValueError):
        ProductBall(F(3, 4), (F(0), F(0), F(0)), F(0))
    with pytest.raises(ValueError):
        ProductBall(F(1, 2), (F(0), F(0), F(0)), F(1, 10))  # leaves the strip
    with pytest.raises(ValueError):
        ProductBall(F(9, 10), (F(0), F(0), F(0)), F(1, 5))


def test_ball_containment_product_metric():
    outer = ball(radius="1/10")
    inner = ball(center=("1/20", "0", "0"), radius="1/20")
    assert outer.contains(inner)
    # lambda offset counts against the same gap
    shifted = ProductBall(F(3, 4) + F(1, 20), (F(0),) * 3, F(1, 20))
    assert outer.contains(shifted)
    too_far = ProductBall(F(3, 4) + F(1, 19), (F(0),) * 3, F(1, 20))
    assert not outer.contains(too_far)
    assert not inner.contains(outer)


def test_contains_point_boundary_closed():
    b = ball()
    assert b.contains_point(F(3, 4), (F(1, 10), F(0), F(0)))
    assert not b.contains_point(F(3, 4), (F(1, 10) + F(1, 1000), F(0), F(0)))


def test_slab_membership_and_disjointness():
    slab = HyperplaneNbhd((F(0), F(1), F(0), F(0)), F(0), F(1, 100))
    assert slab.contains_point(F(3, 4), (F(0), F(5), F(5)))
    assert not slab.contains_point(F(3, 4), (F(1, 100), F(0), F(0)))
    far = ball(center=("1/2", "0", "0"), radius="1/10")
    assert slab.disjoint_from(far)
    near = ball(center=("1/10", "0", "0"), radius="1/10")
    assert not slab.disjoint_from(near)


def test_slab_covers_ball():
    wide = HyperplaneNbhd((F(0), F(1), F(0), F(0)), F(0), F(1, 2))
    assert wide.covers_ball(ball(radius="1/10"))
    assert not wide.covers_ball(ball(center=("1/2", "0", "0"), radius="1/10"))


def test_alice_budget_exact_boundary():
    b = ball(radius="1/10")
    beta, gamma = F(1, 2), F(1)
    mk = lambda w: HyperplaneNbhd((F(0), F(1), F(0), F(0)), F(0), w)
    assert legal_alice_potential(b, [], beta, gamma)
    assert legal_alice_potential(b, [mk(F(1, 20))], beta, gamma)  # = budget
    assert not legal_alice_potential(b, [mk(F(1, 20)), mk(F(1, 1000))],
                                     beta, gamma)
    # fractional gamma goes through certified comparison
    assert legal_alice_potential(b, [mk(F(1, 40))], beta, F(1, 2))


def test_bob_legality():
    prev = ball(radius="1/10")
    good = ball(center=("1/20", "0", "0"), radius="1/20")
    assert legal_bob_potential(prev, good, F(1, 2))
    small = ball(radius="1/30")
    assert not legal_bob_potential(prev, small, F(1, 2))


def _const_alice(fams):
    it = iter(fams)
    return lambda t: next(it)


def _const_bob(balls):
    it = iter(balls)
    return lambda t: next(it)


def test_run_game_and_transcript_roundtrip():
    b0 = ball(radius="1/10")
    b1 = ball(center=("1/40", "0", "0"), radius="1/20")
    b2 = ball(center=("1/40", "1/80", "0"), radius="1/40")
    t = run_game(_const_alice([[], []]), _const_bob([b1, b2]), 2,
                 GameKind.POTENTIAL, {"beta": F(1, 2), "gamma": F(1)}, b0)
    assert t.bob_balls == [b0, b1, b2]
    text = t.to_jsonl()
    again = GameTranscript.from_jsonl(text)
    assert again.to_jsonl() == text


def test_run_game_rejects_illegal_bob():
    b0 = ball(radius="1/10")
    rogue = ball(center=("1/2", "0", "0"), radius="1/20")  # not nested
    with pytest.raises(IllegalMove):
        run_game(_const_alice([[]]), _const_bob([rogue]), 1,
                 GameKind.POTENTIAL, {"beta": F(1, 2), "gamma": F(1)}, b0)


def test_run_game_rejects_overwide_family():
    b0 = ball(radius="1/10")
    fat = HyperplaneNbhd((F(0), F(1), F(0), F(0)), F(0), F(1))
    with pytest.raises(IllegalMove):
        run_game(_const_alice([[fat]]), _const_bob([b0]), 1,
                 GameKind.POTENTIAL, {"beta": F(1, 2), "gamma": F(1)}, b0)


def test_adjudication():
    b0 = ball(radius="1/10")
    b1 = ball(center=("1/40", "0", "0"), radius="1/20")
    slab = HyperplaneNbhd((F(0), F(1), F(0), F(0)), F(-1, 40), F(1, 5))
    t = run_game(_const_alice([[]]), _const_bob([b1]), 1,
                 GameKind.POTENTIAL, {"beta": F(1, 2), "gamma": F(1)}, b0)
    t.alice_moves[0] = [slab]  # the final ball sits inside this slab
    assert adjudicate_potential(t, lambda lam, p: None) is Verdict.ALICE_WINS
    t.alice_moves[0] = []
    assert adjudicate_potential(t, lambda lam, p: True) is Verdict.ALICE_WINS
    assert adjudicate_potential(t, lambda lam, p: False) is Verdict.BOB_WINS_SO_FAR
    assert adjudicate_potential(t, lambda lam, p: None) is Verdict.UNDETERMINED
