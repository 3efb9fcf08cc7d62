from fractions import Fraction

import pytest

from cuspgame import (BobConfig, ProductBall, RationalDirection, bob_move,
                      legal_bob_potential)

F = Fraction


def ball(center=(F(0), F(0), F(0)), radius=F(1, 10)):
    return ProductBall(F(3, 4), tuple(F(c) for c in center), F(radius))


def test_config_validation():
    with pytest.raises(ValueError):
        BobConfig("clever")
    with pytest.raises(ValueError):
        BobConfig("random", shrink=F(0))
    with pytest.raises(ValueError):
        BobConfig("random", shrink=F(3, 2))
    with pytest.raises(ValueError):
        BobConfig("greedy_cusp")  # no target
    with pytest.raises(ValueError):
        BobConfig("replay")  # no script
    assert BobConfig("random", shrink=F(1)).shrink == 1


def test_random_moves_are_legal_and_reproducible():
    cfg = BobConfig("random", seed=7)
    prev = ball()
    for rnd in range(6):
        nxt = bob_move(cfg, prev, [], rnd)
        assert legal_bob_potential(prev, nxt, cfg.shrink)
        assert bob_move(cfg, prev, [], rnd) == nxt
        prev = nxt


def test_random_seed_changes_moves():
    prev = ball()
    a = bob_move(BobConfig("random", seed=1), prev, [], 0)
    b = bob_move(BobConfig("random", seed=2), prev, [], 0)
    assert a != b


def test_greedy_decreases_target_distance():
    target = RationalDirection(0, 0, 1)
    cfg = BobConfig("greedy_cusp", target=target)

    def dist2(b):
        return b.center[0] ** 2 + b.center[1] ** 2

    prev = ball(center=(F(3, 4), F(1, 3), F(2, 3)))
    for rnd in range(5):
        nxt = bob_move(cfg, prev, [], rnd)
        assert legal_bob_potential(prev, nxt, cfg.shrink)
        assert dist2(nxt) < dist2(prev)
        assert nxt.center[2] == prev.center[2]  # greedy never moves z
        prev = nxt


def test_greedy_snaps_onto_close_target():
    target = RationalDirection(1, 2, 3)
    cfg = BobConfig("greedy_cusp", target=target)
    prev = ball(center=(F(1, 3) + F(1, 100), F(2, 3), F(0)))
    nxt = bob_move(cfg, prev, [], 0)
    assert nxt.center[:2] == (F(1, 3), F(2, 3))


def test_shrink_one_is_identity_for_greedy():
    cfg = BobConfig("greedy_cusp", target=RationalDirection(0, 0, 1),
                    shrink=F(1))
    prev = ball(center=(F(1, 2), F(0), F(0)))
    assert bob_move(cfg, prev, [], 0) == prev


def test_replay_validates_nesting():
    good = ball(center=(F(1, 40), F(0), F(0)), radius=F(1, 20))
    rogue = ball(center=(F(1, 2), F(0), F(0)), radius=F(1, 20))
    assert bob_move(BobConfig("replay", script=[good]), ball(), [], 0) == good
    with pytest.raises(ValueError):
        bob_move(BobConfig("replay", script=[rogue]), ball(), [], 0)
