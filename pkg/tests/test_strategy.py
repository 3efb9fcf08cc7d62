from fractions import Fraction

import pytest

from cuspgame import (ProductBall, StrategyConstants, StrategyState,
                      classify_ball, legal_alice_potential, setup_constants,
                      update_b_prime)
from cuspgame.strategy import candidate_class
from cuspgame.verify import (demo_initial_ball, demo_reference_constants,
                             play_demo_game)

F = Fraction


def origin_ball(radius=F(1, 10)):
    return ProductBall(F(3, 4), (F(0), F(0), F(0)), F(radius))


def test_setup_constants_certified():
    c = setup_constants(origin_ball(), F(1, 2), F(1))
    assert c.mode == "certified"
    assert c.kappa == 3
    assert c.R == 2 ** 20
    assert c.epsilon == F(c.R) ** -24 * F(1, 10)
    assert c.rho0 == F(1, 10)


def test_setup_constants_demo_needs_parameters():
    with pytest.raises(ValueError):
        setup_constants(origin_ball(), F(1, 2), F(1), mode="demo")
    c = setup_constants(origin_ball(), F(1, 2), F(1), mode="demo",
                        R=16, epsilon=F(1, 2 ** 20))
    assert (c.R, c.epsilon, c.mode) == (16, F(1, 2 ** 20), "demo")


def test_setup_constants_rejects_fat_ball():
    with pytest.raises(ValueError):
        setup_constants(origin_ball(radius=F(1, 4)), F(1, 2), F(1))


def test_constants_validation():
    with pytest.raises(ValueError):
        StrategyConstants(3, 16, F(1, 2 ** 20), F(1, 10), F(1, 2), F(1), "x")
    with pytest.raises(ValueError):
        # R * beta <= 1
        StrategyConstants(3, 2, F(1, 2 ** 20), F(1, 10), F(1, 2), F(1), "demo")


def test_constants_json_roundtrip():
    c = demo_reference_constants()
    assert StrategyConstants.from_json(c.to_json()) == c


def test_height_ladder_ratio():
    c = demo_reference_constants()
    assert c.H(1) == 20 * c.epsilon * c.kappa / c.rho0 * c.R
    for n in range(1, 6):
        assert c.H(n + 1) == c.R * c.H(n)


def test_classify_ball_windows():
    c = demo_reference_constants()
    rho0 = c.rho0
    assert classify_ball(origin_ball(rho0), c) == 0
    assert classify_ball(origin_ball(rho0 * F(3, 4)), c) == 0
    assert classify_ball(origin_ball(rho0 / 16), c) == 1
    assert classify_ball(origin_ball(rho0 / 20), c) == 1
    assert classify_ball(origin_ball(rho0 / 256), c) == 2
    # the gap between windows and anything above rho0 classify to None
    assert classify_ball(origin_ball(rho0 / 4), c) is None
    assert classify_ball(origin_ball(2 * rho0), c) is None


def test_candidate_class_validation():
    c = demo_reference_constants()
    with pytest.raises(ValueError):
        candidate_class(origin_ball(), 0, 1, c)
    with pytest.raises(ValueError):
        candidate_class(origin_ball(), 1, 0, c)


def test_update_b_prime_requires_recorded_parent():
    c = demo_reference_constants()
    state = StrategyState(c, demo_initial_ball())
    stray = origin_ball(c.rho0 / 16)  # not inside the initial ball
    assert not update_b_prime(state, stray, 1)
    with pytest.raises(ValueError):
        update_b_prime(state, stray, 0)


def test_demo_game_audit_structure():
    transcript, state = play_demo_game(rounds=13)
    audit = state.audit
    assert len(audit) == 13
    # radius halves each round, so window n is first entered at round 4n
    firsts = [rec for rec in audit if rec["first_entry"]]
    assert [rec["n"] for rec in firsts] == [1, 2, 3]
    assert all(rec["in_b_prime"] for rec in firsts)
    for rec in firsts:
        n = rec["n"]
        assert sorted(map(int, rec["candidates"])) == list(range(1, n + 1))
        nonzero = sum(1 for c in rec["candidates"].values() if c)
        assert len(rec["planes"]) == nonzero
    # chain bookkeeping matches the audit trail
    assert sorted(state.b_prime) == [0, 1, 2, 3]


def test_demo_game_families_are_legal():
    transcript, state = play_demo_game(rounds=13)
    c = state.constants
    for ball, fam in zip(transcript.bob_balls, transcript.alice_moves):
        assert legal_alice_potential(ball, fam, c.beta, c.gamma)
