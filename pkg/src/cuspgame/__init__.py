"""Exact adversarial games and certified avoidance on the weighted strip.

A library and CLI for the hyperplane potential game on
Sigma = (1/2, 1) x R^3: exact rational game mechanics, certified tube
geometry and dual witnesses, the scale-ladder winning strategy, legal
adversaries, and a lattice-dynamics view with certified systoles.
"""

from .certarith import (CertInterval, Cmp, PrecisionExhausted,
                        compare_to_power, decide, format_rational,
                        parse_rational, pow_real)
from .game import (GameKind, GameTranscript, HyperplaneNbhd, IllegalMove,
                   ProductBall, Verdict, adjudicate_potential,
                   legal_alice_potential, legal_bob_potential, run_game)
from .geometry import (AvoidancePlane, BudgetExceeded, DualWitness,
                       Intersect, IntersectResult, RationalDirection,
                       candidate_directions, cross_product,
                       delta_ball_intersects, delta_membership,
                       enumerate_dual_witnesses, height, minimal_dual,
                       plane_case_ii, plane_from_dual)
from .strategy import (StrategyConstants, StrategyState, alice_move,
                       candidate_class, classify_ball, make_alice,
                       select_plane, setup_constants, update_b_prime)
from .bob import BobConfig, bob_move, make_bob
from .lattice import (LatticeBasis, UpperUnipotent, escape_certificate,
                      flow_basis, flowed_direction_vector, shortest_vector,
                      systole_trajectory, unipotent_inverse)
from .verify import SUITES, run_suite

__version__ = "0.1.0"
