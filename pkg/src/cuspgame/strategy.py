"""The winning strategy for the hyperplane potential game.

The strategy tracks a scale ladder H_n = 20*eps*kappa/rho0 * R^n.  When
Bob's ball first reaches the n-th radius window and the ball is "clean"
(its tube-avoidance chain is intact), Alice thickens one avoidance plane
per scale offset k and plays the family; otherwise she plays the empty
family, which is always legal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from .certarith import (CertInterval, Cmp, PrecisionExhausted, decide,
                        floor_log, format_rational, log_interval,
                        parse_rational, pow_real)
from .game import HyperplaneNbhd, ProductBall
from .geometry import (AvoidancePlane, Intersect, RationalDirection,
                       candidate_directions, cross_product,
                       delta_ball_intersects, height, plane_case_ii,
                       plane_from_dual)

ONE = Fraction(1)


@dataclass(frozen=True)
class StrategyConstants:
    """Fixed parameters of one strategy instance."""

    kappa: int
    R: int
    epsilon: Fraction
    rho0: Fraction
    beta: Fraction
    gamma: Fraction
    mode: str  # "certified" or "demo"

    def __post_init__(self) -> None:
        if self.mode not in ("certified", "demo"):
            raise ValueError("mode must be 'certified' or 'demo'")
        if not (0 < self.beta < 1 and self.gamma > 0):
            raise ValueError("need beta in (0,1) and gamma > 0")
        if self.R * self.beta <= 1:
            raise ValueError("need R > 1/beta")
        if self.epsilon <= 0 or self.rho0 <= 0:
            raise ValueError("need positive epsilon and rho0")

    def H(self, n: int) -> Fraction:
        """The n-th height threshold 20*eps*kappa/rho0 * R^n."""
        return 20 * self.epsilon * self.kappa / self.rho0 * Fraction(self.R) ** n

    def slab_width(self, n: int, k: int) -> Fraction:
        return 2 * self.rho0 * Fraction(self.R) ** (-(n + k))

    def to_json(self) -> dict:
        return {
            "kappa": self.kappa,
            "R": self.R,
            "epsilon": format_rational(self.epsilon),
            "rho0": format_rational(self.rho0),
            "beta": format_rational(self.beta),
            "gamma": format_rational(self.gamma),
            "mode": self.mode,
        }

    @staticmethod
    def from_json(d: dict) -> "StrategyConstants":
        return StrategyConstants(
            int(d["kappa"]), int(d["R"]), parse_rational(d["epsilon"]),
            parse_rational(d["rho0"]), parse_rational(d["beta"]),
            parse_rational(d["gamma"]), d["mode"])


def _kappa_for(initial: ProductBall) -> int:
    bound = max(abs(c) for c in initial.center) + initial.radius
    # smallest integer kappa > 2 with kappa - 1 >= sup-norm bound
    return max(3, math.ceil(bound + 1))


def _r_damping_ok(R: int) -> bool:
    """Certified check of sqrt(1/R) * log(R^4) <= 1."""
    c = decide(lambda bits: pow_real(R, Fraction(-1, 2), bits)
               * log_interval(Fraction(R) ** 4, bits),
               lambda bits: CertInterval.from_rational(1, bits))
    return c is Cmp.LESS


def _r_budget_ok(R: int, beta: Fraction, gamma: Fraction) -> bool:
    """(R^gamma - 1)^(-1) <= (beta^2/2)^gamma."""
    if gamma.denominator == 1:
        g = gamma.numerator
        return 2 ** g <= (Fraction(R) ** g - 1) * (beta * beta) ** g
    c = decide(lambda bits: CertInterval.from_rational(1, bits)
               / (pow_real(R, gamma, bits) - 1),
               lambda bits: pow_real(beta * beta / 2, gamma, bits))
    return c is Cmp.LESS


def setup_constants(initial: ProductBall, beta: Fraction, gamma: Fraction,
                    mode: str = "certified", R: Optional[int] = None,
                    epsilon: Optional[Fraction] = None) -> StrategyConstants:
    """Derive (certified) or accept (demo) the strategy parameters."""
    beta, gamma = Fraction(beta), Fraction(gamma)
    rho0 = initial.radius
    if rho0 >= Fraction(1, 4):
        raise ValueError("initial radius must be below 1/4")
    kappa = _kappa_for(initial)
    if mode == "demo":
        if R is None or epsilon is None:
            raise ValueError("demo mode needs explicit R and epsilon")
        return StrategyConstants(kappa, int(R), Fraction(epsilon), rho0,
                                 beta, gamma, "demo")
    if mode != "certified":
        raise ValueError("mode must be 'certified' or 'demo'")
    floor_r = max(100 / beta, 10_000 * Fraction(kappa) ** 4)
    r = 1
    while r < floor_r:
        r *= 2
    while not (_r_damping_ok(r) and _r_budget_ok(r, beta, gamma)):
        r *= 2
    return StrategyConstants(kappa, r, Fraction(r) ** -24 * rho0, rho0,
                             beta, gamma, "certified")


def classify_ball(ball: ProductBall, constants: StrategyConstants) -> Optional[int]:
    """The window index n with beta*R^-n*rho0 < rho <= R^-n*rho0, if any."""
    rho = ball.radius
    if rho > constants.rho0:
        return None
    t = constants.rho0 / rho  # >= 1
    n = floor_log(t, Fraction(constants.R))
    if constants.beta * t < Fraction(constants.R) ** n:
        return n
    return None


# ---------------------------------------------------------------------------
# Candidate classes and avoidance planes
# ---------------------------------------------------------------------------


def _root_range(h: Fraction, lam: Fraction) -> Tuple[Fraction, Fraction]:
    """Certified outward bounds for h^(1/(1+lambda))."""
    iv = pow_real(h, 1 / (1 + lam), 128)
    return iv.lo_fraction(), iv.hi_fraction()


def _class_q_range(ball: ProductBall, n: int, k: int,
                   constants: StrategyConstants) -> Tuple[Fraction, Fraction]:
    """q-window of the k-th candidate class at scale n (outward bounds)."""
    r_pow = Fraction(constants.R)
    lo, hi = _root_range(constants.H(n), ball.lam)
    if k == 1:
        return lo, hi * r_pow ** 20
    return lo * r_pow ** (2 * k + 16), hi * r_pow ** (2 * k + 18)


def candidate_class(ball: ProductBall, n: int, k: int,
                    constants: StrategyConstants,
                    budget: int = 10 ** 6) -> List[RationalDirection]:
    """Ball-relevant directions of the k-th class at scale n.

    Directions whose tube is certifiably disjoint from the ball are
    omitted: only those can constrain the ball, and the full class is
    infinite (heights depend on (p, r) only modulo q).  Each returned v
    passes the exact height-window test H_n <= H(v) <= 3*H_{n+1}.
    """
    if k < 1 or n < 1:
        raise ValueError("need n >= 1 and k >= 1")
    q_lo, q_hi = _class_q_range(ball, n, k, constants)
    q_hi = min(q_hi, 3 * constants.H(n + 1))  # heights dominate q
    if q_hi < q_lo:
        return []
    h_lo, h_hi = constants.H(n), 3 * constants.H(n + 1)
    out = []
    for v in candidate_directions(ball, q_lo, q_hi, constants.epsilon, budget):
        h = height(ball, v)
        if h_lo <= h <= h_hi:
            out.append(v)
    return out


def _select_q_range(ball: ProductBall, n: int, k: int,
                    constants: StrategyConstants) -> Tuple[Fraction, Fraction]:
    """Widened q-window used for plane selection at scale n, offset k."""
    r_pow = Fraction(constants.R)
    lo, hi = _root_range(constants.H(n + k), ball.lam)
    if k == 1:
        q_lo, q_hi = lo / 3, 3 * hi * r_pow ** 20
    else:
        q_lo = lo * r_pow ** (2 * k + 16) / 3
        q_hi = 3 * hi * r_pow ** (2 * k + 18)
    # any qualifying direction of a depth-(n+k) sub-ball has height, and
    # hence q, at most 3*H_{n+k+1}
    return q_lo, min(q_hi, 3 * constants.H(n + k + 1))


def _independent(v1: RationalDirection, v2: RationalDirection) -> bool:
    return (v1.r * v2.q - v1.q * v2.r, v1.q * v2.p - v1.p * v2.q,
            v1.p * v2.r - v1.r * v2.p) != (0, 0, 0)


def select_plane(ball: ProductBall, n: int, k: int,
                 constants: StrategyConstants,
                 budget: int = 10 ** 6) -> Optional[AvoidancePlane]:
    """Avoidance plane through every direction the k-th window can offer."""
    return _select_plane_info(ball, n, k, constants, budget)[0]


def _select_plane_info(ball: ProductBall, n: int, k: int,
                       constants: StrategyConstants,
                       budget: int) -> Tuple[Optional[AvoidancePlane], int]:
    q_lo, q_hi = _select_q_range(ball, n, k, constants)
    if q_hi < q_lo:
        return None, 0
    # two independent directions already pin the plane; stop the scan there
    def saturated(found: List[RationalDirection]) -> bool:
        return len(found) >= 2 and _independent(found[0], found[-1])

    cands = candidate_directions(ball, q_lo, q_hi, constants.epsilon, budget,
                                 stop_when=saturated)
    if not cands:
        return None, 0
    v1 = cands[0]
    v2 = next((v for v in cands[1:] if _independent(v1, v)), None)
    if v2 is None:
        # all candidates are +-v1: a single direction spans the window
        return plane_case_ii(v1, ball.center[2]), len(cands)
    w = cross_product(v1, v2)
    if w.a == 0 and w.b == 0:
        raise RuntimeError("degenerate direction pair in plane selection")
    return plane_from_dual(w), len(cands)


# ---------------------------------------------------------------------------
# Strategy state and per-round move
# ---------------------------------------------------------------------------


@dataclass
class StrategyState:
    constants: StrategyConstants
    initial: ProductBall
    budget: int = 10 ** 6
    seen_n: Set[int] = field(default_factory=set)
    b_prime: Dict[int, List[ProductBall]] = field(default_factory=dict)
    audit: List[dict] = field(default_factory=list)
    round_no: int = 0

    def __post_init__(self) -> None:
        self.b_prime.setdefault(0, [self.initial])


def update_b_prime(state: StrategyState, ball: ProductBall, n: int) -> bool:
    """Avoidance-chain membership at scale n, decided conservatively.

    Requires a recorded clean parent one scale up and certified emptiness
    of every height-window tube against the ball; Unknown disqualifies.
    """
    if n < 1:
        raise ValueError("chain updates start at n = 1")
    c = state.constants
    if not any(parent.contains(ball) for parent in state.b_prime.get(n - 1, [])):
        return False
    lam = ball.lam
    q_lo, _ = _root_range(c.H(n), lam)
    q_hi = 3 * c.H(n + 1)
    if q_hi < q_lo:
        return True
    h_lo, h_hi = c.H(n), 3 * c.H(n + 1)
    for v in candidate_directions(ball, q_lo, q_hi, c.epsilon, state.budget):
        h = height(ball, v)
        if h_lo <= h <= h_hi:
            # a height-window tube is not certifiably disjoint
            return False
    return True


def alice_move(state: StrategyState, ball: ProductBall) -> List[HyperplaneNbhd]:
    """One strategy move; returns the (possibly empty) slab family."""
    c = state.constants
    rec: dict = {"round": state.round_no, "n": None, "first_entry": False,
                 "in_b_prime": None, "candidates": {}, "planes": []}
    state.round_no += 1
    n = classify_ball(ball, c)
    rec["n"] = n
    if n is None or n == 0 or n in state.seen_n:
        state.audit.append(rec)
        return []
    state.seen_n.add(n)
    rec["first_entry"] = True
    ok = update_b_prime(state, ball, n)
    rec["in_b_prime"] = ok
    if not ok:
        state.audit.append(rec)
        return []
    state.b_prime.setdefault(n, []).append(ball)
    family = []
    for k in range(1, n + 1):
        plane, ncand = _select_plane_info(ball, n, k, c, state.budget)
        rec["candidates"][str(k)] = ncand
        if plane is not None:
            slab = plane.thickened(c.slab_width(n, k))
            rec["planes"].append({"k": k, **slab.to_json()})
            family.append(slab)
    state.audit.append(rec)
    return family


def make_alice(state: StrategyState):
    """Adapter for the game loop: transcript -> Alice family."""

    def alice(transcript) -> List[HyperplaneNbhd]:
        return alice_move(state, transcript.bob_balls[-1])

    return alice
