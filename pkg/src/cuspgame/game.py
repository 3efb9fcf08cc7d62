"""Move legality, transcripts and adjudication for the three ball games.

The playing field is the strip (1/2,1) x R^3 with the product metric
max(|dlambda|, euclidean distance in (x,y,z)); a closed ball is therefore
an interval times a euclidean ball with a common radius.  All legality
checks are exact rational decisions (squared-distance comparisons), so a
recorded transcript replays bit-identically.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

from .certarith import (Cmp, PrecisionExhausted, decide, format_rational,
                        parse_rational, pow_real)

Vec3 = Tuple[Fraction, Fraction, Fraction]

HALF = Fraction(1, 2)
ONE = Fraction(1)


class IllegalMove(Exception):
    """A proposed move violates the game rules; the message names the round."""


@dataclass(frozen=True)
class ProductBall:
    """Closed ball I x B in the strip, same radius on both factors."""

    lam: Fraction
    center: Vec3
    radius: Fraction

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")
        if not (HALF < self.lam - self.radius and self.lam + self.radius < ONE):
            raise ValueError("lambda-interval must stay inside (1/2, 1)")

    def contains(self, other: "ProductBall") -> bool:
        """Product-metric containment: center distance <= radius gap."""
        gap = self.radius - other.radius
        if gap < 0:
            return False
        if abs(self.lam - other.lam) > gap:
            return False
        return _dist2(self.center, other.center) <= gap * gap

    def contains_point(self, lam: Fraction, point: Vec3) -> bool:
        if abs(lam - self.lam) > self.radius:
            return False
        return _dist2(self.center, point) <= self.radius * self.radius

    def to_json(self) -> dict:
        return {
            "lambda": format_rational(self.lam),
            "center": [format_rational(c) for c in self.center],
            "radius": format_rational(self.radius),
        }

    @staticmethod
    def from_json(d: dict) -> "ProductBall":
        return ProductBall(
            parse_rational(d["lambda"]),
            tuple(parse_rational(c) for c in d["center"]),
            parse_rational(d["radius"]),
        )


def _dist2(a: Vec3, b: Vec3) -> Fraction:
    return sum((x - y) * (x - y) for x, y in zip(a, b))


@dataclass(frozen=True)
class HyperplaneNbhd:
    """Open slab {|<normal, .> + offset| < width * ||normal||} in the strip.

    normal is a (lambda, x, y, z) rational 4-vector; the strategy only
    ever emits normals with zero lambda- and z-components, for which the
    product metric and the euclidean metric agree.
    """

    normal: Tuple[Fraction, Fraction, Fraction, Fraction]
    offset: Fraction
    width: Fraction

    def __post_init__(self) -> None:
        if all(c == 0 for c in self.normal):
            raise ValueError("hyperplane normal must be nonzero")
        if self.width <= 0:
            raise ValueError("slab width must be positive")

    def _value_at(self, lam: Fraction, point: Vec3) -> Fraction:
        n = self.normal
        return n[0] * lam + n[1] * point[0] + n[2] * point[1] + n[3] * point[2] + self.offset

    def _norm2(self) -> Fraction:
        return sum(c * c for c in self.normal)

    def _spatial_norm2(self) -> Fraction:
        return sum(c * c for c in self.normal[1:])

    def contains_point(self, lam: Fraction, point: Vec3) -> bool:
        v = self._value_at(lam, point)
        return v * v < self.width * self.width * self._norm2()

    def disjoint_from(self, ball: ProductBall) -> bool:
        """Certified: the closed ball misses the open slab."""
        v = abs(self._value_at(ball.lam, ball.center))
        nl = abs(self.normal[0])
        r = ball.radius
        if nl == 0:
            # |v| >= (width + r) * ||n_s|| decided on squares
            bound = self.width + r
            return v * v >= bound * bound * self._spatial_norm2()
        # sup deviation over the ball is r*(|n_lam| + ||n_s||); compare with
        # certified intervals since two square roots are involved
        ns2 = self._spatial_norm2()
        n2 = self._norm2()
        try:
            c = decide(
                lambda bits: (pow_real(ns2, HALF, bits).scale(r) + r * nl
                              + pow_real(n2, HALF, bits).scale(self.width)),
                lambda bits: pow_real(ONE, ONE, bits).scale(v),
            )
        except PrecisionExhausted:
            return False
        return c is Cmp.LESS

    def covers_ball(self, ball: ProductBall) -> bool:
        """Certified: the closed ball lies inside the open slab."""
        v = abs(self._value_at(ball.lam, ball.center))
        nl = abs(self.normal[0])
        r = ball.radius
        if nl == 0:
            if self.width <= r:
                return False
            bound = self.width - r
            return v * v < bound * bound * self._spatial_norm2()
        ns2 = self._spatial_norm2()
        n2 = self._norm2()
        try:
            c = decide(
                lambda bits: (pow_real(ns2, HALF, bits).scale(r) + r * nl
                              + pow_real(ONE, ONE, bits).scale(v)),
                lambda bits: pow_real(n2, HALF, bits).scale(self.width),
            )
        except PrecisionExhausted:
            return False
        return c is Cmp.LESS

    def to_json(self) -> dict:
        return {
            "normal": [format_rational(c) for c in self.normal],
            "offset": format_rational(self.offset),
            "width": format_rational(self.width),
        }

    @staticmethod
    def from_json(d: dict) -> "HyperplaneNbhd":
        return HyperplaneNbhd(
            tuple(parse_rational(c) for c in d["normal"]),
            parse_rational(d["offset"]),
            parse_rational(d["width"]),
        )


# ---------------------------------------------------------------------------
# Legality predicates
# ---------------------------------------------------------------------------


def legal_alice_potential(ball: ProductBall, family: Sequence[HyperplaneNbhd],
                          beta: Fraction, gamma: Fraction) -> bool:
    """Power-budget check: sum(width_k^gamma) <= (beta * radius)^gamma."""
    if not (0 < beta < 1 and gamma > 0):
        raise ValueError("need 0 < beta < 1 and gamma > 0")
    if any(n.width <= 0 for n in family):
        raise ValueError("slab widths must be positive")
    if not family:
        return True
    if gamma.denominator == 1:
        g = gamma.numerator
        return sum(n.width ** g for n in family) <= (beta * ball.radius) ** g
    try:
        c = decide(
            lambda bits: sum((pow_real(n.width, gamma, bits) for n in family),
                             pow_real(ONE, ONE, bits).scale(0)),
            lambda bits: pow_real(beta * ball.radius, gamma, bits),
        )
    except PrecisionExhausted:
        # only reachable on an exact algebraic tie; treat the closed
        # constraint as satisfied when every term is at the boundary
        return len(family) == 1 and family[0].width == beta * ball.radius
    return c is Cmp.LESS


def legal_bob_potential(prev: ProductBall, next_: ProductBall, beta: Fraction) -> bool:
    return prev.contains(next_) and next_.radius >= beta * prev.radius


def legal_absolute_moves(ball: ProductBall, nbhd: HyperplaneNbhd,
                         next_: ProductBall, beta: Fraction) -> bool:
    if not (0 < beta < Fraction(1, 3)):
        raise ValueError("absolute game needs beta in (0, 1/3)")
    if nbhd.width > beta * ball.radius:
        return False
    if not ball.contains(next_):
        return False
    if next_.radius < beta * ball.radius:
        return False
    return nbhd.disjoint_from(next_)


def legal_alpha_beta_moves(prev: ProductBall, next_: ProductBall,
                           ratio: Fraction, is_alice: bool) -> bool:
    if not (0 < ratio < 1):
        raise ValueError("ratio must lie in (0, 1)")
    if next_.radius != ratio * prev.radius:
        return False
    gap = (1 - ratio) * prev.radius
    if abs(prev.lam - next_.lam) > gap:
        return False
    return _dist2(prev.center, next_.center) <= gap * gap


# ---------------------------------------------------------------------------
# Transcripts
# ---------------------------------------------------------------------------


class GameKind(enum.Enum):
    ALPHA_BETA = "alpha_beta"
    ABSOLUTE = "absolute"
    POTENTIAL = "potential"


AliceMove = Union[ProductBall, HyperplaneNbhd, List[HyperplaneNbhd]]


@dataclass
class GameTranscript:
    kind: GameKind
    params: dict
    bob_balls: List[ProductBall] = field(default_factory=list)
    alice_moves: List[AliceMove] = field(default_factory=list)
    notes: List[dict] = field(default_factory=list)

    def to_jsonl(self) -> str:
        lines = [json.dumps({"game": self.kind.value, "params": self.params})]
        for i, ball in enumerate(self.bob_balls):
            lines.append(json.dumps(
                {"round": i, "player": "bob", "move": ball.to_json()}))
            if i < len(self.alice_moves):
                lines.append(json.dumps(
                    {"round": i, "player": "alice",
                     "move": _alice_move_json(self.alice_moves[i])}))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_jsonl(text: str) -> "GameTranscript":
        lines = [json.loads(l) for l in text.splitlines() if l.strip()]
        head = lines[0]
        t = GameTranscript(GameKind(head["game"]), head["params"])
        for rec in lines[1:]:
            if rec["player"] == "bob":
                t.bob_balls.append(ProductBall.from_json(rec["move"]))
            else:
                t.alice_moves.append(_alice_move_from_json(t.kind, rec["move"]))
        return t


def _alice_move_json(move: AliceMove) -> Union[dict, list]:
    if isinstance(move, ProductBall):
        return move.to_json()
    if isinstance(move, HyperplaneNbhd):
        return move.to_json()
    return [n.to_json() for n in move]


def _alice_move_from_json(kind: GameKind, d: Union[dict, list]) -> AliceMove:
    if kind is GameKind.ALPHA_BETA:
        return ProductBall.from_json(d)
    if kind is GameKind.ABSOLUTE:
        return HyperplaneNbhd.from_json(d)
    return [HyperplaneNbhd.from_json(x) for x in d]


# ---------------------------------------------------------------------------
# Game loop
# ---------------------------------------------------------------------------


def run_game(alice: Callable[[GameTranscript], Optional[AliceMove]],
             bob: Callable[[GameTranscript], Optional[ProductBall]],
             rounds: int, kind: GameKind, params: dict,
             initial: ProductBall) -> GameTranscript:
    """Drive `rounds` Bob moves, legality-checking every move.

    `params` must carry the game's rational parameters under keys
    'alpha'/'beta'/'gamma' as needed.  A callback returning None resigns.
    """
    t = GameTranscript(kind, {k: str(v) for k, v in params.items()})
    beta = Fraction(params["beta"]) if "beta" in params else None
    alpha = Fraction(params["alpha"]) if "alpha" in params else None
    gamma = Fraction(params["gamma"]) if "gamma" in params else None

    t.bob_balls.append(initial)
    for i in range(rounds):
        ball = t.bob_balls[-1]
        amove = alice(t)
        if amove is None:
            break
        _check_alice(kind, ball, amove, alpha, beta, gamma, i)
        t.alice_moves.append(amove)
        bmove = bob(t)
        if bmove is None:
            break
        _check_bob(kind, ball, amove, bmove, alpha, beta, i)
        t.bob_balls.append(bmove)
    return t


def _check_alice(kind: GameKind, ball: ProductBall, move: AliceMove,
                 alpha, beta, gamma, rnd: int) -> None:
    if kind is GameKind.POTENTIAL:
        if not isinstance(move, list) or not legal_alice_potential(ball, move, beta, gamma):
            raise IllegalMove(f"round {rnd}: Alice's family breaks the width budget")
    elif kind is GameKind.ABSOLUTE:
        if not isinstance(move, HyperplaneNbhd) or move.width > beta * ball.radius:
            raise IllegalMove(f"round {rnd}: Alice's slab is too wide")
    else:
        if not isinstance(move, ProductBall) or \
                not legal_alpha_beta_moves(ball, move, alpha, True):
            raise IllegalMove(f"round {rnd}: Alice's ball violates the alpha rule")


def _check_bob(kind: GameKind, ball: ProductBall, amove: AliceMove,
               bmove: ProductBall, alpha, beta, rnd: int) -> None:
    if kind is GameKind.POTENTIAL:
        if not legal_bob_potential(ball, bmove, beta):
            raise IllegalMove(f"round {rnd}: Bob's ball breaks nesting or the radius floor")
    elif kind is GameKind.ABSOLUTE:
        if not legal_absolute_moves(ball, amove, bmove, beta):
            raise IllegalMove(f"round {rnd}: Bob's ball is illegal in the absolute game")
    else:
        if not legal_alpha_beta_moves(amove, bmove, beta, False):
            raise IllegalMove(f"round {rnd}: Bob's ball violates the beta rule")


# ---------------------------------------------------------------------------
# Adjudication
# ---------------------------------------------------------------------------


class Verdict(enum.Enum):
    ALICE_WINS = "alice_wins"
    BOB_WINS_SO_FAR = "bob_wins_so_far"
    UNDETERMINED = "undetermined"


def adjudicate_potential(transcript: GameTranscript,
                         target_test: Callable[[Fraction, Vec3], Optional[bool]]) -> Verdict:
    """Three-valued finite-horizon verdict for the potential game.

    target_test(lam, point) should return True/False when membership of the
    point in the (truncated) target is certified, None when unknown.
    """
    final = transcript.bob_balls[-1]
    chosen = [n for fam in transcript.alice_moves if isinstance(fam, list) for n in fam]
    for n in chosen:
        if n.covers_ball(final):
            return Verdict.ALICE_WINS
    member = target_test(final.lam, final.center)
    if member is True:
        return Verdict.ALICE_WINS
    if member is False and not any(n.contains_point(final.lam, final.center) for n in chosen):
        return Verdict.BOB_WINS_SO_FAR
    return Verdict.UNDETERMINED
