"""Legal Bob adversaries: seeded random, cusp-seeking greedy, and replay.

All centers are exact rationals; random and greedy offsets are snapped
inward onto a dyadic grid so every move passes the exact legality checks
and transcripts replay bit-identically.  The random stream is Python's
Mersenne Twister (mt19937) seeded per round with "<seed>:<round>".
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .game import HyperplaneNbhd, ProductBall
from .geometry import RationalDirection

_GRID_BITS = 128


@dataclass(frozen=True)
class BobConfig:
    kind: str  # "random", "greedy_cusp" or "replay"
    seed: int = 0
    shrink: Fraction = Fraction(1, 2)
    target: Optional[RationalDirection] = None
    script: Optional[Sequence[ProductBall]] = None

    def __post_init__(self) -> None:
        if self.kind not in ("random", "greedy_cusp", "replay"):
            raise ValueError(f"unknown Bob kind {self.kind!r}")
        if not (0 < self.shrink <= 1):
            raise ValueError("shrink must lie in (0, 1]")
        if self.kind == "greedy_cusp" and self.target is None:
            raise ValueError("greedy_cusp needs a target direction")
        if self.kind == "replay" and self.script is None:
            raise ValueError("replay needs a script")


def _snap_inward(x: Fraction) -> Fraction:
    """Round toward zero onto the 2^-128 grid; never lengthens a step."""
    scaled = x * (1 << _GRID_BITS)
    n = scaled.numerator // scaled.denominator if scaled >= 0 \
        else -((-scaled.numerator) // scaled.denominator)
    return Fraction(n, 1 << _GRID_BITS)


def _random_offset(rng: random.Random, gap: Fraction):
    """A product-metric offset of norm <= gap with exact rational coords."""
    raw = [rng.uniform(-1.0, 1.0) for _ in range(4)]
    norm = max(abs(raw[0]), math.sqrt(sum(c * c for c in raw[1:])))
    scale = rng.random() / max(norm, 1e-9)
    offs = [_snap_inward(Fraction(c * scale).limit_denominator(1 << 60) * gap)
            for c in raw]
    # snapping shrinks each coordinate, but verify exactly anyway
    while abs(offs[0]) > gap or sum(c * c for c in offs[1:]) > gap * gap:
        offs = [o / 2 for o in offs]
    return offs


def _greedy_step(prev: ProductBall, target: RationalDirection,
                 gap: Fraction) -> ProductBall:
    x, y, z = prev.center
    tx, ty = Fraction(target.p, target.q), Fraction(target.r, target.q)
    dx, dy = tx - x, ty - y
    d2 = dx * dx + dy * dy
    if d2 <= gap * gap:
        return ProductBall(prev.lam, (tx, ty, z), prev.radius - gap)
    # rational understep of gap/dist keeps the move inside the gap ball
    val = gap * gap / d2
    t = Fraction(math.isqrt(val.numerator * (1 << 2 * _GRID_BITS)
                            // val.denominator), 1 << _GRID_BITS)
    sx, sy = _snap_inward(t * dx), _snap_inward(t * dy)
    assert sx * sx + sy * sy <= gap * gap
    return ProductBall(prev.lam, (x + sx, y + sy, z), prev.radius - gap)


def bob_move(config: BobConfig, prev: ProductBall,
             alice_family: List[HyperplaneNbhd],
             round_no: int = 0) -> ProductBall:
    """Bob's next ball: radius shrink*rho, contained in prev."""
    rho = prev.radius * config.shrink
    gap = prev.radius - rho
    if config.kind == "replay":
        ball = config.script[round_no]
        if not prev.contains(ball):
            raise ValueError(f"scripted ball at round {round_no} not nested")
        return ball
    if config.kind == "greedy_cusp":
        if gap == 0:
            return prev
        return _greedy_step(prev, config.target, gap)
    rng = random.Random(f"{config.seed}:{round_no}".encode())
    offs = _random_offset(rng, gap)
    lam = prev.lam + offs[0]
    center = tuple(c + o for c, o in zip(prev.center, offs[1:]))
    return ProductBall(lam, center, rho)


def make_bob(config: BobConfig):
    """Adapter for the game loop: transcript -> Bob ball."""

    def bob(transcript) -> ProductBall:
        prev = transcript.bob_balls[-1]
        fam = transcript.alice_moves[-1] if transcript.alice_moves else []
        return bob_move(config, prev, fam, len(transcript.bob_balls) - 1)

    return bob
