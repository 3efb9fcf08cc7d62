"""Shared brute-force oracles for the test suite.

These deliberately re-derive results through different algorithms than
the library (exhaustive enumeration, direct matrix algebra) so the two
sides can cross-check each other.
"""

import math
from fractions import Fraction

from cuspgame import (CertInterval, Cmp, DualWitness, ProductBall,
                      RationalDirection, decide)
from cuspgame.certarith import exp_sqrt, pow_real

F = Fraction


def box_bound_hi(rho: Fraction, q: int, expo: Fraction) -> Fraction:
    return (exp_sqrt(rho, 128) * pow_real(q, expo, 128)).hi_fraction()


def in_witness_box(ball: ProductBall, q: int, a: int, b: int) -> bool:
    """Certified |a| <= E*q^lam and |b+z*a| <= E*q^(1-lam)."""
    z = ball.center[2]
    lam, rho = ball.lam, ball.radius
    for val, expo in ((F(abs(a)), lam), (abs(F(b) + z * a), 1 - lam)):
        if val == 0:
            continue
        c = decide(lambda bits: CertInterval.from_rational(val, bits),
                   lambda bits: exp_sqrt(rho, bits) * pow_real(q, expo, bits))
        if c is not Cmp.LESS:
            return False
    return True


def brute_minimal_dual(ball: ProductBall, v: RationalDirection) -> DualWitness:
    """Exhaustive minimizer over the witness box, same tie-break key."""
    p, r, q = v.p, v.r, v.q
    z = ball.center[2]
    a_cap = math.floor(box_bound_hi(ball.radius, q, ball.lam)) + 1
    w_cap = box_bound_hi(ball.radius, q, 1 - ball.lam)
    best_key, best = None, None
    for a in range(-a_cap, a_cap + 1):
        # solve b*r = -a*p (mod q) and walk the progression inside the strip
        g = math.gcd(abs(r), q)
        if (-a * p) % g != 0:
            continue
        step = q // g
        if r == 0:
            if (a * p) % q != 0:
                continue
            b0, step = 0, 1
        else:
            rg, qg = r // g, q // g
            b0 = (-a * p // g) * pow(rg, -1, qg) % qg if qg > 1 else 0
        lo = -z * a - w_cap - 1
        b = b0 + step * math.ceil((lo - b0) / step)
        while F(b) + z * a <= w_cap + 1:
            if (a, b) != (0, 0) and (a * p + b * r) % q == 0 \
                    and in_witness_box(ball, q, a, b):
                h = max(F(abs(a)), abs(F(b) + z * a))
                key = (h, abs(a), abs(b), a, b)
                if best_key is None or key < best_key:
                    best_key, best = key, (a, b)
            b += step
    a, b = best
    return DualWitness(a, b, -(a * p + b * r) // q)


def brute_tube_directions(ball: ProductBall, q_max: int, eps: Fraction):
    """All primitive v (q <= q_max) whose tube cannot be ruled out.

    Direct interval arithmetic over the ball box, no certified layer:
    a direction is kept unless the rational over-bounds already separate.
    """
    lam, rho = ball.lam, ball.radius
    x, y, z = ball.center
    out = []
    for q in range(1, q_max + 1):
        for r in range(math.ceil(q * (y - rho) - eps),
                       math.floor(q * (y + rho) + eps) + 1):
            d2 = abs(y - F(r, q))
            t1 = rho * (1 + abs(z) + rho + d2) + eps / q
            cx = x - z * (y - F(r, q))
            for p in range(math.ceil(q * (cx - t1)), math.floor(q * (cx + t1)) + 1):
                if math.gcd(math.gcd(abs(p), abs(r)), q) != 1:
                    continue
                if abs(y - F(r, q)) > rho + eps / q:
                    continue
                out.append(RationalDirection(p, r, q))
    return out
