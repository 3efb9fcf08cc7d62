"""Property suites: randomized and constructed checks of the core claims.

Each suite is a pure function returning a machine-readable report

    {"suite": name, "trials": N, "passes": N - len(failures),
     "failures": [record, ...], "notes": {...}}

where every failure record carries the exact rational data needed to
replay that single trial in isolation.  The CLI `verify` command and the
acceptance tests both consume these reports.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
from typing import Callable, Dict, List, Optional, Tuple

from .bob import BobConfig, make_bob
from .certarith import (CertInterval, Cmp, PrecisionExhausted,
                        compare_to_power, decide, exp_sqrt, format_rational,
                        log_interval, pow_real)
from .game import (GameKind, GameTranscript, ProductBall, Vec3, run_game)
from .geometry import (DualWitness, Intersect, RationalDirection,
                       candidate_directions, cross_product,
                       delta_ball_intersects, delta_membership, minimal_dual)
from .lattice import LatticeBasis, flowed_direction_vector, shortest_vector
from .strategy import (StrategyConstants, StrategyState, classify_ball,
                       make_alice, setup_constants)

F = Fraction


def _report(suite: str, trials: int, failures: List[dict],
            notes: Optional[dict] = None) -> dict:
    return {"suite": suite, "trials": trials, "passes": trials - len(failures),
            "failures": failures, "notes": notes or {}}


def _fmt_ball(ball: ProductBall) -> dict:
    return ball.to_json()


def _fmt_dir(v: RationalDirection) -> list:
    return v.to_json()


# ---------------------------------------------------------------------------
# Shared random instance generator
# ---------------------------------------------------------------------------


def _random_lambda(rng: random.Random, max_den: int = 64) -> Fraction:
    while True:
        den = rng.randrange(5, max_den + 1)
        num = rng.randrange(den // 2 + 1, den)
        lam = F(num, den)
        if F(11, 20) <= lam <= F(19, 20):
            return lam


def _random_ball(rng: random.Random) -> ProductBall:
    lam = _random_lambda(rng)
    cap = min(lam - F(1, 2), 1 - lam, F(1, 4))
    rho = cap * F(rng.randrange(1, 100), 128)
    center = tuple(F(rng.randrange(-2048, 2049), 1024) for _ in range(3))
    return ProductBall(lam, center, rho)


def _random_direction(rng: random.Random, q_max: int) -> RationalDirection:
    q = rng.randrange(1, q_max + 1)
    p = rng.randrange(-3 * q, 3 * q + 1)
    r = rng.randrange(-3 * q, 3 * q + 1)
    g = math.gcd(math.gcd(abs(p), abs(r)), q)
    return RationalDirection(p // g, r // g, q // g)


def _box_le(val: Fraction, rho: Fraction, q: int, expo: Fraction) -> bool:
    """Certified val <= e^sqrt(rho) * q^expo (the dual-witness box bound)."""
    if val <= 0:
        return True
    c = decide(lambda bits: CertInterval.from_rational(val, bits),
               lambda bits: exp_sqrt(rho, bits) * pow_real(q, expo, bits))
    return c is Cmp.LESS


# ---------------------------------------------------------------------------
# minkowski: the dual-witness set is nonempty, certified in its box
# ---------------------------------------------------------------------------


def run_minkowski(trials: int = 1000, seed: int = 20240) -> dict:
    rng = random.Random(seed)
    failures = []
    for i in range(trials):
        ball = _random_ball(rng)
        v = _random_direction(rng, 10_000)
        rec = {"trial": i, "ball": _fmt_ball(ball), "v": _fmt_dir(v)}
        try:
            w = minimal_dual(ball, v)
        except Exception as exc:  # no witness is itself the failure
            failures.append({**rec, "error": repr(exc)})
            continue
        z = ball.center[2]
        ok = (w.pairs_with(v)
              and (w.a, w.b) != (0, 0)
              and _box_le(F(abs(w.a)), ball.radius, v.q, ball.lam)
              and _box_le(abs(F(w.b) + z * w.a), ball.radius, v.q, 1 - ball.lam))
        if not ok:
            failures.append({**rec, "witness": w.to_json()})
    return _report("minkowski", trials, failures)


# ---------------------------------------------------------------------------
# lq: q <= H(ball, v) <= q^(1 + lambda)
# ---------------------------------------------------------------------------


def run_lq(trials: int = 1000, seed: int = 20241) -> dict:
    rng = random.Random(seed)
    failures = []
    for i in range(trials):
        ball = _random_ball(rng)
        v = _random_direction(rng, 10_000)
        rec = {"trial": i, "ball": _fmt_ball(ball), "v": _fmt_dir(v)}
        try:
            w = minimal_dual(ball, v)
            z = ball.center[2]
            h = v.q * max(F(abs(w.a)), abs(F(w.b) + z * w.a))
            ok = h >= v.q and compare_to_power(h, v.q, 1 + ball.lam) <= 0
        except Exception as exc:
            failures.append({**rec, "error": repr(exc)})
            continue
        if not ok:
            failures.append({**rec, "witness": w.to_json(),
                             "height": format_rational(h)})
    return _report("lq", trials, failures)


# ---------------------------------------------------------------------------
# lrvalue: rho * log H_{2n+2} <= sqrt(rho)/2 <= 1 under certified constants
# ---------------------------------------------------------------------------


def certified_reference_constants() -> StrategyConstants:
    """The certified parameters for beta=1/2, gamma=1, rho0=1/10."""
    seed_ball = ProductBall(F(3, 4), (F(0), F(0), F(0)), F(1, 10))
    return setup_constants(seed_ball, F(1, 2), F(1))


def run_lrvalue(samples_per_n: int = 10) -> dict:
    c = certified_reference_constants()
    failures = []
    trials = 0
    for n in range(1, 41):
        h = c.H(2 * n + 2)
        rho_top = c.rho0 * F(c.R) ** -n
        for j in range(1, samples_per_n + 1):
            trials += 1
            rho = rho_top * F(j, samples_per_n)
            rec = {"n": n, "rho": format_rational(rho)}
            if rho > 4:  # sqrt(rho)/2 <= 1
                failures.append({**rec, "error": "damping bound exceeds 1"})
                continue
            if h <= 1:  # log is nonpositive, nothing to check
                continue
            try:
                cmp = decide(
                    lambda bits: log_interval(h, bits).scale(rho),
                    lambda bits: pow_real(rho, F(1, 2), bits).scale(F(1, 2)))
            except PrecisionExhausted as exc:
                failures.append({**rec, "error": repr(exc)})
                continue
            if cmp is not Cmp.LESS:
                failures.append(rec)
    notes = {"kappa": c.kappa, "R": c.R, "epsilon": format_rational(c.epsilon)}
    return _report("lrvalue", trials, failures, notes)


# ---------------------------------------------------------------------------
# linc: the lambda-freezing sandwich at demo constants
# ---------------------------------------------------------------------------


def demo_reference_constants() -> StrategyConstants:
    """The demo parameters used by the end-to-end game."""
    return setup_constants(demo_initial_ball(), F(1, 2), F(1), mode="demo",
                           R=16, epsilon=F(1, 2 ** 20))


def demo_initial_ball() -> ProductBall:
    return ProductBall(F(3, 4), (F(3, 4), F(1, 3), F(2, 3)), F(1, 10))


def _sandwich_point(rng: random.Random, ball: ProductBall,
                    v: RationalDirection, eps: Fraction,
                    near_axis: bool) -> Tuple[Fraction, Vec3]:
    lam_c, rho = ball.lam, ball.radius
    x_c, y_c, z_c = ball.center
    lam = lam_c + rho * F(rng.randrange(-128, 129), 128)
    z = z_c + rho * F(rng.randrange(-64, 65), 256)
    if near_axis:
        rq = F(v.r, v.q)
        w2 = pow_real(v.q, lam_c - 2, 128).scale(eps / 3).lo_fraction()
        w1 = pow_real(v.q, -(1 + lam_c), 128).scale(eps / 3).lo_fraction()
        y = rq + w2 * F(rng.randrange(-1280, 1281), 1024)
        x = F(v.p, v.q) + z * (y - rq) + w1 * F(rng.randrange(-1280, 1281), 1024)
    else:
        y = y_c + rho * F(rng.randrange(-64, 65), 256)
        x = x_c + rho * F(rng.randrange(-64, 65), 256)
    return lam, (x, y, z)


def run_linc(trials: int = 500, points: int = 20, seed: int = 20242) -> dict:
    c = demo_reference_constants()
    eps = c.epsilon
    rng = random.Random(seed)
    failures = []
    checked = 0
    for i in range(trials):
        n = rng.randrange(1, 7)
        lam = _random_lambda(rng)
        rho = c.rho0 * F(c.R) ** -n * F(rng.randrange(65, 129), 128)
        q_cap = int(min(c.H(2 * n + 2), F(10 ** 6)))
        q = max(1, int(math.exp(rng.uniform(0.0, math.log(q_cap + 1)))))
        q = min(q, q_cap)
        p = rng.randrange(-2 * q, 2 * q + 1)
        r = rng.randrange(-2 * q, 2 * q + 1)
        g = math.gcd(math.gcd(abs(p), abs(r)), q)
        v = RationalDirection(p // g, r // g, q // g)
        z = F(rng.randrange(-64, 65), 64)
        dy = rho * F(rng.randrange(-128, 129), 512)
        dx = rho * F(rng.randrange(-128, 129), 512)
        center = (F(v.p, v.q) + z * dy + dx, F(v.r, v.q) + dy, z)
        ball = ProductBall(lam, center, rho)
        rec = {"trial": i, "n": n, "ball": _fmt_ball(ball), "v": _fmt_dir(v)}
        for j in range(points):
            plam, pt = _sandwich_point(rng, ball, v, eps, near_axis=j % 2 == 0)
            if not ball.contains_point(plam, pt):
                continue
            checked += 1
            prec = {**rec, "lambda": format_rational(plam),
                    "point": [format_rational(t) for t in pt]}
            inner = delta_membership(lam, pt, v, eps / 3)
            if inner and not delta_membership(plam, pt, v, eps):
                failures.append({**prec, "inclusion": "inner"})
            member = delta_membership(plam, pt, v, eps)
            if member and not delta_membership(lam, pt, v, 3 * eps):
                failures.append({**prec, "inclusion": "outer"})
    return _report("linc", trials, failures, {"points_checked": checked})


# ---------------------------------------------------------------------------
# linequ / lconst: the constructed shared-plane instance
# ---------------------------------------------------------------------------

_SP_R = 16
_SP_EPS = F(1, 2 ** 93)
_SP_RHO0 = F(1, 10)
_SP_KAPPA = 3
_SP_LAM = F(3, 4)
_SP_N = 39
_SP_CF_TERMS = [0, 11] + [1] * 61 + [28207908286, 1]


def _sp_H(n: int) -> Fraction:
    return 20 * _SP_EPS * _SP_KAPPA / _SP_RHO0 * F(_SP_R) ** n


def _cf_convergents(terms: List[int]) -> List[Tuple[int, int]]:
    p0, q0, p1, q1 = 1, 0, terms[0], 1
    out = [(p1, q1)]
    for a in terms[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def shared_plane_instance() -> dict:
    """A constructed deep-scale instance with two directions on one plane.

    The y-center is a rational with one huge partial quotient; its last
    two continued-fraction approximants give two independent directions
    whose q's land in the same scale window, while every smaller q is
    kept away from the ball chain by the best-approximation property.
    """
    cv = _cf_convergents(_SP_CF_TERMS)
    (ps, qs) = cv[-3]       # the approximant before the huge quotient
    (p1, q1) = cv[-2]       # denominators ~2^80, inside the scale window
    (p2, q2) = cv[-1]
    n = _SP_N
    y0 = F(p2, q2)
    rho_n = _SP_RHO0 * F(_SP_R) ** -n
    big = ProductBall(_SP_LAM, (F(0), y0, F(0)), rho_n)
    rho_sub = _SP_RHO0 * F(_SP_R) ** -(n + 1)
    sub1 = ProductBall(_SP_LAM, (F(0), y0, F(0)), rho_sub)
    sub2 = ProductBall(_SP_LAM, (F(0), F(p1, q1), F(0)), rho_sub)
    return {
        "n": n, "k": 1, "epsilon": _SP_EPS, "y0": y0,
        "sep_q": qs, "sep_p": ps,
        "big": big,
        "pairs": [(sub1, RationalDirection(0, p2, q2)),
                  (sub2, RationalDirection(0, p1, q1))],
    }


def _sp_constants() -> StrategyConstants:
    return StrategyConstants(_SP_KAPPA, _SP_R, _SP_EPS, _SP_RHO0,
                             F(1, 2), F(1), "demo")


def _chain_separation_checks(inst: dict) -> List[dict]:
    """Tube avoidance for the whole concentric chain, one check per scale.

    For scale m every threatening direction has q <= Q_m = floor(3*H_{m+1});
    since Q_m is below the next approximant denominator, |q*y0 - r| is at
    least the separation of the last small approximant, and a single exact
    inequality ||sep_q * y0|| >= Q_m * rho_m + eps certifies that every
    such tube misses the scale-m ball.
    """
    y0, qs = inst["y0"], inst["sep_q"]
    sep = abs(qs * y0 - inst["sep_p"])
    q_next = inst["pairs"][1][1].q  # the first denominator past sep_q
    failures = []
    for m in range(1, inst["n"] + 1):
        q_m = int(3 * _sp_H(m + 1))
        if q_m < 1:
            continue
        rho_m = _SP_RHO0 * F(_SP_R) ** -m
        rec = {"scale": m, "q_cap": q_m}
        if q_m >= q_next:
            failures.append({**rec, "error": "q cap reaches next approximant"})
        elif sep < q_m * rho_m + inst["epsilon"]:
            failures.append({**rec, "error": "separation margin violated"})
    return failures


_SANITY_TERMS = ([0, 3, 1, 1, 2, 1], [0, 7, 2, 1, 5], [0, 2, 1, 1, 1, 1, 3])


def _best_approx_sanity() -> List[dict]:
    """Exhaustive check of the best-approximation bound on small rationals."""
    failures = []
    for terms in _SANITY_TERMS:
        cv = _cf_convergents(terms)
        y = F(cv[-1][0], cv[-1][1])
        for i in range(1, len(cv) - 1):
            pi, qi = cv[i]
            bound = abs(qi * y - pi)
            q_next = cv[i + 1][1]
            worst = min(abs(q * y - round(q * y)) for q in range(1, q_next))
            if worst < bound:
                failures.append({"terms": terms, "index": i,
                                 "bound": format_rational(bound),
                                 "worst": format_rational(worst)})
    return failures


def _q_window_ok(q: int, h: Fraction, r_pow: int) -> bool:
    """Exact H^(1/(1+3/4)) <= q <= H^(4/7) * R^20 for the fixed slope 3/4."""
    return (F(q) ** 7 >= h ** 4) and (F(q, r_pow) ** 7 <= h ** 4)


def run_linequ() -> dict:
    inst = shared_plane_instance()
    eps = inst["epsilon"]
    n, k = inst["n"], inst["k"]
    big = inst["big"]
    c = _sp_constants()
    failures = list(_best_approx_sanity())
    trials = sum(len(_cf_convergents(t)) - 2 for t in _SANITY_TERMS)

    def check(name: str, ok: bool, extra: Optional[dict] = None) -> None:
        nonlocal trials
        trials += 1
        if not ok:
            failures.append({"check": name, **(extra or {})})

    failures_chain = _chain_separation_checks(inst)
    trials += inst["n"]
    failures.extend(failures_chain)

    check("bound_below_one", F(_SP_R) ** (k + 22) * eps < 1)
    check("big_ball_scale", classify_ball(big, c) == n)

    duals: List[DualWitness] = []
    dirs: List[RationalDirection] = []
    for j, (sub, v) in enumerate(inst["pairs"]):
        tag = {"pair": j, "v": _fmt_dir(v)}
        check("sub_ball_scale", classify_ball(sub, c) == n + k, tag)
        check("sub_in_big", big.contains(sub), tag)
        check("direction_primitive", v.is_primitive(), tag)
        w = minimal_dual(sub, v)
        z = sub.center[2]
        h = v.q * max(F(abs(w.a)), abs(F(w.b) + z * w.a))
        check("height_is_q", h == v.q, {**tag, "height": format_rational(h)})
        check("height_window", c.H(n + k) <= h <= 3 * c.H(n + k + 1), tag)
        check("q_window", _q_window_ok(v.q, c.H(n + k), _SP_R ** 20), tag)
        # the tube through v passes through the sub-ball center exactly
        check("tube_meets_sub",
              delta_ball_intersects(sub, v, eps).status is Intersect.NONEMPTY,
              tag)
        check("tube_meets_big",
              delta_membership(big.lam, sub.center, v, eps)
              and big.contains_point(big.lam, sub.center), tag)
        duals.append(w)
        dirs.append(v)

    v1, v2 = dirs
    w1, w2 = duals
    dot = lambda v, w: v.p * w.a + v.r * w.b + v.q * w.c
    check("dot_v1_w2", dot(v1, w2) == 0, {"value": dot(v1, w2)})
    check("dot_v2_w1", dot(v2, w1) == 0, {"value": dot(v2, w1)})
    x = cross_product(v1, v2)
    check("cross_unit", (abs(x.a), x.b, x.c) == (1, 0, 0),
          {"cross": x.to_json()})
    for j, w in enumerate(duals):
        check("dual_multiple_of_cross", w.b == 0 and w.c == 0,
              {"pair": j, "witness": w.to_json()})
    return _report("linequ", trials, failures,
                   {"n": n, "k": k, "q1": dirs[0].q, "q2": dirs[1].q})


def run_lconst() -> dict:
    """Every qualifying dual at the constructed instance shares one line."""
    inst = shared_plane_instance()
    eps = inst["epsilon"]
    n, k = inst["n"], inst["k"]
    c = _sp_constants()
    big = inst["big"]
    failures = []
    trials = 0

    def check(name: str, ok: bool, extra: Optional[dict] = None) -> None:
        nonlocal trials
        trials += 1
        if not ok:
            failures.append({"check": name, **(extra or {})})

    dirs = [v for _, v in inst["pairs"]]
    x = cross_product(*dirs)
    check("cross_unit", (abs(x.a), x.b, x.c) == (1, 0, 0))

    rho_sub = _SP_RHO0 * F(_SP_R) ** -(n + k)
    offsets = [F(0), rho_sub / 2, -rho_sub / 2]
    for base, v in inst["pairs"]:
        # the full witness set is forced onto the line (1,0,0): any (a,b,c)
        # needs q | b (p and q coprime), and the box cuts |b| below q
        check("box_below_q",
              decide(lambda bits: exp_sqrt(rho_sub, bits)
                     * pow_real(v.q, 1 - _SP_LAM, bits),
                     lambda bits: CertInterval.from_rational(v.q, bits))
              is Cmp.LESS, {"v": _fmt_dir(v)})
        check("pr_coprime", math.gcd(abs(v.r), v.q) == 1, {"v": _fmt_dir(v)})
        for dy in offsets:
            for dz in offsets:
                cx, cy, cz = base.center
                try:
                    sub = ProductBall(base.lam, (cx, cy + dy, cz + dz),
                                      rho_sub)
                except ValueError:
                    continue
                if not big.contains(sub):
                    continue
                w = minimal_dual(sub, v)
                z = sub.center[2]
                h = v.q * max(F(abs(w.a)), abs(F(w.b) + z * w.a))
                if not (c.H(n + k) <= h <= 3 * c.H(n + k + 1)):
                    continue  # shifted ball left the height window
                check("dual_on_shared_line", w.b == 0 and w.c == 0,
                      {"v": _fmt_dir(v), "ball": _fmt_ball(sub),
                       "witness": w.to_json()})
    return _report("lconst", trials, failures)


# ---------------------------------------------------------------------------
# lmain1: clean balls from a played game avoid all low tubes
# ---------------------------------------------------------------------------


def play_demo_game(rounds: int = 30, seed: int = 42,
                   budget: int = 300_000_000
                   ) -> Tuple[GameTranscript, StrategyState]:
    """The reference end-to-end demo game: greedy Bob chasing (0, 0, 1)."""
    initial = demo_initial_ball()
    constants = demo_reference_constants()
    state = StrategyState(constants, initial, budget=budget)
    bob = make_bob(BobConfig("greedy_cusp", seed=seed, shrink=F(1, 2),
                             target=RationalDirection(0, 0, 1)))
    params = {"beta": constants.beta, "gamma": constants.gamma,
              "seed": seed, "constants": constants.to_json()}
    t = run_game(make_alice(state), bob, rounds, GameKind.POTENTIAL,
                 params, initial)
    return t, state


def _q_cap_for(h: Fraction, lam: Fraction) -> int:
    """Largest q >= 0 with q^(1+lambda) <= h, by exact bisection."""
    if h < 1:
        return 0
    hi = 1
    while compare_to_power(h, 2 * hi, 1 + lam) >= 0:
        hi *= 2
    lo = hi  # q in [hi, 2*hi)
    hi = 2 * hi - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if compare_to_power(h, mid, 1 + lam) >= 0:
            lo = mid
        else:
            hi = mid - 1
    return lo


def run_lmain1(rounds: int = 30, seed: int = 42) -> dict:
    _, state = play_demo_game(rounds, seed)
    c = state.constants
    failures = []
    trials = 0
    caps = {}
    for n, balls in sorted(state.b_prime.items()):
        if n < 1:
            continue
        for ball in balls:
            trials += 1
            q_cap = _q_cap_for(3 * c.H(n + 1), ball.lam)
            caps[n] = q_cap
            if q_cap < 1:
                continue
            hits = candidate_directions(ball, 1, q_cap, c.epsilon,
                                        budget=10 ** 7)
            if hits:
                failures.append({"n": n, "ball": _fmt_ball(ball),
                                 "q_cap": q_cap,
                                 "directions": [_fmt_dir(v) for v in hits]})
    return _report("lmain1", trials, failures, {"q_caps": caps})


# ---------------------------------------------------------------------------
# dani: tube membership == small flowed coordinates
# ---------------------------------------------------------------------------


def _abs_less(make: Callable[[int], CertInterval], eps: Fraction) -> Optional[bool]:
    for bits in (128, 256, 512, 1024, 2048, 4096):
        iv = make(bits)
        lo, hi = iv.lo_fraction(), iv.hi_fraction()
        a_lo = max(F(0), lo, -hi) if lo <= 0 <= hi else min(abs(lo), abs(hi))
        a_hi = max(abs(lo), abs(hi))
        if a_hi < eps:
            return True
        if a_lo >= eps:
            return False
    return None


def run_dani(trials: int = 10_000, seed: int = 20243) -> dict:
    rng = random.Random(seed)
    failures = []
    boundary = 0
    for i in range(trials):
        lam = _random_lambda(rng, 64 if rng.random() < 0.8 else 2000)
        v = _random_direction(rng, 5000)
        if rng.random() < 0.05:  # exact cusp hit
            z = F(rng.randrange(-512, 513), 256)
            point = (F(v.p, v.q), F(v.r, v.q), z)
        else:
            point = tuple(F(rng.randrange(-1536, 1537), 512) for _ in range(3))
        den = rng.randrange(2, 1 << 20)
        eps = F(rng.randrange(1, den), den)
        rec = {"trial": i, "lambda": format_rational(lam),
               "point": [format_rational(t) for t in point],
               "v": _fmt_dir(v), "epsilon": format_rational(eps)}
        member = delta_membership(lam, point, v, eps)
        third = flowed_direction_vector(lam, point, v, 128)[2]
        if not (third.lo_fraction() == 1 == third.hi_fraction()):
            failures.append({**rec, "error": "third coordinate not 1"})
            continue
        l1 = _abs_less(lambda b: flowed_direction_vector(lam, point, v, b)[0],
                       eps)
        l2 = _abs_less(lambda b: flowed_direction_vector(lam, point, v, b)[1],
                       eps)
        if l1 is None or l2 is None:
            boundary += 1  # only an exact |coord| = eps tie stays open
            continue
        if member != (l1 and l2):
            failures.append({**rec, "flowed_less": [l1, l2],
                             "membership": member})
    return _report("dani", trials, failures, {"undecided_boundary": boundary})


# ---------------------------------------------------------------------------
# svp: certified shortest vectors match brute force
# ---------------------------------------------------------------------------


def _random_unimodular(rng: random.Random, max_entry: int = 10) -> List[List[int]]:
    while True:
        m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        for _ in range(rng.randrange(2, 7)):
            i, j = rng.sample(range(3), 2)
            c = rng.choice((-2, -1, 1, 2))
            for k in range(3):
                m[i][k] += c * m[j][k]
        if max(abs(e) for row in m for e in row) <= max_entry:
            return m


def _brute_min_norm2(m: List[List[int]]) -> int:
    """Exact minimum squared norm over the coefficient box [-20, 20]^3.

    int64 is safe: entries are <= 10, coefficients <= 20, so each
    coordinate is at most 600 and each squared norm at most ~1.1e6.
    """
    rng = np.arange(-20, 21, dtype=np.int64)
    k1, k2, k3 = np.meshgrid(rng, rng, rng, indexing="ij")
    a = np.asarray(m, dtype=np.int64)
    n2 = sum((a[r][0] * k1 + a[r][1] * k2 + a[r][2] * k3) ** 2
             for r in range(3))
    n2[20, 20, 20] = np.iinfo(np.int64).max  # exclude the zero vector
    return int(n2.min())


def run_svp(trials: int = 500, seed: int = 20244) -> dict:
    rng = random.Random(seed)
    failures = []
    for i in range(trials):
        m = _random_unimodular(rng)
        rec = {"trial": i, "basis_rows": m}
        basis = LatticeBasis.from_rational(
            tuple(tuple(F(e) for e in row) for row in m))
        try:
            coeffs, length = shortest_vector(basis)
        except PrecisionExhausted as exc:
            failures.append({**rec, "error": repr(exc)})
            continue
        best = _brute_min_norm2(m)
        got = sum((m[r][0] * coeffs[0] + m[r][1] * coeffs[1]
                   + m[r][2] * coeffs[2]) ** 2 for r in range(3))
        ok = (got == best
              and length.lo_fraction() ** 2 <= best <= length.hi_fraction() ** 2)
        if not ok:
            failures.append({**rec, "coeffs": list(coeffs),
                             "norm2": got, "brute_norm2": best})
    return _report("svp", trials, failures)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


SUITES: Dict[str, Callable[..., dict]] = {
    "minkowski": run_minkowski,
    "lq": run_lq,
    "lrvalue": run_lrvalue,
    "linc": run_linc,
    "linequ": run_linequ,
    "lconst": run_lconst,
    "lmain1": run_lmain1,
    "dani": run_dani,
    "svp": run_svp,
}


def run_suite(name: str, **kwargs) -> dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{sorted(SUITES)}")
    return SUITES[name](**kwargs)
