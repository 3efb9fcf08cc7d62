"""Tubes around rational directions, dual witnesses, heights and planes.

A primitive direction v = (p, r, q) determines, for each shape parameter
lambda, an open tube of points (x, y, z) with

    |x - p/q - z*(y - r/q)| < eps / q^(1+lambda),
    |y - r/q|               < eps / q^(2-lambda).

Duals of v relative to a ball are integer triples (a, b, c) with
a*p + b*r + c*q = 0 whose first two coordinates lie in a lattice of
covolume q; the minimizer of max{|a|, |b + z*a|} over a certified box
defines the height q * max{|a|, |b + z*a|} of v relative to the ball.
All decisions are exact rational comparisons, exact integer-root
comparisons, or certified interval comparisons with escalation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import gmpy2
import numpy as np

from .certarith import (CertInterval, Cmp, PrecisionExhausted,
                        compare_to_power, decide, exp_sqrt, format_rational,
                        parse_rational, pow_real)
from .game import HyperplaneNbhd, ProductBall, Vec3

HALF = Fraction(1, 2)


class BudgetExceeded(Exception):
    """A direction scan was asked to exceed its configured q budget."""


@dataclass(frozen=True)
class RationalDirection:
    """An integer direction (p, r, q) with q >= 1."""

    p: int
    r: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError("direction needs q >= 1")

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(abs(self.p), abs(self.r)), self.q) == 1

    def to_json(self) -> list:
        return [self.p, self.r, self.q]

    @staticmethod
    def from_json(t: Sequence[int]) -> "RationalDirection":
        return RationalDirection(int(t[0]), int(t[1]), int(t[2]))


@dataclass(frozen=True)
class DualWitness:
    """Integer triple (a, b, c); valid for v when a*p + b*r + c*q = 0."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.a == 0 and self.b == 0:
            raise ValueError("dual witness needs (a, b) != (0, 0)")

    def pairs_with(self, v: RationalDirection) -> bool:
        return self.a * v.p + self.b * v.r + self.c * v.q == 0

    def to_json(self) -> list:
        return [self.a, self.b, self.c]


@dataclass(frozen=True)
class AvoidancePlane:
    """Spatial plane n_x*x + n_y*y + n_z*z + offset = 0 (no lambda part)."""

    normal: Tuple[Fraction, Fraction, Fraction]
    offset: Fraction

    def __post_init__(self) -> None:
        if all(c == 0 for c in self.normal):
            raise ValueError("plane normal must be nonzero")

    def value_at(self, point: Vec3) -> Fraction:
        n = self.normal
        return n[0] * point[0] + n[1] * point[1] + n[2] * point[2] + self.offset

    def contains_point(self, point: Vec3) -> bool:
        return self.value_at(point) == 0

    def thickened(self, width: Fraction) -> HyperplaneNbhd:
        return HyperplaneNbhd((Fraction(0),) + self.normal, self.offset, width)

    def to_json(self) -> dict:
        return {
            "normal": [format_rational(c) for c in (Fraction(0),) + self.normal],
            "offset": format_rational(self.offset),
        }

    @staticmethod
    def from_json(d: dict) -> "AvoidancePlane":
        n = [parse_rational(c) for c in d["normal"]]
        return AvoidancePlane(tuple(n[1:]), parse_rational(d["offset"]))


# ---------------------------------------------------------------------------
# Certified comparisons against eps * q**expo
# ---------------------------------------------------------------------------


def _cmp_eps_power(value: Fraction, eps: Fraction, q: int, expo: Fraction) -> int:
    """Sign of value - eps * q**expo; exact whenever q**expo is rational."""
    if value <= 0:
        return -1
    ratio = value / eps
    d = expo.denominator
    if q == 1:
        return (ratio > 1) - (ratio < 1)
    if d <= 64:
        return compare_to_power(ratio, q, expo)
    # q**(n/d) is rational only when q is an exact d-th power
    if d <= q.bit_length():
        root, exact = gmpy2.iroot(q, d)
        if exact:
            return compare_to_power(ratio, Fraction(int(root)), Fraction(expo.numerator))
    c = decide(lambda bits: CertInterval.from_rational(ratio, bits),
               lambda bits: pow_real(q, expo, bits))
    return -1 if c is Cmp.LESS else 1


# ---------------------------------------------------------------------------
# Tube membership and ball intersection
# ---------------------------------------------------------------------------


def delta_membership(lam: Fraction, point: Vec3, v: RationalDirection,
                     epsilon: Fraction) -> bool:
    """Strict membership of a point in the lambda-slice tube around v."""
    lam = Fraction(lam)
    eps = Fraction(epsilon)
    if not (HALF < lam < 1):
        raise ValueError("lambda must lie in (1/2, 1)")
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    x, y, z = (Fraction(c) for c in point)
    q = v.q
    d2 = abs(y - Fraction(v.r, q))
    if _cmp_eps_power(d2, eps, q, lam - 2) >= 0:
        return False
    d1 = abs(x - Fraction(v.p, q) - z * (y - Fraction(v.r, q)))
    return _cmp_eps_power(d1, eps, q, -(1 + lam)) < 0


class Intersect(enum.Enum):
    EMPTY = "empty"
    NONEMPTY = "nonempty"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class IntersectResult:
    status: Intersect
    witness: Optional[Tuple[Fraction, Vec3]] = None


def _witness_points(ball: ProductBall, v: RationalDirection) -> Iterator[Vec3]:
    """Center, then a projection toward the tube axis within the ball."""
    x, y, z = ball.center
    yield ball.center
    rho = ball.radius
    rq = Fraction(v.r, v.q)
    budget = 2 * rho / 3  # two coordinate moves of this size stay in the ball
    dy = y - rq
    stepy = min(abs(dy), budget)
    y_w = y - (stepy if dy > 0 else -stepy)
    tx = Fraction(v.p, v.q) + z * (y_w - rq)
    dx = x - tx
    stepx = min(abs(dx), budget)
    x_w = x - (stepx if dx > 0 else -stepx)
    if (x_w, y_w) != (x, y):
        yield (x_w, y_w, z)


def delta_ball_intersects(ball: ProductBall, v: RationalDirection,
                          epsilon: Fraction) -> IntersectResult:
    """Three-valued intersection test of the (all-lambda) tube with a ball.

    Emptiness is certified by coordinate separation with worst-case
    exponents over the ball's lambda-interval; non-emptiness by an explicit
    member point on the center slice.  Everything else is Unknown.
    """
    eps = Fraction(epsilon)
    lam, rho = ball.lam, ball.radius
    x, y, z = ball.center
    q = v.q
    rq = Fraction(v.r, q)
    d2 = abs(y - rq)
    try:
        if _cmp_eps_power(d2 - rho, eps, q, lam + rho - 2) >= 0:
            return IntersectResult(Intersect.EMPTY)
    except PrecisionExhausted:
        pass
    d1 = abs(x - Fraction(v.p, q) - z * (y - rq))
    # worst-case drift of x - p/q - z*(y - r/q) over the ball
    reff = rho * (1 + abs(z) + rho + d2)
    try:
        if _cmp_eps_power(d1 - reff, eps, q, rho - lam - 1) >= 0:
            return IntersectResult(Intersect.EMPTY)
    except PrecisionExhausted:
        pass
    for pt in _witness_points(ball, v):
        try:
            if delta_membership(lam, pt, v, eps):
                return IntersectResult(Intersect.NONEMPTY, (lam, pt))
        except PrecisionExhausted:
            pass
    return IntersectResult(Intersect.UNKNOWN)


# ---------------------------------------------------------------------------
# Dual witnesses
# ---------------------------------------------------------------------------


def _dual_lattice_basis(p: int, r: int, q: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Basis of {(a, b) : q divides a*p + b*r}; determinant q (up to sign)."""
    if q == 1:
        return (1, 0), (0, 1)
    g, s, t = gmpy2.gcdext(p, r)
    g, s, t = int(g), int(s), int(t)
    # primitivity of (p, r, q) makes g coprime to q, so the two vectors
    # below span a sublattice of full index q = covolume
    return (r // g, -(p // g)), (q * s, q * t)


def _gauss_reduce(b1: Tuple[int, int], b2: Tuple[int, int],
                  wa: Fraction, wb: Fraction, z: Fraction):
    """Lagrange reduction under the surrogate form wa*a^2 + wb*(b+z*a)^2."""

    def qf(u):
        t = Fraction(u[1]) + z * u[0]
        return wa * u[0] * u[0] + wb * t * t

    def bf(u, v):
        tu = Fraction(u[1]) + z * u[0]
        tv = Fraction(v[1]) + z * v[0]
        return wa * u[0] * v[0] + wb * tu * tv

    for _ in range(1000):
        if qf(b1) > qf(b2):
            b1, b2 = b2, b1
        q1 = qf(b1)
        if q1 == 0:
            break
        mu = math.floor(bf(b1, b2) / q1 + HALF)
        if mu == 0:
            break
        b2 = (b2[0] - mu * b1[0], b2[1] - mu * b1[1])
    if qf(b1) > qf(b2):
        b1, b2 = b2, b1
    return b1, b2


class _WitnessBox:
    """Certified membership test |a| <= E*q^lam, |b+z*a| <= E*q^(1-lam)."""

    def __init__(self, ball: ProductBall, q: int):
        self.q = q
        self.z = ball.center[2]
        lam, rho = ball.lam, ball.radius
        self.make_a = lambda bits: exp_sqrt(rho, bits) * pow_real(q, lam, bits)
        self.make_w = lambda bits: exp_sqrt(rho, bits) * pow_real(q, 1 - lam, bits)
        ia, iw = self.make_a(128), self.make_w(128)
        self.a_lo, self.a_hi = ia.lo_fraction(), ia.hi_fraction()
        self.w_lo, self.w_hi = iw.lo_fraction(), iw.hi_fraction()

    def _le(self, val: Fraction, lo: Fraction, hi: Fraction, maker) -> bool:
        if val <= lo:
            return True
        if val > hi:
            return False
        # E*q^lam is transcendental, so the comparison always resolves
        c = decide(lambda bits: CertInterval.from_rational(val, bits), maker)
        return c is Cmp.LESS

    def contains(self, a: int, b: int) -> bool:
        wv = abs(Fraction(b) + self.z * a)
        return (self._le(Fraction(abs(a)), self.a_lo, self.a_hi, self.make_a)
                and self._le(wv, self.w_lo, self.w_hi, self.make_w))


def _reduced_setup(ball: ProductBall, v: RationalDirection):
    """Reduced lattice basis, slice bound n_max and box tester for (ball, v)."""
    if not v.is_primitive():
        raise ValueError("dual witnesses require a primitive direction")
    lam, rho = ball.lam, ball.radius
    z = ball.center[2]
    q = v.q
    wa = 1 / pow_real(q, 2 * lam, 64).hi_fraction()
    wb = 1 / pow_real(q, 2 * (1 - lam), 64).hi_fraction()
    s1, s2 = _gauss_reduce(*_dual_lattice_basis(v.p, v.r, q), wa, wb, z)
    # |slice index| <= ||s1||_2 * ||target||_2 in rescaled coordinates
    # (covolume 1), and both norms are at most sqrt(2) * their sup norms
    na = pow_real(q, -lam, 128).scale(abs(s1[0])).hi_fraction()
    nw = pow_real(q, lam - 1, 128).scale(
        abs(Fraction(s1[1]) + z * s1[0])).hi_fraction()
    e_hi = exp_sqrt(rho, 128).hi_fraction()
    n_max = max(1, math.ceil(2 * e_hi * max(na, nw)))
    return s1, s2, n_max, _WitnessBox(ball, q)


def _m_interval(constraints) -> Optional[Tuple[int, int]]:
    """Integer m-range satisfying |slope*m + intercept| <= bound for all."""
    lo = hi = None
    for slope, intercept, bound in constraints:
        if slope == 0:
            if abs(intercept) > bound:
                return None
            continue
        e1 = (-bound - intercept) / slope
        e2 = (bound - intercept) / slope
        l, h = (e1, e2) if e1 <= e2 else (e2, e1)
        lo = l if lo is None or l > lo else lo
        hi = h if hi is None or h < hi else hi
    if lo is None or hi < lo:
        return None
    return math.ceil(lo), math.floor(hi)


def _slice_forms(s1, s2, z: Fraction, n: int):
    """Linear forms A(m) = a, W(m) = b + z*a along slice n of the basis."""
    a_slope, a_int = s1[0], n * s2[0]
    w_slope = Fraction(s1[1]) + z * s1[0]
    w_int = n * (Fraction(s2[1]) + z * s2[0])
    return a_slope, Fraction(a_int), w_slope, w_int


def _slice_candidates(q: int, lam: Fraction, s1, s2, z: Fraction, n: int) -> List[int]:
    """Integer m values bracketing the scaled-sup minimum on slice n."""
    a_slope, a_int, w_slope, w_int = _slice_forms(s1, s2, z, n)

    def around(m: Fraction) -> List[int]:
        f = math.floor(m)
        return [f - 1, f, f + 1, f + 2]

    if a_slope == 0 and w_slope == 0:
        raise RuntimeError("degenerate lattice basis")
    if a_slope == 0:
        return around(-w_int / w_slope)
    if w_slope == 0:
        return around(-a_int / a_slope)
    m_a = -a_int / Fraction(a_slope)
    m_w = -w_int / w_slope
    cands = set(around(m_a)) | set(around(m_w))
    lo, hi = (m_a, m_w) if m_a <= m_w else (m_w, m_a)
    ilo, ihi = math.floor(lo), math.ceil(hi)
    if ihi - ilo > 3:
        # between the two vertices max(|A|/q^lam, |W|/q^(1-lam)) is
        # unimodal; locate the dominance flip by certified bisection
        def a_dominates(m: int) -> int:
            av = abs(a_slope * m + a_int)
            wv = abs(w_slope * m + w_int)
            if wv == 0:
                return 1 if av > 0 else 0
            try:
                return _cmp_eps_power(av, wv, q, 2 * lam - 1)
            except PrecisionExhausted:
                return 0
        sign_lo = a_dominates(ilo)
        while ihi - ilo > 1:
            mid = (ilo + ihi) // 2
            if a_dominates(mid) == sign_lo:
                ilo = mid
            else:
                ihi = mid
        cands |= {ilo - 1, ilo, ihi, ihi + 1}
    return sorted(cands)


_TIE_SWEEP_CAP = 10_000


def minimal_dual(ball: ProductBall, v: RationalDirection) -> DualWitness:
    """The witness minimizing max{|a|, |b+z*a|}, ties broken lexicographically.

    Tie-break key: (max{|a|, |b+z*a|}, |a|, |b|, a, b), smallest wins.
    """
    z = ball.center[2]
    q = v.q
    s1, s2, n_max, box = _reduced_setup(ball, v)

    best_key = None
    best = None

    def offer(a: int, b: int) -> None:
        nonlocal best_key, best
        if a == 0 and b == 0:
            return
        h = max(Fraction(abs(a)), abs(Fraction(b) + z * a))
        key = (h, abs(a), abs(b), a, b)
        if best_key is not None and key >= best_key:
            return
        if box.contains(a, b):
            best_key, best = key, (a, b)

    # phase 1: per-slice scaled-sup minimization; a shortest-by-volume
    # lattice point has scaled sup norm <= 1 < E, so some slice succeeds
    for n in range(-n_max, n_max + 1):
        for m in _slice_candidates(q, ball.lam, s1, s2, z, n):
            offer(m * s1[0] + n * s2[0], m * s1[1] + n * s2[1])
    if best is None:
        raise RuntimeError("no dual witness found; lattice invariant violated")

    # phase 2: exact sweep of every point with objective <= current best,
    # which settles the minimum and its ties without rounding
    for n in range(-n_max, n_max + 1):
        bound = best_key[0]
        a_slope, a_int, w_slope, w_int = _slice_forms(s1, s2, z, n)
        rng = _m_interval([(Fraction(a_slope), a_int, bound),
                           (w_slope, w_int, bound)])
        if rng is None:
            continue
        m_lo, m_hi = rng
        if m_hi - m_lo > _TIE_SWEEP_CAP:
            raise RuntimeError("tie sweep unexpectedly large; basis not reduced")
        for m in range(m_lo, m_hi + 1):
            offer(m * s1[0] + n * s2[0], m * s1[1] + n * s2[1])

    a, b = best
    c = -(a * v.p + b * v.r) // q
    return DualWitness(a, b, c)


def enumerate_dual_witnesses(ball: ProductBall, v: RationalDirection,
                             cap: int = 100_000) -> List[DualWitness]:
    """The complete witness set for (ball, v), sorted by (a, b)."""
    z = ball.center[2]
    q = v.q
    s1, s2, n_max, box = _reduced_setup(ball, v)
    out = []
    for n in range(-n_max, n_max + 1):
        a_slope, a_int, w_slope, w_int = _slice_forms(s1, s2, z, n)
        rng = _m_interval([(Fraction(a_slope), a_int, box.a_hi),
                           (w_slope, w_int, box.w_hi)])
        if rng is None:
            continue
        for m in range(rng[0], rng[1] + 1):
            a = m * s1[0] + n * s2[0]
            b = m * s1[1] + n * s2[1]
            if (a == 0 and b == 0) or not box.contains(a, b):
                continue
            out.append(DualWitness(a, b, -(a * v.p + b * v.r) // q))
            if len(out) > cap:
                raise RuntimeError(f"witness set exceeds cap {cap}")
    if not out:
        raise RuntimeError("empty witness set; volume bound violated")
    out.sort(key=lambda w: (w.a, w.b))
    return out


def height(ball: ProductBall, v: RationalDirection) -> Fraction:
    """q * max{|a|, |b + z*a|} for the minimal dual witness."""
    w = minimal_dual(ball, v)
    z = ball.center[2]
    return v.q * max(Fraction(abs(w.a)), abs(Fraction(w.b) + z * w.a))


# ---------------------------------------------------------------------------
# Planes
# ---------------------------------------------------------------------------


def plane_from_dual(w: DualWitness) -> AvoidancePlane:
    """The plane a*x + b*y + c = 0 determined by a dual witness."""
    return AvoidancePlane((Fraction(w.a), Fraction(w.b), Fraction(0)),
                          Fraction(w.c))


def plane_case_ii(v0: RationalDirection, z_center: Fraction) -> AvoidancePlane:
    """The plane x - p0/q0 - z_c*(y - r0/q0) = 0 through a single direction."""
    z_c = Fraction(z_center)
    off = z_c * Fraction(v0.r, v0.q) - Fraction(v0.p, v0.q)
    return AvoidancePlane((Fraction(1), -z_c, Fraction(0)), off)


def cross_product(v1: RationalDirection, v2: RationalDirection) -> DualWitness:
    """(p,r,q)-cross product of two directions, read as a dual witness."""
    return DualWitness(v1.r * v2.q - v1.q * v2.r,
                       v1.q * v2.p - v1.p * v2.q,
                       v1.p * v2.r - v1.r * v2.p)


# ---------------------------------------------------------------------------
# Direction scan
# ---------------------------------------------------------------------------

_CHUNK = 1 << 21
_FLOAT_MARGIN = 1e-4


def _scan_chunk_fast(qa: int, qb: int, x: Fraction, y: Fraction, z: Fraction,
                     rho: Fraction, eps: Fraction, lam: Fraction,
                     reff: Fraction) -> List[Tuple[int, int, int]]:
    """Float prefilter over q in [qa, qb]; keeps a superset of candidates."""
    qs = np.arange(qa, qb + 1, dtype=np.float64)
    qy = qs * float(y)
    rn = np.rint(qy)
    thr2 = qs * float(rho) + float(eps) * qs ** float(lam + rho - 1) + _FLOAT_MARGIN
    m1 = np.abs(qy - rn) <= thr2
    if not m1.any():
        return []
    qs1, rn1 = qs[m1], rn[m1]
    t = qs1 * float(x) - float(z) * (qs1 * float(y) - rn1)
    pn = np.rint(t)
    thr1 = qs1 * float(reff) + float(eps) * qs1 ** float(rho - lam) + _FLOAT_MARGIN
    m2 = np.abs(t - pn) <= thr1
    return [(int(qs1[i]), int(rn1[i]), int(pn[i]))
            for i in np.flatnonzero(m2)]


def _scan_chunk_slow(qa: int, qb: int, x: Fraction, y: Fraction, z: Fraction,
                     rho: Fraction, eps: Fraction) -> List[Tuple[int, int, int]]:
    """Exhaustive (r, p) window enumeration; used when windows are wide."""
    out = []
    for q in range(qa, qb + 1):
        t2 = rho + eps / q
        for r in range(math.ceil(q * (y - t2)), math.floor(q * (y + t2)) + 1):
            d2 = abs(y - Fraction(r, q))
            t1 = rho * (1 + abs(z) + rho + d2) + eps / q
            cx = x - z * (y - Fraction(r, q))
            for p in range(math.ceil(q * (cx - t1)), math.floor(q * (cx + t1)) + 1):
                out.append((q, r, p))
    return out


def candidate_directions(ball: ProductBall, q_lo: Fraction, q_hi: Fraction,
                         epsilon: Fraction, budget: int = 10 ** 6,
                         stop_when: Optional[Callable[[List[RationalDirection]], bool]]
                         = None) -> List[RationalDirection]:
    """All primitive v with q in [q_lo, q_hi] whose tube may meet the ball.

    Complete: every direction whose tube is not certifiably disjoint from
    the ball is returned.  Scans q in ascending order; `stop_when` may end
    the scan early once the collected prefix suffices.  Raises
    BudgetExceeded when floor(q_hi) exceeds `budget`.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    lam, rho = ball.lam, ball.radius
    x, y, z = ball.center
    q_start = max(1, math.ceil(Fraction(q_lo)))
    q_end = math.floor(Fraction(q_hi))
    if q_end > budget:
        raise BudgetExceeded(
            f"scan upper bound {q_end} exceeds the q budget {budget}")
    # uniform drift bound: d2 <= rho + eps/q <= rho + eps
    reff_max = rho * (1 + abs(z) + 2 * rho + eps)
    found: List[RationalDirection] = []
    qa = q_start
    while qa <= q_end:
        qb = min(qa + _CHUNK - 1, q_end)
        # the nearest-integer prefilter needs sub-half windows
        fast = (qb * rho + eps < Fraction(1, 4)
                and qb * reff_max + eps < Fraction(1, 4))
        if fast:
            triples = _scan_chunk_fast(qa, qb, x, y, z, rho, eps, lam, reff_max)
        else:
            triples = _scan_chunk_slow(qa, qb, x, y, z, rho, eps)
        triples.sort()
        for q, r, p in triples:
            if math.gcd(math.gcd(abs(p), abs(r)), q) != 1:
                continue
            d2 = abs(y - Fraction(r, q))
            if q * d2 > q * rho + eps:
                continue
            d1 = abs(x - Fraction(p, q) - z * (y - Fraction(r, q)))
            if q * d1 > q * rho * (1 + abs(z) + rho + d2) + eps:
                continue
            vdir = RationalDirection(p, r, q)
            if delta_ball_intersects(ball, vdir, eps).status is not Intersect.EMPTY:
                found.append(vdir)
                if stop_when is not None and stop_when(found):
                    return found
        qa = qb + 1
    return found
