"""Unipotent lattices, the diagonal flow, and certified shortest vectors.

The bridge identity: for u = u_{x,y,z} and a direction v = (p, r, q),
u^-1 v = (-q*d1, -q*d2, q) with d1 = x - p/q - z*(y - r/q) and
d2 = y - r/q; flowing by diag(e^(lam*t), e^((1-lam)*t), e^(-t)) at
t = log q turns this into (-q^(1+lam)*d1, -q^(2-lam)*d2, 1), whose
sup-norm is below eps exactly when the point lies in the tube of v.
Systoles of the flowed lattice are monitored with certified interval
arithmetic: exact rational LLL on midpoints, then exhaustive enumeration
inside an outward-rounded ellipsoid cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .certarith import (CertInterval, IntervalLike, PrecisionExhausted,
                        as_interval, pow_real)
from .game import Vec3
from .geometry import RationalDirection

Matrix3 = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class UpperUnipotent:
    x: Fraction
    y: Fraction
    z: Fraction

    def matrix(self) -> Matrix3:
        o, l = Fraction(0), Fraction(1)
        return ((l, self.z, self.x), (o, l, self.y), (o, o, l))


def unipotent_inverse(u: UpperUnipotent) -> Matrix3:
    """Exact inverse; rows (1, -z, z*y - x), (0, 1, -y), (0, 0, 1)."""
    o, l = Fraction(0), Fraction(1)
    return ((l, -u.z, u.z * u.y - u.x), (o, l, -u.y), (o, o, l))


def mat_mul(a: Matrix3, b: Matrix3) -> Matrix3:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3))
                       for j in range(3)) for i in range(3))


def flowed_direction_vector(lam: Fraction, point: Vec3, v: RationalDirection,
                            bits: int = 128) -> Tuple[CertInterval, ...]:
    """g_{log q} u^-1 (p, r, q)^T = (-q^(1+lam)*d1, -q^(2-lam)*d2, 1)."""
    lam = Fraction(lam)
    x, y, z = (Fraction(c) for c in point)
    q = v.q
    d2 = y - Fraction(v.r, q)
    d1 = x - Fraction(v.p, q) - z * d2
    return (pow_real(q, 1 + lam, bits).scale(-d1),
            pow_real(q, 2 - lam, bits).scale(-d2),
            CertInterval.from_rational(1, bits))


def unflowed_direction_vector(point: Vec3, v: RationalDirection) -> Vec3:
    """u^-1 (p, r, q)^T, exactly."""
    x, y, z = (Fraction(c) for c in point)
    d2 = y - Fraction(v.r, v.q)
    d1 = x - Fraction(v.p, v.q) - z * d2
    return (-v.q * d1, -v.q * d2, Fraction(v.q))


@dataclass(frozen=True)
class LatticeBasis:
    """Columns are basis vectors; entries are certified intervals."""

    rows: Tuple[Tuple[CertInterval, ...], ...]

    def column(self, j: int) -> Tuple[CertInterval, ...]:
        return tuple(self.rows[i][j] for i in range(3))

    def det_interval(self) -> CertInterval:
        m = self.rows
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    @staticmethod
    def from_rational(m: Matrix3, bits: int = 128) -> "LatticeBasis":
        return LatticeBasis(tuple(
            tuple(CertInterval.from_rational(e, bits) for e in row)
            for row in m))


def flow_factors(lam: Fraction, t: IntervalLike,
                 bits: int = 192) -> Tuple[CertInterval, ...]:
    """diag entries (e^(lam*t), e^((1-lam)*t), e^(-t)) as intervals."""
    ti = as_interval(t, bits)
    return (ti.scale(Fraction(lam)).exp(),
            ti.scale(1 - Fraction(lam)).exp(),
            ti.scale(Fraction(-1)).exp())


def flow_basis(lam: Fraction, point: Vec3, t: IntervalLike,
               bits: int = 192) -> LatticeBasis:
    """Basis of g_t u^-1 Z^3: rows of u^-1 scaled by the flow factors."""
    inv = unipotent_inverse(UpperUnipotent(*(Fraction(c) for c in point)))
    f = flow_factors(lam, t, bits)
    return LatticeBasis(tuple(
        tuple(f[i].scale(inv[i][j]) for j in range(3)) for i in range(3)))


# ---------------------------------------------------------------------------
# Certified shortest vector
# ---------------------------------------------------------------------------


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum(x * y for x, y in zip(a, b))


def _lll_transform(cols: List[List[Fraction]]) -> List[List[int]]:
    """Exact LLL (delta = 3/4) on 3 columns; returns the unimodular U."""
    b = [list(c) for c in cols]
    u = [[int(i == j) for j in range(3)] for i in range(3)]  # columns of U

    def gso():
        bs, mu = [], [[Fraction(0)] * 3 for _ in range(3)]
        for i in range(3):
            v = list(b[i])
            for j in range(i):
                mu[i][j] = _dot(b[i], bs[j]) / _dot(bs[j], bs[j])
                v = [x - mu[i][j] * y for x, y in zip(v, bs[j])]
            bs.append(v)
        return bs, mu

    k = 1
    for _ in range(1000):
        if k >= 3:
            break
        bs, mu = gso()
        for j in range(k - 1, -1, -1):
            r = math.floor(mu[k][j] + Fraction(1, 2))
            if r:
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                u[k] = [x - r * y for x, y in zip(u[k], u[j])]
                bs, mu = gso()
        if _dot(bs[k], bs[k]) >= (Fraction(3, 4) - mu[k][k - 1] ** 2) \
                * _dot(bs[k - 1], bs[k - 1]):
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            k = max(k - 1, 1)
    return u


def _interval_norm2(col: Sequence[CertInterval]) -> CertInterval:
    acc = col[0] * col[0]
    for c in col[1:]:
        acc = acc + c * c
    return acc


def shortest_vector(basis: LatticeBasis) -> Tuple[Tuple[int, int, int], CertInterval]:
    """A nonzero integer combination of columns of certified minimal length.

    Midpoint LLL picks the search frame; an outward-rounded
    Gram-Schmidt ellipsoid cover makes the enumeration exhaustive.
    Raises PrecisionExhausted when entry intervals are too wide to
    bound the search box.
    """
    mids = [[(basis.rows[i][j].lo_fraction() + basis.rows[i][j].hi_fraction()) / 2
             for i in range(3)] for j in range(3)]  # columns
    u = _lll_transform(mids)
    cols = [_combine(basis, u[j]) for j in range(3)]

    # interval Gram-Schmidt of the reduced columns
    n2 = [_interval_norm2(c) for c in cols]
    a_bound = min(n.hi_fraction() for n in n2)  # some column is this short
    gs: List[Tuple[CertInterval, ...]] = []
    mu: List[List[CertInterval]] = [[None] * 3 for _ in range(3)]
    for i in range(3):
        v = list(cols[i])
        for j in range(i):
            den = _interval_norm2(gs[j])
            if den.lo_fraction() <= 0:
                raise PrecisionExhausted("basis intervals too wide for GSO")
            m = _interval_dot(cols[i], gs[j]) / den
            mu[i][j] = m
            v = [x - m * y for x, y in zip(v, gs[j])]
        gs.append(tuple(v))
    gs_lo = []
    for g in gs:
        lo = _interval_norm2(g).lo_fraction()
        if lo <= 0:
            raise PrecisionExhausted("basis intervals too wide for GSO")
        gs_lo.append(lo)

    def iroot_ceil(x: Fraction) -> int:
        if x <= 0:
            return 0
        n = math.isqrt(x.numerator // x.denominator) + 1
        return n

    c3 = iroot_ceil(a_bound / gs_lo[2])
    mu_abs = lambda i, j: max(abs(mu[i][j].lo_fraction()), abs(mu[i][j].hi_fraction()))
    c2 = iroot_ceil(a_bound / gs_lo[1]) + math.ceil(mu_abs(2, 1) * c3)
    c1 = iroot_ceil(a_bound / gs_lo[0]) \
        + math.ceil(mu_abs(1, 0) * c2) + math.ceil(mu_abs(2, 0) * c3)
    if (2 * c1 + 1) * (2 * c2 + 1) * (2 * c3 + 1) > 2_000_000:
        raise PrecisionExhausted("shortest-vector search box too large")

    best = None
    for k3 in range(-c3, c3 + 1):
        for k2 in range(-c2, c2 + 1):
            for k1 in range(-c1, c1 + 1):
                if k1 == k2 == k3 == 0:
                    continue
                vec = [cols[0][i].scale(k1) + cols[1][i].scale(k2)
                       + cols[2][i].scale(k3) for i in range(3)]
                l2 = _interval_norm2(vec)
                key = (l2.hi_fraction(), k1, k2, k3)
                if best is None or key < best[0]:
                    best = (key, (k1, k2, k3), l2)
    coeffs_red, l2 = best[1], best[2]
    # translate back through the unimodular transform, canonical sign
    coeffs = tuple(sum(u[j][i] * coeffs_red[j] for j in range(3))
                   for i in range(3))
    for c in coeffs:
        if c:
            if c < 0:
                coeffs = tuple(-x for x in coeffs)
            break
    return coeffs, l2.sqrt()


def _combine(basis: LatticeBasis, coeffs: Sequence[int]) -> Tuple[CertInterval, ...]:
    """Integer combination of basis columns, per row."""
    out = []
    for i in range(3):
        acc = basis.rows[i][0].scale(coeffs[0])
        acc = acc + basis.rows[i][1].scale(coeffs[1])
        acc = acc + basis.rows[i][2].scale(coeffs[2])
        out.append(acc)
    return tuple(out)


def _interval_dot(a: Sequence[CertInterval], b: Sequence[CertInterval]) -> CertInterval:
    acc = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        acc = acc + x * y
    return acc


# ---------------------------------------------------------------------------
# Trajectories and certificates
# ---------------------------------------------------------------------------


def systole_trajectory(lam: Fraction, point: Vec3, t_max: Fraction,
                       steps: int, bits: int = 192) -> List[dict]:
    """Shortest-vector lengths of g_t u^-1 Z^3 at equally spaced times."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    lam = Fraction(lam)
    t_max = Fraction(t_max)
    out = []
    for j in range(steps + 1):
        t = t_max * j / steps
        basis = flow_basis(lam, point, t, bits)
        coeffs, length = shortest_vector(basis)
        out.append({"t": t, "lo": length.lo_fraction(),
                    "hi": length.hi_fraction(), "coeffs": coeffs})
    return out


def escape_certificate(lam: Fraction, point: Vec3, v: RationalDirection,
                       t: IntervalLike, bits: int = 192) -> CertInterval:
    """Certified length of the flowed lattice vector u^-1 (p, r, q)^T."""
    w0 = unflowed_direction_vector(point, v)
    f = flow_factors(lam, t, bits)
    vec = [f[i].scale(w0[i]) for i in range(3)]
    return _interval_norm2(vec).sqrt()
