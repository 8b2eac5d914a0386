"""Minkowski lattices of ideals and exact lattice-point counting.

Enumeration uses Gram-Schmidt bounds computed in floating point with a
safety margin, so it may visit a few points just outside the ball; every
candidate is then judged by an exact predicate, which makes the count exact.
"""

from dataclasses import dataclass
import math

import numpy as np

from .ideals import IdealHNF


@dataclass
class LatticeBasis:
    """Rows are Minkowski images (Re s_1, Im s_1, ..., Re s_N, Im s_N)."""

    rows: np.ndarray
    det: float
    ideal: IdealHNF | None = None
    coords: tuple | None = None   # integral K-coordinates of each basis row

    @property
    def dimension(self):
        return self.rows.shape[0]

    def point(self, coeffs):
        return np.asarray(coeffs, dtype=float) @ self.rows

    def element(self, coeffs):
        """K-coordinates of the lattice vector with integer coefficients."""
        n = len(self.coords[0])
        out = [0] * n
        for c, row in zip(coeffs, self.coords):
            if c:
                for i, x in enumerate(row):
                    out[i] += c * x
        return tuple(out)


def minkowski_lattice(fd, ideal):
    rows = []
    for r in ideal.matrix:
        v = []
        for z in fd.embed_float(r):
            v += [z.real, z.imag]
        rows.append(v)
    rows = np.array(rows, dtype=float)
    return LatticeBasis(rows, abs(float(np.linalg.det(rows))), ideal, ideal.matrix)


def expected_det(fd, ideal):
    return 2.0 ** (-fd.degree_N) * ideal.norm * math.sqrt(abs(fd.disc_K))


def integer_lattice(rows):
    rows = np.array(rows, dtype=float)
    return LatticeBasis(rows, abs(float(np.linalg.det(rows))), None,
                        tuple(tuple(int(round(x)) for x in r) for r in rows))


# ---------------------------------------------------------------------------
# enumeration


def _gram_schmidt(B):
    n = B.shape[0]
    mu = np.zeros((n, n))
    bstar = np.zeros_like(B)
    norms = np.zeros(n)
    for i in range(n):
        v = B[i].copy()
        for j in range(i):
            mu[i, j] = B[i] @ bstar[j] / norms[j]
            v -= mu[i, j] * bstar[j]
        bstar[i] = v
        norms[i] = v @ v
    return mu, norms


def enumerate_ball(lattice, radius_sq):
    """Coefficient vectors x with |x B| <= radius (plus a tiny margin).

    Fincke-Pohst style depth-first search, last coordinate first.
    """
    B = lattice.rows
    n = B.shape[0]
    mu, norms = _gram_schmidt(B)
    R = radius_sq * (1 + 1e-9) + 1e-9
    x = [0] * n
    out = []

    def rec(i, rem):
        # centre of coordinate i given the coordinates above it
        c = -sum(mu[j, i] * x[j] for j in range(i + 1, n))
        w = math.sqrt(max(rem, 0.0) / norms[i])
        lo = math.ceil(c - w - 1e-9)
        hi = math.floor(c + w + 1e-9)
        for v in range(lo, hi + 1):
            x[i] = v
            r = rem - (v - c) ** 2 * norms[i]
            if r < -1e-9 * R:
                continue
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, r)
        x[i] = 0

    rec(n - 1, R)
    return out


def count_points(lattice, predicate, radius_sq, collect=False):
    """Exact number of nonzero lattice points satisfying ``predicate``.

    ``predicate`` receives integral K-coordinates (or the coefficient vector
    when the lattice carries no coordinates) and must be exact.  Points on
    the sphere of radius sqrt(radius_sq) are passed to the predicate.
    """
    count = 0
    pts = [] if collect else None
    for x in enumerate_ball(lattice, radius_sq):
        if not any(x):
            continue
        e = lattice.element(x) if lattice.coords is not None else x
        if predicate(e):
            count += 1
            if collect:
                pts.append(e)
    return count, pts


# Hermite constants gamma_D^D for the dimensions we meet
_HERMITE_POW = {1: 1.0, 2: 4 / 3, 3: 2.0, 4: 4.0}


def shortest_vector(lattice):
    """An exactly shortest nonzero vector (as coefficients) and its length."""
    B = lattice.rows
    D = B.shape[0]
    r2 = min(float(b @ b) for b in B)
    if D in _HERMITE_POW:
        # lambda_1^2 <= gamma_D det^(2/D)
        r2 = min(r2, (_HERMITE_POW[D] * lattice.det ** 2) ** (1 / D) * (1 + 1e-9))
    best, best_len = None, math.inf
    for x in enumerate_ball(lattice, r2):
        if any(x):
            v = lattice.point(x)
            ln = float(v @ v)
            if ln < best_len:
                best, best_len = x, ln
    return best, math.sqrt(best_len)


def error_certificate(D, M, L, lam1):
    """2 D^(3D^2/2) M (L / lambda_1)^(D-1)."""
    return 2.0 * D ** (1.5 * D * D) * M * (L / lam1) ** (D - 1)


# ---------------------------------------------------------------------------
# exact counting in a plane sector (N = 1)


def count_sector(fd, ideal, cap, interval, collect=False):
    """#{beta in ideal, beta != 0 : N(beta) <= cap, arg sigma(beta) in interval}.

    Specialised to imaginary quadratic K.  The interval must have length at
    most pi.  Each lattice row is a line on which the norm bound is an exact
    integer quadratic inequality and the sector is an interval found in
    floating point; only points within a small margin of the sector's ends
    go through the exact argument test.
    """
    from fractions import Fraction
    (h11, h12), (_, h22) = ideal.matrix
    c0, c1 = fd.ring.poly[0], fd.ring.poly[1]
    cap = Fraction(cap)
    num, den = cap.numerator, cap.denominator
    if num < 0:
        return (0, []) if collect else (0, None)
    z = fd.roots_float[0]
    lo, hi = float(interval.lo), float(interval.hi)
    elo = complex(math.cos(lo), math.sin(lo))
    ehi = complex(math.cos(hi), math.sin(hi))
    d = h22 * z                      # direction of a row in C

    def norm_coeffs(x):
        # N(a + b t) = a^2 - c1 a b + c0 b^2 with a = x h11, b = x h12 + y h22
        a = x * h11
        b0 = x * h12
        # as polynomial in y: A y^2 + B y + C
        A = c0 * h22 * h22
        B = -c1 * a * h22 + 2 * c0 * b0 * h22
        C = a * a - c1 * a * b0 + c0 * b0 * b0
        return A, B, C

    def exact_ok(nums):
        return fd.certified_arg(nums, 0).in_interval(interval)

    # x range: |x| * (shortest distance of row x to origin) <= sqrt(cap)
    dist = abs((h11 + h12 * z).imag * d.real - (h11 + h12 * z).real * d.imag) / abs(d)
    xmax = int(math.floor(math.sqrt(float(cap)) / dist + 1e-9)) + 1
    count = 0
    pts = [] if collect else None
    for x in range(-xmax, xmax + 1):
        A, B, C = norm_coeffs(x)
        # den*(A y^2 + B y + C) <= num
        disc = B * B - 4 * A * (C - Fraction(num, den))
        if disc < 0:
            continue
        # exact y-range of the norm condition
        r = math.sqrt(float(disc))
        ya = math.ceil((-B - r) / (2 * A)) - 1
        yb = math.floor((-B + r) / (2 * A)) + 1
        while den * (A * ya * ya + B * ya + C) > num:
            ya += 1
            if ya > yb:
                break
        while yb >= ya and den * (A * yb * yb + B * yb + C) > num:
            yb -= 1
        if ya > yb:
            continue
        p0 = x * (h11 + h12 * z)
        if x == 0:
            # the row through the origin: two rays
            for sgn, rng in ((1, range(max(ya, 1), yb + 1)), (-1, range(ya, min(yb, -1) + 1))):
                if len(rng) and exact_ok((0, sgn * h22)):
                    count += len(rng)
                    if collect:
                        pts += [(0, y * h22) for y in rng]
            continue
        # sector constraints cross(e, p0 + y d) >= 0 / < 0, linear in y
        tlo, thi = ya, yb
        exact_all = False
        for e, sense in ((elo, 1), (ehi, -1)):
            k0 = sense * (e.real * p0.imag - e.imag * p0.real)
            k1 = sense * (e.real * d.imag - e.imag * d.real)
            scale = abs(p0) + abs(d) * (abs(ya) + abs(yb) + 1)
            if abs(k1) < 1e-12 * abs(d):
                if abs(k0) < 1e-9 * scale:
                    exact_all = True
                elif k0 < 0:
                    tlo, thi = 1, 0
                continue
            root = -k0 / k1
            if k1 > 0:
                tlo = max(tlo, root)
            else:
                thi = min(thi, root)
        if exact_all:
            for y in range(ya, yb + 1):
                nums = (x * h11, x * h12 + y * h22)
                if exact_ok(nums):
                    count += 1
                    if collect:
                        pts.append(nums)
            continue
        if tlo > thi + 1e-6:
            continue
        margin = 1e-7 * (1 + abs(tlo) + abs(thi))
        inner_lo = math.ceil(tlo + margin)
        inner_hi = math.floor(thi - margin)
        inner_lo = max(inner_lo, ya)
        inner_hi = min(inner_hi, yb)
        if inner_lo <= inner_hi:
            count += inner_hi - inner_lo + 1
            if collect:
                pts += [(x * h11, x * h12 + y * h22) for y in range(inner_lo, inner_hi + 1)]
        # boundary candidates get the exact test
        edge = set()
        for y in range(max(ya, math.floor(tlo - margin)), min(yb, math.ceil(tlo + margin)) + 1):
            edge.add(y)
        for y in range(max(ya, math.floor(thi - margin)), min(yb, math.ceil(thi + margin)) + 1):
            edge.add(y)
        for y in sorted(edge):
            if inner_lo <= y <= inner_hi:
                continue
            nums = (x * h11, x * h12 + y * h22)
            if exact_ok(nums):
                count += 1
                if collect:
                    pts.append(nums)
    return count, pts
