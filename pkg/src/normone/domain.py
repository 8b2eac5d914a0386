"""The unit-lattice fundamental domain and the regions counted by the sieve.

A point x of C^N lies in the region for arcs J and cap T when

* ``N(x) = prod |x_n|^2 <= T^(2N)`` (closed cap),
* the log-vector ``(2 log|x_n|)`` lies in ``F + (2,...,2) R`` where
  ``F = [0,1) u_1`` and ``u_1 = l(eps)`` for the fundamental unit eps (N = 2),
* ``arg x_n`` lies in the halved arc set J* for every n.

For elements of K every one of these tests is exact.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .angles import ArcProduct, Interval, PI, ZERO


# ---------------------------------------------------------------------------
# units of real quadratic fields


def fundamental_unit(disc):
    """Fundamental unit eps > 1 of the real quadratic order of discriminant ``disc``.

    Returns ``(coords, regulator)`` with coords over the basis {1, w},
    w = ((disc mod 2) + sqrt(disc)) / 2.  For ``disc == 1`` (k = Q) the basis
    is empty and the regulator is 1 by convention.
    """
    if disc == 1:
        return (), 1.0
    if disc <= 1 or disc % 4 not in (0, 1) or math.isqrt(disc) ** 2 == disc:
        raise ValueError(f"{disc} is not a real quadratic discriminant")
    b = disc % 2
    trace_w = b
    norm_w = (b - disc) // 4          # w^2 = trace_w*w - norm_w
    # continued fraction of w = (P + sqrt(d)) / Q
    P, Q, d = b, 2, disc
    p_prev, p_cur = 1, None
    q_prev, q_cur = 0, None
    sq = math.isqrt(d)
    first = True
    while True:
        a = (P + sq) // Q
        if first:
            p_cur, q_cur = a, 1
            first = False
        else:
            p_cur, p_prev = a * p_cur + p_prev, p_cur
            q_cur, q_prev = a * q_cur + q_prev, q_cur
        # candidate p - q*w' where w' = trace_w - w is the conjugate
        x, y = p_cur - q_cur * trace_w, q_cur
        if abs(x * x + trace_w * x * y + norm_w * y * y) == 1:
            eps = x + y * (b + math.sqrt(disc)) / 2
            if eps > 1:
                return (x, y), math.log(eps)
        P = a * Q - P
        Q = (d - P * P) // Q


# ---------------------------------------------------------------------------
# the region


def build_istar(arcs):
    """Per-coordinate lists of half-open intervals making up J*."""
    out = []
    for n, iv in enumerate(arcs.intervals):
        h = iv.half()
        out.append((h,) if n == 0 else (h, h.shifted_pi()))
    return tuple(out)


@dataclass(frozen=True)
class DomainUnit:
    """The generator used for F in coordinates that make membership exact."""

    eps_k: tuple          # k-coordinates of eps, |sigma_1(eps)| > 1
    eps4_sigma1: object   # sigma_1(eps^4) as an exact QuadReal
    g: float              # |sigma_1(eps)|
    log_g: float


def domain_unit(fd):
    if fd.degree_N == 1:
        return None
    if fd.degree_N != 2:
        raise NotImplementedError("only N <= 2 is supported")
    u = fd.units[0]
    cands = [u, fd.inv_k(u)]
    cands += [tuple(-x for x in c) for c in cands]
    best = max(cands, key=lambda c: float(fd.sigma_k(c, 0)))
    eps = tuple(Fraction(x) for x in best)
    e2 = _kmul(fd, eps, eps)
    e4 = _kmul(fd, e2, e2)
    g = float(fd.sigma_k(eps, 0))
    return DomainUnit(eps, fd.sigma_k(e4, 0), g, math.log(g))


def _kmul(fd, a, b):
    c0, c1 = fd.ringk.poly[0], fd.ringk.poly[1]
    t = a[1] * b[1]
    return (a[0] * b[0] - c0 * t, a[0] * b[1] + a[1] * b[0] - c1 * t)


class RegionSF:
    """Region for an ArcProduct J and cap T^(2N) (``None`` means no cap)."""

    def __init__(self, fd, arcs, cap=None):
        if not isinstance(arcs, ArcProduct):
            arcs = ArcProduct(arcs)
        if arcs.N != fd.degree_N:
            raise ValueError(f"need {fd.degree_N} arcs, got {arcs.N}")
        self.fd = fd
        self.arcs = arcs
        self.istar = build_istar(arcs)
        self.cap = None if cap is None else Fraction(cap)
        self.unit = domain_unit(fd)

    def with_cap(self, cap):
        return RegionSF(self.fd, self.arcs, cap)

    @property
    def radius_sq(self):
        """Squared radius of a ball containing the region."""
        if self.cap is None:
            return math.inf
        t2 = float(self.cap) ** (1.0 / self.fd.degree_N)
        if self.fd.degree_N == 1:
            return t2
        return t2 * (self.unit.g ** 2 + 1)

    # exact tests on elements given by integral coordinates

    def in_cap(self, nums):
        if self.cap is None:
            return True
        return self.fd.ring.norm(nums) <= self.cap

    def in_F(self, nums):
        if self.fd.degree_N == 1:
            return True
        fd = self.fd
        nu = fd.norm_rel_nums(nums)
        s1 = fd.sigma_k(nu, 0)
        s2 = fd.sigma_k(nu, 1)
        return s1 >= s2 and s1 < self.unit.eps4_sigma1 * s2

    def in_args(self, nums):
        for n, pieces in enumerate(self.istar):
            arg = self.fd.certified_arg(nums, n)
            if not any(arg.in_interval(iv) for iv in pieces):
                return False
        return True

    def contains(self, nums):
        nums = tuple(nums)
        if not any(nums):
            return False
        return self.in_cap(nums) and self.in_F(nums) and self.in_args(nums)

    # numeric test for points of C^N (used by Monte Carlo)

    def contains_embedding(self, x):
        """Floating-point membership for an EmbeddingVector or sequence of complex."""
        vals = [complex(v) for v in getattr(x, "values", x)]
        mask = self.contains_array(np.array([vals]))
        return bool(mask[0])

    def contains_array(self, pts):
        """Vectorised float membership for an (m, N) complex array."""
        pts = np.asarray(pts, dtype=complex)
        mods2 = np.abs(pts) ** 2
        ok = np.all(mods2 > 0, axis=1)
        if self.cap is not None:
            ok &= np.prod(mods2, axis=1) <= float(self.cap)
        if self.fd.degree_N == 2:
            ratio = mods2[:, 0] / np.where(mods2[:, 1] > 0, mods2[:, 1], 1)
            ok &= (ratio >= 1) & (ratio < self.unit.g ** 4)
        args = np.mod(np.angle(pts), 2 * math.pi)
        for n, pieces in enumerate(self.istar):
            hit = np.zeros(len(pts), dtype=bool)
            for iv in pieces:
                hit |= (args[:, n] >= float(iv.lo)) & (args[:, n] < float(iv.hi))
            ok &= hit
        return ok


def region_contains(x, region):
    """Membership of an element (integral coordinates) or of an embedding vector."""
    if isinstance(x, tuple) and x and isinstance(x[0], int):
        return region.contains(x)
    if hasattr(x, "nums"):
        if x.den != 1:
            # the region is a cone in the arguments and scales by T
            scaled = region.with_cap(None if region.cap is None
                                     else region.cap * x.den ** region.fd.degree)
            return scaled.contains(x.nums)
        return region.contains(x.nums)
    return region.contains_embedding(x)


# ---------------------------------------------------------------------------
# volumes


def region_volume(fd, arcs, cap=1):
    """Closed-form volume |J| R_k / (2^N omega_k) * T^(2N)."""
    if not isinstance(arcs, ArcProduct):
        arcs = ArcProduct(arcs)
    N = fd.degree_N
    return arcs.measure * fd.regulator / (2 ** N * fd.omega_k) * float(cap)


def geometric_volume(fd, arcs, cap=1):
    """Volume integrated directly from the unit generator actually used for F.

    Equals |J|/2 * 2^-N * vol(F) / sqrt(N) * T^(2N), where vol(F) is the
    (N-1)-volume of [0,1) u_1 inside the trace-zero hyperplane.
    """
    if not isinstance(arcs, ArcProduct):
        arcs = ArcProduct(arcs)
    N = fd.degree_N
    if N == 1:
        volF = 1.0
    else:
        lg = domain_unit(fd).log_g
        volF = math.hypot(2 * lg, 2 * lg)
    return arcs.measure / 2 * 2 ** (-N) * volF / math.sqrt(N) * float(cap)


def mc_volume(fd, arcs, samples=10 ** 6, seed=0, batch=200_000):
    """Monte-Carlo volume of the region with T = 1: (estimate, standard error)."""
    region = RegionSF(fd, arcs, cap=1)
    rho = math.sqrt(region.radius_sq) * (1 + 1e-9)
    D = 2 * fd.degree_N
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        u = rng.uniform(-rho, rho, size=(m, D))
        pts = u[:, 0::2] + 1j * u[:, 1::2]
        hits += int(region.contains_array(pts).sum())
        done += m
    box = (2 * rho) ** D
    p = hits / samples
    return box * p, box * math.sqrt(p * (1 - p) / samples)


# ---------------------------------------------------------------------------
# Lipschitz data for the error certificate


def lipschitz_params(fd, arcs):
    """A valid (M, L) for the boundary of the region with T = 1.

    N = 1: two radii and the arc cut into two halves, each at most pi/2 long.
    N = 2: seven faces (cap, two F-walls, two arg faces per coordinate),
    each covered by one map per piece of the second coordinate's arc set.
    """
    if not isinstance(arcs, ArcProduct):
        arcs = ArcProduct(arcs)
    if fd.degree_N == 1:
        return 4, 2.0
    g = domain_unit(fd).g
    lg = math.log(g)
    star = build_istar(arcs)
    len1 = float(star[0][0].length)
    len2 = float(star[1][0].length)
    L = math.sqrt((g * g + 1) * (1 + lg * lg) + (g * len1) ** 2 + len2 ** 2)
    return 14, L


# ---------------------------------------------------------------------------
# reduction into the domain


def reduce_to_domain(fd, beta):
    """Return (beta', m, sign) with beta' = sign * eps^m * beta in the domain."""
    from .field import FieldElement
    if isinstance(beta, FieldElement):
        elem = beta
    else:
        elem = fd.element(beta)
    if elem.is_zero():
        raise ZeroDivisionError("cannot reduce zero")
    full = RegionSF(fd, ArcProduct.full(fd.degree_N), None)
    m = 0
    cur = elem
    if fd.degree_N == 2:
        du = full.unit
        eps = fd.from_k(du.eps_k)
        z = fd.embed_float(cur.nums, cur.den)
        t = math.log(abs(z[0]) ** 2 / abs(z[1]) ** 2) / (4 * du.log_g)
        m = -math.floor(t)
        cur = cur * eps ** m
        for _ in range(4):
            nums, den = cur.nums, cur.den
            nu = fd.norm_rel_nums(nums, den)
            s1, s2 = fd.sigma_k(nu, 0), fd.sigma_k(nu, 1)
            if s1 < s2:
                cur, m = cur * eps, m + 1
            elif not s1 < du.eps4_sigma1 * s2:
                cur, m = cur * fd.inv(eps), m - 1
            else:
                break
    sign = 1
    arg = fd.certified_arg(cur.nums, 0)
    if not arg.in_interval(Interval(ZERO, PI)):
        cur, sign = -cur, -1
    return cur, m, sign
