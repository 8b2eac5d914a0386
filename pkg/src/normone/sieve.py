"""Exact count of norm-one elements of bounded height by Moebius sieving.

For each class representative C and each divisor D of the ramified part,
the elements beta of C O_K D with beta O_K = C O_K D B, B primitive, are
counted in the region with cap T^(2N) = H^(2N) N(C O_K D).  Primitivity is
imposed by inclusion-exclusion over divisors E of the ramified part and over
squarefree O_k-ideals A coprime to the ramified primes.  Terms with
N(E) N(A)^2 > H^(2N) are empty by norm multiplicativity, so truncating
there is exact.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
import math

import mpmath
import numpy as np
from sympy import primerange
from sympy.functions.combinatorial.numbers import kronecker_symbol

from .angles import ArcProduct
from .domain import RegionSF
from .heights import Height
from .ideals import IdealHNF, mobius_enumerate, primes_above, subset_products
from .lattice import count_points, count_sector, minkowski_lattice


@dataclass(frozen=True)
class SieveTerm:
    C: IdealHNF
    D: IdealHNF
    E: IdealHNF
    A: IdealHNF
    mu_E: int
    mu_A: int
    count: int

    def as_row(self):
        return {"C": self.C.norm, "D": self.D.norm, "E": self.E.norm, "A": self.A.norm,
                "mu_E": self.mu_E, "mu_A": self.mu_A, "count": self.count}


@dataclass
class SieveTermLedger:
    height: Height
    truncation: Fraction
    rows: list = field(default_factory=list)
    keep_rows: bool = True
    n_terms: int = 0
    total: int = 0

    def add(self, term):
        self.n_terms += 1
        self.total += term.mu_E * term.mu_A * term.count
        if self.keep_rows:
            self.rows.append(term)

    def summary(self):
        return {"terms": self.n_terms, "truncation": str(self.truncation), "total": self.total}


def _as_arc_list(fd, arcs):
    if isinstance(arcs, ArcProduct):
        return [arcs]
    arcs = list(arcs)
    if arcs and not isinstance(arcs[0], ArcProduct):
        return [ArcProduct(arcs)]
    return arcs


def cell_ideal(fd, C, D):
    return fd.extend_to_K(C) * D


def count_term(fd, C, D, E, A, arcs, height):
    """#(C O_K D E A O_K  intersected with the cell region), exactly."""
    height = Height.of(height)
    base = cell_ideal(fd, C, D)
    lat_ideal = base * E * fd.extend_to_K(A)
    cap = height.power(2 * fd.degree_N) * base.norm
    if lat_ideal.norm > cap:
        return 0
    total = 0
    for ap in _as_arc_list(fd, arcs):
        region = RegionSF(fd, ap, cap)
        if fd.degree_N == 1:
            total += count_sector(fd, lat_ideal, cap, region.istar[0][0])[0]
        else:
            lat = minkowski_lattice(fd, lat_ideal)
            total += count_points(lat, region.contains, region.radius_sq)[0]
    return total


def _excluded(fd):
    return [P for P, _ in fd.ramified]


def zstar_terms(fd, C, D, height):
    """The (E, mu_E, A, mu_A) index set for one cell, truncated exactly."""
    height = Height.of(height)
    h2n = height.power(2 * fd.degree_N)
    out = []
    for E, mu_E in subset_products(fd.ring, [pk for _, pk in fd.ramified]):
        if E.norm > h2n:
            continue
        bound = math.isqrt(int(h2n / E.norm))
        for t in mobius_enumerate(fd.ringk, bound, _excluded(fd)):
            out.append((E, mu_E, t.ideal, t.mu))
    return out


def count_Zstar(fd, C, D, arcs, height, ledger=None, threads=1):
    height = Height.of(height)
    terms = zstar_terms(fd, C, D, height)

    def run(t):
        E, mu_E, A, mu_A = t
        return SieveTerm(C, D, E, A, mu_E, mu_A, count_term(fd, C, D, E, A, arcs, height))

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(run, terms))
    else:
        results = [run(t) for t in terms]
    total = 0
    for r in results:
        total += r.mu_E * r.mu_A * r.count
        if ledger is not None:
            ledger.add(r)
    return total


def cells(fd):
    """All (C, D) pairs: class representatives times divisors of the ramified part."""
    out = []
    for C in fd.class_reps:
        for D, _ in subset_products(fd.ring, [pk for _, pk in fd.ramified]):
            out.append((C, D))
    return out


def count_SK(fd, arcs, height, keep_rows=False, threads=1):
    """Exact #S_K(I, H) and the ledger of sieve terms."""
    height = Height.of(height)
    ledger = SieveTermLedger(height, height.power(2 * fd.degree_N), keep_rows=keep_rows)
    total = 0
    for C, D in cells(fd):
        total += count_Zstar(fd, C, D, arcs, height, ledger, threads)
    assert total == ledger.total
    return total, ledger


def count_by_cell(fd, arcs, height):
    height = Height.of(height)
    return {(C.matrix, D.matrix): count_Zstar(fd, C, D, arcs, height) for C, D in cells(fd)}


# ---------------------------------------------------------------------------
# the leading constant


def zeta_k2(fd, dps=40):
    """zeta_k(2) via zeta(2) L(2, chi_disc) and Hurwitz zeta values."""
    with mpmath.workdps(dps):
        z2 = mpmath.zeta(2)
        if fd.degree_N == 1:
            return z2
        if fd.degree_N != 2:
            raise NotImplementedError
        D = fd.disc_k
        L = mpmath.mpf(0)
        for a in range(1, D + 1):
            chi = kronecker_symbol(D, a)
            if chi:
                L += chi * mpmath.zeta(2, mpmath.mpf(a) / D)
        return z2 * L / D ** 2


def zeta_k2_euler(fd, limit=10 ** 6):
    """Euler product over prime ideals of norm <= limit, with a tail bound.

    Returns (value, bound) with |zeta_k(2) - value| <= bound.  The bound comes
    from at most N prime ideals of each norm beyond the cut.
    """
    logp = 0.0
    for p in primerange(2, limit + 1):
        p = int(p)
        if fd.degree_N == 1:
            norms = [p]
        else:
            x = int(kronecker_symbol(fd.disc_k, p))
            norms = [p, p] if x == 1 else ([p] if x == 0 else [p * p])
        for q in norms:
            if q <= limit:
                logp -= math.log1p(-1.0 / (q * q))
    value = math.exp(logp)
    tail = fd.degree_N * 1.0 / limit
    return value, value * (math.exp(tail * 1.01) - 1)


def ramified_factor(fd):
    out = 1.0
    for P, _ in fd.ramified:
        q = P.norm
        out *= 2 * q / (q + 1)
    return out


def constant_AK(fd):
    """Leading constant A_K of the height count."""
    z = float(zeta_k2(fd))
    return ramified_factor(fd) * fd.rel_disc_norm ** -0.5 * fd.h_k * fd.regulator \
        / (fd.omega_k * z * abs(fd.disc_k))


def constant_AK_geometric(fd):
    """A_K rescaled by the measured volume of the domain.

    The unit lattice in log space is spanned by 2 log|sigma(eps)|, so the
    tile F has (N-1)-volume 2^(N-1) sqrt(N) R_k rather than sqrt(N) R_k and
    the region volume doubles for each extra real place.  For N = 1 the two
    constants agree.
    """
    return 2 ** (fd.degree_N - 1) * constant_AK(fd)


def main_term(fd, arcs, height, geometric=False):
    height = Height.of(height)
    meas = sum(a.measure for a in _as_arc_list(fd, arcs))
    const = constant_AK_geometric(fd) if geometric else constant_AK(fd)
    return const * meas * float(height.power(2 * fd.degree_N))


# ---------------------------------------------------------------------------
# the two Moebius identities behind the constant


def ramified_mobius_sum(fd):
    """sum over E | ramified part of mu(E)/N(E), exactly."""
    return sum(Fraction(mu, E.norm) for E, mu in
               subset_products(fd.ring, [pk for _, pk in fd.ramified]))


def ramified_product(fd):
    out = Fraction(1)
    for P, _ in fd.ramified:
        out *= 1 - Fraction(1, P.norm)
    return out


def _local_factors(fd, p, excluded):
    """Coefficients (c(p), c(p^2)) of the local factor prod (1 - N(P)^-s) at p."""
    if fd.degree_N == 1:
        norms = [] if any(P.norm == p for P in excluded) else [p]
    else:
        norms = [P.norm for P in primes_above(fd.ringk, p) if P.ideal not in excluded]
    poly = {0: 1}
    for q in norms:
        e = round(math.log(q, p))
        new = dict(poly)
        for k, v in poly.items():
            new[k + e] = new.get(k + e, 0) - v
        poly = new
    return poly.get(1, 0), poly.get(2, 0)


def _generic_factor(fd, p):
    """(c(p), c(p^2)) for a prime not dividing disc_k nor any excluded norm."""
    if fd.degree_N == 1:
        return -1, 0
    x = int(kronecker_symbol(fd.disc_k, p))
    return (-2, 1) if x == 1 else (0, -1)


def mobius_coefficients(fd, limit):
    """c(n) = sum of mu_k(A) over squarefree A of norm n coprime to the ramified primes.

    Multiplicative sieve over the primes up to sqrt(limit); what is left of n
    afterwards is 1 or a single larger prime whose local factor depends only
    on its residue modulo disc_k.
    """
    excluded = {P for P, _ in fd.ramified}
    special = set()
    for P in excluded:
        special.update(_prime_divisors(P.norm))
    special.update(_prime_divisors(abs(fd.disc_k)))
    root = math.isqrt(limit)
    if any(p > root for p in special):
        raise ValueError("limit too small for the ramified primes")
    c = np.ones(limit + 1, dtype=np.int32)
    c[0] = 0
    rem = np.arange(limit + 1, dtype=np.int64)
    for p in primerange(2, root + 1):
        p = int(p)
        if p in special:
            f1, f2 = _local_factors(fd, p, excluded)
        else:
            f1, f2 = _generic_factor(fd, p)
        sq = p * p
        saved = c[sq::sq].copy()
        c[p::p] *= f1
        c[sq::sq] = saved * f2
        if sq * p <= limit:
            c[sq * p::sq * p] = 0
        q = p
        while q <= limit:
            rem[q::q] //= p
            q *= p
    big = rem > 1
    if fd.degree_N == 1:
        c[big] *= -1
    else:
        D = fd.disc_k
        table = np.array([{1: -2, -1: 0, 0: 0}[int(kronecker_symbol(D, a))] for a in range(D)],
                         dtype=np.int32)
        c[big] *= table[rem[big] % D]
    return c


def _prime_divisors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def mobius_square_sum(fd, limit=10 ** 7):
    """Truncated sum of mu_k(A)/N(A)^2 over A coprime to the ramified primes."""
    c = mobius_coefficients(fd, limit)
    n = np.arange(1, limit + 1, dtype=np.float64)
    terms = c[1:] / (n * n)
    return float(np.sum(terms[::-1]))


def mobius_square_closed_form(fd):
    out = 1 / zeta_k2(fd)
    for P, _ in fd.ramified:
        out /= 1 - mpmath.mpf(1) / P.norm ** 2
    return out


def combined_identity(fd):
    """Both sides of 2^s (sum mu_K/N)(sum mu_k/N^2) = prod 2N(P)/(N(P)+1) / zeta_k(2)."""
    s = len(fd.ramified)
    lhs = 2 ** s * float(ramified_mobius_sum(fd)) * float(mobius_square_closed_form(fd))
    rhs = ramified_factor(fd) / float(zeta_k2(fd))
    return lhs, rhs
