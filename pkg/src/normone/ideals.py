"""Ideal arithmetic in Z[theta] via row-style Hermite normal forms.

Ideals are full-rank sublattices of the power basis, stored as an upper
triangular integer matrix with positive pivots and entries above each pivot
reduced into ``[0, pivot)``.  Everything is exact; matrices are at most 4x4.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

from sympy import Poly, symbols
from sympy.ntheory import primerange, sqrt_mod


def hnf(rows):
    """Row Hermite normal form of an integer matrix; zero rows are dropped."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        if r == len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[piv] = rows[piv], rows[r]
            prow = rows[r]
            p = prow[col]
            clean = True
            for i in range(r + 1, len(rows)):
                v = rows[i][col]
                if v:
                    q = v // p
                    rows[i] = [x - q * y for x, y in zip(rows[i], prow)]
                    if rows[i][col]:
                        clean = False
            if clean:
                break
        if not rows[r][col]:
            continue
        if rows[r][col] < 0:
            rows[r] = [-x for x in rows[r]]
        p = rows[r][col]
        prow = rows[r]
        for i in range(r):
            q = rows[i][col] // p
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], prow)]
        r += 1
    return [tuple(row) for row in rows[:r]]


class IdealHNF:
    """Nonzero integral ideal of a :class:`~normone.rings.NumberRing`."""

    __slots__ = ("ring", "matrix", "norm")

    def __init__(self, ring, matrix):
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        n = ring.degree
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("ideal basis must be a full-rank square matrix")
        for i, row in enumerate(matrix):
            if row[i] <= 0 or any(row[:i]):
                raise ValueError("matrix is not in Hermite normal form")
        self.ring = ring
        self.matrix = matrix
        norm = 1
        for i in range(n):
            norm *= matrix[i][i]
        self.norm = norm

    @classmethod
    def from_generators(cls, ring, gens):
        rows = []
        for g in gens:
            rows.extend(ring.mul_matrix(tuple(g)))
        h = hnf(rows)
        if len(h) != ring.degree:
            raise ValueError("generators do not span a full-rank ideal")
        return cls(ring, h)

    @classmethod
    def unit(cls, ring):
        n = ring.degree
        return cls(ring, [[int(i == j) for j in range(n)] for i in range(n)])

    def __eq__(self, other):
        return (isinstance(other, IdealHNF) and self.ring is other.ring
                and self.matrix == other.matrix)

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"IdealHNF(norm={self.norm}, {list(map(list, self.matrix))})"

    def is_unit(self):
        return self.norm == 1

    def __contains__(self, vec):
        v = list(vec)
        for x in v:
            if isinstance(x, Fraction) and x.denominator != 1:
                return False
        v = [int(x) for x in v]
        for i, row in enumerate(self.matrix):
            q, rem = divmod(v[i], row[i])
            if rem:
                return False
            if q:
                for j in range(i, len(v)):
                    v[j] -= q * row[j]
        return True

    def __mul__(self, other):
        if other.ring is not self.ring:
            raise ValueError("ring mismatch")
        if self.is_unit():
            return other
        if other.is_unit():
            return self
        mul = self.ring.mul
        rows = [mul(a, b) for a in self.matrix for b in other.matrix]
        # the norm lies in the product; keeps the echelon numbers small
        m = self.norm * other.norm
        n = self.ring.degree
        rows.extend(tuple(m * int(i == j) for j in range(n)) for i in range(n))
        return IdealHNF(self.ring, hnf(rows))

    def __add__(self, other):
        if other.ring is not self.ring:
            raise ValueError("ring mismatch")
        return IdealHNF(self.ring, hnf(list(self.matrix) + list(other.matrix)))

    def __pow__(self, e):
        out = IdealHNF.unit(self.ring)
        for _ in range(e):
            out = out * self
        return out

    def divides(self, other):
        """True when ``self | other``, i.e. other is contained in self."""
        if other.ring is not self.ring:
            raise ValueError("ring mismatch")
        if other.norm % self.norm:
            return False
        return all(row in self for row in other.matrix)

    def contains_element(self, nums):
        return tuple(nums) in self

    def quotient(self, other):
        """The ideal ``self / other``; requires ``other | self``."""
        if not other.divides(self):
            raise ValueError("divisor does not divide the ideal")
        if other.is_unit():
            return self
        return colon(self, other)


def colon(ideal, divisor):
    """(I : J) = {x in O : x J subset I} as an HNF ideal."""
    ring = ideal.ring
    n = ring.degree
    h = ideal.matrix
    # coordinates w.r.t. the HNF basis: v -> v @ h^{-1}
    hinv = _upper_inverse(h)
    blocks = []
    for g in divisor.matrix:
        rg = ring.mul_matrix(g)
        blocks.append([[sum(Fraction(rg[i][k]) * hinv[k][j] for k in range(n))
                        for j in range(n)] for i in range(n)])
    cols = [[blk[i][j] for blk in blocks for j in range(n)] for i in range(n)]
    den = 1
    for row in cols:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    gint = [[int(x * den) for x in row] for row in cols]
    m = len(gint[0])
    rows = [gint[i] + [int(i == j) for j in range(n)] for i in range(n)]
    rows += [[den * int(i == j) for j in range(m)] + [0] * n for i in range(m)]
    echelon = hnf(rows)
    kernel = [row[m:] for row in echelon if not any(row[:m])]
    return IdealHNF(ring, hnf(kernel))


def _upper_inverse(h):
    n = len(h)
    inv = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n - 1, -1, -1):
        inv[i][i] = Fraction(1, h[i][i])
        for j in range(i + 1, n):
            s = sum(Fraction(h[i][k]) * inv[k][j] for k in range(i + 1, j + 1))
            inv[i][j] = -s / h[i][i]
    return inv


def ideal_from_element(ring, nums):
    """Principal ideal generated by an integral element (int coordinates)."""
    nums = tuple(int(x) for x in nums)
    if not any(nums):
        raise ValueError("zero element generates the zero ideal")
    return IdealHNF.from_generators(ring, [nums])


@dataclass(frozen=True)
class PrimeIdeal:
    ideal: IdealHNF
    p: int
    e: int
    f: int

    @property
    def norm(self):
        return self.p ** self.f


_X = symbols("x")


def primes_above(ring, p):
    """Prime ideals of ``ring`` over the rational prime p with e and f.

    Uses Kummer-Dedekind, which is valid because every supported ring is the
    full ring of integers presented by a power basis.
    """
    cache = ring.__dict__.setdefault("_prime_cache", {})
    if p in cache:
        return cache[p]
    n = ring.degree
    if n == 1:
        out = [PrimeIdeal(IdealHNF(ring, [[p]]), p, 1, 1)]
    elif n == 2:
        out = _quadratic_primes(ring, p)
    else:
        index_primes = ring.__dict__.get("index_primes", ())
        if p in index_primes:
            raise ValueError(f"prime {p} divides the index of the power basis")
        out = []
        _, factors = Poly(list(reversed(ring.poly)), _X, modulus=p).factor_list()
        for g, e in factors:
            coeffs = [int(c) % p for c in reversed(g.all_coeffs())]
            if len(coeffs) > n:
                # g has full degree: reduce modulo the defining polynomial
                coeffs = [c - f for c, f in zip(coeffs, ring.poly)][:n]
            gen = tuple(coeffs + [0] * (n - len(coeffs)))
            ideal = IdealHNF.from_generators(ring, [gen, (p,) + (0,) * (n - 1)])
            out.append(PrimeIdeal(ideal, p, e, g.degree()))
    out.sort(key=lambda P: P.ideal.matrix)
    cache[p] = out
    return out


def _quadratic_primes(ring, p):
    c0, c1 = ring.poly[0], ring.poly[1]
    disc = c1 * c1 - 4 * c0
    if p == 2:
        roots = [r for r in range(2) if (r * r + c1 * r + c0) % 2 == 0]
    else:
        if disc % p == 0:
            roots = [(-c1 * pow(2, -1, p)) % p]
        else:
            s = sqrt_mod(disc % p, p)
            if s is None:
                roots = []
            else:
                inv2 = pow(2, -1, p)
                roots = sorted({((-c1 + s) * inv2) % p, ((-c1 - s) * inv2) % p})
    if not roots:
        return [PrimeIdeal(IdealHNF(ring, [[p, 0], [0, p]]), p, 1, 2)]
    ideals = [IdealHNF.from_generators(ring, [(p, 0), (-r, 1)]) for r in roots]
    if len(roots) == 1:
        return [PrimeIdeal(ideals[0], p, 2, 1)]
    return [PrimeIdeal(I, p, 1, 1) for I in ideals]


def rational_prime_factors(m):
    m = abs(m)
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


def valuation(ideal, prime):
    v = 0
    power = prime.ideal
    while power.divides(ideal):
        v += 1
        power = power * prime.ideal
    return v


def factor_ideal(ideal):
    """Prime factorisation as a list of (PrimeIdeal, exponent)."""
    out = []
    for p in rational_prime_factors(ideal.norm):
        for P in primes_above(ideal.ring, p):
            v = valuation(ideal, P)
            if v:
                out.append((P, v))
    return out


@dataclass(frozen=True)
class MobiusTerm:
    ideal: IdealHNF
    mu: int


def mobius_enumerate(ring, bound, exclude=()):
    """All squarefree ideals A with N(A) <= bound coprime to ``exclude``.

    Returns MobiusTerm objects sorted by (norm, HNF) with mu = (-1)^(#primes).
    """
    bound = int(math.floor(bound))
    if bound < 1:
        return []
    excluded = set(exclude)
    primes = []
    for p in primerange(2, bound + 1):
        for P in primes_above(ring, p):
            if P.norm <= bound and P.ideal not in excluded:
                primes.append(P)
    primes.sort(key=lambda P: (P.norm, P.ideal.matrix))
    unit = IdealHNF.unit(ring)
    terms = [MobiusTerm(unit, 1)]
    # depth-first over increasing prime index keeps products squarefree
    stack = [(0, 1, 1, unit)]
    while stack:
        start, norm, mu, ideal = stack.pop()
        for i in range(start, len(primes)):
            P = primes[i]
            nn = norm * P.norm
            if nn > bound:
                break
            if ring.degree == 1:
                prod = IdealHNF(ring, [[nn]])
            else:
                prod = ideal * P.ideal
            terms.append(MobiusTerm(prod, -mu))
            stack.append((i + 1, nn, -mu, prod))
    terms.sort(key=lambda t: (t.ideal.norm, t.ideal.matrix))
    return terms


def subset_products(ring, primes):
    """All 2^s products of subsets of distinct prime ideals, with mu."""
    out = [(IdealHNF.unit(ring), 1)]
    for P in primes:
        out += [(I * P, -mu) for I, mu in out]
    return out


# ---------------------------------------------------------------------------
# decomposition relative to a CM descriptor


def _primes_of_k_over(fd, p):
    """Pairs (P over O_k, [(prime of O_K dividing P O_K, e(p|P))])."""
    cache = fd.__dict__.setdefault("_relative_cache", {})
    if p in cache:
        return cache[p]
    above_K = primes_above(fd.ring, p)
    out = []
    for P in primes_above(fd.ringk, p):
        ext = fd.extend_to_K(P.ideal)
        over = []
        for Q in above_K:
            if Q.ideal.divides(ext):
                over.append((Q, 2 if Q.ideal * Q.ideal == ext else 1))
        out.append((P, over))
    cache[p] = out
    return out


def decompose(fd, nums, cofactor=True):
    """Split beta O_K = (A O_K) * D * B as in the sieve.

    A is the largest O_k-ideal whose extension divides beta O_K, D is the
    product of the ramified primes still dividing the cofactor, and B is
    what remains.  Returns (A, D, B) as HNF ideals; B is None when
    ``cofactor`` is false.
    """
    nums = tuple(int(x) for x in nums)
    if not any(nums):
        raise ZeroDivisionError("cannot decompose zero")
    ring = fd.ring
    if fd.degree_N == 1:
        c = content(nums)
        prim = tuple(x // c for x in nums)
        D = IdealHNF.unit(ring)
        for _, pk in fd.ramified:
            if prim in pk:
                D = D * pk
        A = IdealHNF(fd.ringk, [[c]])
        if not cofactor:
            return A, D, None
        return A, D, ideal_from_element(ring, prim).quotient(D)
    I = ideal_from_element(ring, nums)
    A = IdealHNF.unit(fd.ringk)
    for p in rational_prime_factors(I.norm):
        for P, over in _primes_of_k_over(fd, p):
            v = min(valuation(I, Q) // e for Q, e in over)
            for _ in range(v):
                A = A * P.ideal
    R = I.quotient(fd.extend_to_K(A))
    D = IdealHNF.unit(ring)
    for _, pk in fd.ramified:
        if pk.divides(R):
            D = D * pk
    return A, D, (R.quotient(D) if cofactor else None)


def in_IP(fd, B):
    """True iff B is coprime to the ramified part and has no divisor from O_k."""
    ring = fd.ring
    if not (B + fd.squarefree_part()).is_unit():
        return False
    for p in rational_prime_factors(B.norm):
        for P, _ in _primes_of_k_over(fd, p):
            if fd.extend_to_K(P.ideal).divides(B):
                return False
    return True


def content(nums):
    g = 0
    for x in nums:
        g = math.gcd(g, x)
    return g
