"""Exact arithmetic in a CM field K over its totally real subfield k.

Elements are stored as ``(nums, den)``: integer coordinates over the power
basis of O_K and a positive common denominator in lowest terms.  Every
predicate that decides a count is exact; floating point is only used as a
fast path whose margin is large enough that a wrong answer is impossible,
and anything closer escalates to exact algebra or to adaptive precision.
"""

from dataclasses import dataclass
from fractions import Fraction
import json
import math
import random
from importlib import resources

import mpmath

from .angles import Angle, PrecisionError, TWO_PI, working_precisions
from .ideals import IdealHNF, hnf, primes_above, rational_prime_factors
from .rings import NumberRing, det, solve_left


class ConfigError(ValueError):
    """Field data is malformed or fails a consistency check."""


# ---------------------------------------------------------------------------
# exact reals in the subfield


@dataclass(frozen=True)
class QuadReal:
    """The real number p + q*sqrt(D) with rational p, q and squarefree-ish D > 0."""

    p: Fraction
    q: Fraction = Fraction(0)
    D: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        object.__setattr__(self, "q", Fraction(self.q))
        if self.D == 1 and self.q:
            object.__setattr__(self, "p", self.p + self.q)
            object.__setattr__(self, "q", Fraction(0))

    def _lift(self, other):
        if isinstance(other, QuadReal):
            if other.D != self.D and other.q and self.q:
                raise ValueError("mixed square roots")
            return other
        return QuadReal(Fraction(other), 0, self.D)

    def sign(self):
        p, q = self.p, self.q
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return 1 if q > 0 else -1
        if (p > 0) == (q > 0):
            return 1 if p > 0 else -1
        # opposite signs: compare p^2 with q^2 D
        d = p * p - q * q * self.D
        if d == 0:
            return 0
        return (1 if p > 0 else -1) if d > 0 else (1 if q > 0 else -1)

    def __add__(self, other):
        o = self._lift(other)
        D = self.D if self.q else o.D
        return QuadReal(self.p + o.p, self.q + o.q, D)

    __radd__ = __add__

    def __neg__(self):
        return QuadReal(-self.p, -self.q, self.D)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        D = self.D if self.q else o.D
        return QuadReal(self.p * o.p + self.q * o.q * D, self.p * o.q + self.q * o.p, D)

    __rmul__ = __mul__

    def compare(self, other):
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, (QuadReal, int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q if self.q else 0))

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(self.D)

    def mp(self):
        return mpmath.mpf(self.p.numerator) / self.p.denominator + \
            mpmath.mpf(self.q.numerator) / self.q.denominator * mpmath.sqrt(self.D)

    def is_rational(self):
        return self.q == 0

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        return f"{self.p}+{self.q}*sqrt({self.D})"


def qmax1(x):
    return x if x > 1 else QuadReal(1, 0, x.D)


# ---------------------------------------------------------------------------
# elements


def _normalize(nums, den):
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    g = den
    for x in nums:
        g = math.gcd(g, x)
    if den < 0:
        g = -g
    if g != 1:
        nums = tuple(x // g for x in nums)
        den //= g
    return tuple(nums), den


def _from_fractions(coords):
    den = 1
    for c in coords:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return _normalize(tuple(int(c * den) for c in coords), den)


class FieldElement:
    """Exact element of K: coordinates ``nums / den`` over the O_K basis."""

    __slots__ = ("field", "nums", "den")

    def __init__(self, field, nums, den=1):
        nums = tuple(nums)
        if any(isinstance(x, Fraction) for x in nums) or not isinstance(den, int):
            fr = [Fraction(x) / Fraction(den) for x in nums]
            nums, den = _from_fractions(fr)
        else:
            nums, den = _normalize(tuple(int(x) for x in nums), int(den))
        if len(nums) != field.degree:
            raise ValueError(f"expected {field.degree} coordinates")
        self.field = field
        self.nums = nums
        self.den = den

    @property
    def coords(self):
        return tuple(Fraction(x, self.den) for x in self.nums)

    def is_zero(self):
        return not any(self.nums)

    def is_integral(self):
        return self.den == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element_from_int(other)
        return (isinstance(other, FieldElement) and other.field is self.field
                and self.nums == other.nums and self.den == other.den)

    def __hash__(self):
        return hash((self.nums, self.den))

    def __repr__(self):
        c = ", ".join(map(str, self.nums))
        return f"FieldElement([{c}]/{self.den})" if self.den != 1 else f"FieldElement([{c}])"

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element_from_rational(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self.den * o.den
        return FieldElement(self.field, tuple(a * o.den + b * self.den
                                              for a, b in zip(self.nums, o.nums)), d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.nums), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.ring.mul(self.nums, o.nums), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * self.field.inv(o)

    def __rtruediv__(self, other):
        return self.field.inv(self) * other

    def __pow__(self, e):
        if e < 0:
            return self.field.inv(self) ** (-e)
        out = self.field.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out


# ---------------------------------------------------------------------------
# embeddings


@dataclass(frozen=True)
class EmbeddingVector:
    """sigma_1..sigma_N of an element with a radius bound per component."""

    values: tuple
    radius: tuple
    precision: int

    def modulus(self, n):
        return abs(self.values[n])


class CertifiedArg:
    """Argument of sigma_n(x) in [0, 2pi): float value plus exact resolution.

    ``exact`` (computed on demand) is the argument as an exact Angle when it
    is a rational multiple of pi, else None.  Any other argument differs from
    every endpoint p*pi + r (p, r rational) by Lindemann's theorem, so those
    comparisons are settled by refining precision.
    """

    __slots__ = ("field", "element", "n", "approx", "_exact", "_resolved")

    def __init__(self, field, element, n, approx):
        self.field = field
        self.element = element
        self.n = n
        self.approx = approx
        self._resolved = False
        self._exact = None
        # rounding can push an argument of 0 to just below 2pi
        if approx < 1e-9 or approx > 2 * math.pi - 1e-9:
            if self.exact is not None:
                self.approx = float(self.exact)

    @property
    def exact(self):
        if not self._resolved:
            self._exact = self.field._exact_arg(self.element, self.n, self.approx)
            self._resolved = True
        return self._exact

    def compare(self, angle):
        """Sign of arg - angle."""
        diff = self.approx - float(angle)
        if abs(diff) > 1e-9:
            return 1 if diff > 0 else -1
        if self.exact is not None:
            return self.exact.compare(angle)
        if angle.rad == 0 and angle.pi_coef in (0, 2):
            # not pi-rational, so strictly inside (0, 2pi)
            return 1 if angle.pi_coef == 0 else -1
        for prec in working_precisions():
            with mpmath.workprec(prec + 20):
                a = self.field.arg_mp(self.element, self.n, prec + 20)
                v = a - angle.mp()
                if abs(v) > mpmath.ldexp(1, -prec + 8):
                    return 1 if v > 0 else -1
        raise PrecisionError("argument too close to an interval endpoint")

    def in_interval(self, iv):
        return self.compare(iv.lo) >= 0 and self.compare(iv.hi) < 0

    def __float__(self):
        return self.approx

    def __repr__(self):
        return f"CertifiedArg({self.approx!r})"


def _newton_root(poly, z0, prec):
    with mpmath.workprec(prec + 30):
        z = mpmath.mpc(z0)
        deriv = [i * c for i, c in enumerate(poly)][1:]
        for _ in range(200):
            f = mpmath.polyval(list(reversed(poly)), z)
            fp = mpmath.polyval(list(reversed(deriv)), z)
            step = f / fp
            z -= step
            if abs(step) < mpmath.ldexp(1, -prec - 20):
                break
        f = mpmath.polyval(list(reversed(poly)), z)
        fp = mpmath.polyval(list(reversed(deriv)), z)
        err = 4 * abs(f / fp) + mpmath.ldexp(abs(z), -prec - 10)
    return z, err


# ---------------------------------------------------------------------------
# descriptor


class FieldDescriptor:
    """All arithmetic data for a CM extension K/k with [K:k] = 2."""

    def __init__(self, *, name, poly_K, poly_k, k_basis_in_K, tau, roots,
                 disc_k, disc_K, class_reps, h_k, units, regulator,
                 ramified, rel_disc_norm, torsion_size=None):
        self.name = name
        self.ring = NumberRing(poly_K, name=f"O_K({name})")
        self.ringk = NumberRing(poly_k, name=f"O_k({name})")
        self.degree = self.ring.degree
        self.degree_N = self.ringk.degree
        if self.degree != 2 * self.degree_N:
            raise ConfigError("K must have twice the degree of k")
        if self.degree_N not in (1, 2):
            raise ConfigError(f"unsupported degree N={self.degree_N}")
        self.k_basis_in_K = [tuple(int(x) for x in v) for v in k_basis_in_K]
        self.tau_matrix = [tuple(int(x) for x in row) for row in tau]
        self.roots_float = [complex(r) for r in roots]
        self.disc_k = int(disc_k)
        self.disc_K = int(disc_K)
        self.h_k = int(h_k)
        self.units = [tuple(int(x) for x in u) for u in units]
        self.regulator = float(regulator)
        self.omega_k = 2
        self.rel_disc_norm = int(rel_disc_norm)
        self.class_reps = [IdealHNF(self.ringk, hnf(rows)) if len(hnf(rows)) == self.degree_N
                           else _bad(f"class representative {rows} is not full rank")
                           for rows in class_reps]
        self.ramified = ramified  # list of (P over O_k, p over O_K); filled by loader
        self._root_cache = {}
        self._torsion = None
        self._torsion_size_hint = torsion_size
        self.one = FieldElement(self, self.ring.one)
        # coordinates where the k-basis is invertible, for exact restriction to k
        self._k_pivots = _pick_pivots(self.k_basis_in_K)
        self._k_inverse = None
        if self.degree_N == 2:
            c0, c1 = self.ringk.poly[0], self.ringk.poly[1]
            self.k_sqrt = c1 * c1 - 4 * c0
            self._k_root_sign = self._locate_k_roots()
        else:
            self.k_sqrt = 1
            self._k_root_sign = (1,)

    # -- basic element construction

    def element(self, coords, den=1):
        return FieldElement(self, coords, den)

    def element_from_int(self, m):
        return FieldElement(self, tuple(m if i == 0 else 0 for i in range(self.degree)))

    def element_from_rational(self, q):
        q = Fraction(q)
        return FieldElement(self, tuple(q.numerator if i == 0 else 0
                                        for i in range(self.degree)), q.denominator)

    def from_k(self, kcoords):
        """Element of K for the k-element with the given (rational) k-coordinates."""
        out = [Fraction(0)] * self.degree
        for c, v in zip(kcoords, self.k_basis_in_K):
            c = Fraction(c)
            for i, x in enumerate(v):
                out[i] += c * x
        return FieldElement(self, tuple(out))

    def from_k_int(self, kcoords):
        out = [0] * self.degree
        for c, v in zip(kcoords, self.k_basis_in_K):
            for i, x in enumerate(v):
                out[i] += c * x
        return tuple(out)

    def to_k(self, nums, den=1):
        """k-coordinates (Fractions) of an element of K lying in k, else None."""
        if self.degree_N == 1:
            if any(nums[1:]):
                return None
            return (Fraction(nums[0], den),)
        piv = self._k_pivots
        rows = [[v[j] for j in piv] for v in self.k_basis_in_K]
        coeffs = solve_left(rows, [nums[j] for j in piv])
        back = [sum(c * v[i] for c, v in zip(coeffs, self.k_basis_in_K)) for i in range(self.degree)]
        if any(b != x for b, x in zip(back, nums)):
            return None
        return tuple(c / den for c in coeffs)

    # -- automorphism and norms

    def tau_nums(self, nums):
        out = [0] * self.degree
        for c, row in zip(nums, self.tau_matrix):
            if c:
                for i, x in enumerate(row):
                    out[i] += c * x
        return tuple(out)

    def tau(self, a):
        return FieldElement(self, self.tau_nums(a.nums), a.den)

    conj_tau = tau

    def norm_rel_nums(self, nums, den=1):
        """alpha * tau(alpha) as k-coordinates."""
        prod = self.ring.mul(nums, self.tau_nums(nums))
        kc = self.to_k(prod, den * den)
        if kc is None:
            raise ArithmeticError("relative norm left the subfield; tau is inconsistent")
        return kc

    def norm_rel(self, a):
        return self.norm_rel_nums(a.nums, a.den)

    def norm_abs(self, a):
        n = self.ring.norm(a.nums)
        return Fraction(n, a.den ** self.degree)

    def norm_k(self, kc):
        """N_{k/Q} of a k-element given by coordinates."""
        if self.degree_N == 1:
            return Fraction(kc[0])
        c0, c1 = self.ringk.poly[0], self.ringk.poly[1]
        a, b = Fraction(kc[0]), Fraction(kc[1])
        return a * a - c1 * a * b + c0 * b * b

    def inv_k(self, kc):
        if self.degree_N == 1:
            return (1 / Fraction(kc[0]),)
        c1 = self.ringk.poly[1]
        a, b = Fraction(kc[0]), Fraction(kc[1])
        n = self.norm_k(kc)
        # conjugate of a + b*t is (a - c1*b) - b*t
        return ((a - c1 * b) / n, -b / n)

    def inv(self, a):
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero")
        nu = self.norm_rel(a)
        inv_nu = self.inv_k(nu)
        return self.tau(a) * self.from_k(inv_nu)

    def psi(self, b):
        """beta / tau(beta)."""
        if b.is_zero():
            raise ZeroDivisionError("psi of zero")
        return b * self.inv(self.tau(b))

    def psi_nums(self, nums):
        """psi of an integral element, returned as (nums, den) in lowest terms.

        Uses beta/tau(beta) = beta^2 / N_{K/k}(beta).
        """
        e = self.element(self.ring.mul(nums, nums))
        nu = self.norm_rel_nums(nums)
        r = e * self.from_k(self.inv_k(nu))
        return r.nums, r.den

    # -- real embeddings of k, exactly

    def _locate_k_roots(self):
        c1 = self.ringk.poly[1]
        signs = []
        gen = self.k_basis_in_K[1]
        for z in self.roots_float:
            val = self.ring.evaluate(gen, z)
            plus = (-c1 + math.sqrt(self.k_sqrt)) / 2
            minus = (-c1 - math.sqrt(self.k_sqrt)) / 2
            signs.append(1 if abs(val - plus) < abs(val - minus) else -1)
        if len(set(signs)) != len(signs):
            raise ConfigError("embeddings do not restrict to distinct embeddings of k")
        return tuple(signs)

    def sigma_k(self, kc, n):
        """sigma_n of a k-element as an exact QuadReal."""
        if self.degree_N == 1:
            return QuadReal(Fraction(kc[0]), 0, 1)
        c1 = self.ringk.poly[1]
        a, b = Fraction(kc[0]), Fraction(kc[1])
        s = self._k_root_sign[n]
        return QuadReal(a - b * Fraction(c1, 2), s * b / 2, self.k_sqrt)

    def modulus_sq(self, a, n):
        """|sigma_n(alpha)|^2 exactly."""
        return self.sigma_k(self.norm_rel(a), n)

    # -- numeric embeddings

    def embed_float(self, nums, den=1):
        return [self.ring.evaluate(nums, z) / den for z in self.roots_float]

    def roots_mp(self, prec):
        got = self._root_cache.get(prec)
        if got is None:
            got = [_newton_root(self.ring.poly, z, prec) for z in self.roots_float]
            self._root_cache[prec] = got
        return got

    def embed(self, a, prec=None):
        prec = prec or next(working_precisions())
        roots = self.roots_mp(prec)
        vals, rads = [], []
        with mpmath.workprec(prec + 30):
            for z, err in roots:
                v = self.ring.evaluate(a.nums, z) / a.den
                dv = sum(abs(c) * i * (abs(z) + err) ** max(i - 1, 0)
                         for i, c in enumerate(a.nums)) / a.den
                rnd = mpmath.ldexp(sum(abs(c) for c in a.nums) * (abs(z) + 1) ** self.degree, -prec)
                vals.append(v)
                rads.append(dv * err + rnd)
        return EmbeddingVector(tuple(vals), tuple(rads), prec)

    def arg_mp(self, nums, n, prec):
        z, _ = self.roots_mp(prec)[n]
        with mpmath.workprec(prec):
            v = self.ring.evaluate(nums, z)
            a = mpmath.arg(v)
            if a < 0:
                a += 2 * mpmath.pi
            return a

    def arg_float(self, nums, n):
        v = self.ring.evaluate(nums, self.roots_float[n])
        a = math.atan2(v.imag, v.real)
        return a + 2 * math.pi if a < 0 else a

    def certified_arg(self, nums, n):
        """Argument of sigma_n of an integral element (any positive scaling works)."""
        if not any(nums):
            raise ZeroDivisionError("argument of zero")
        return CertifiedArg(self, tuple(nums), n, self.arg_float(nums, n))

    def _exact_arg(self, nums, n, approx):
        # a pi-rational argument forces beta/tau(beta) to be a root of unity
        pn, pd = self.psi_nums(nums)
        if pd != 1:
            return None
        t = self.torsion_order(self.element(pn))
        if t is None:
            return None
        za = self.arg_float(pn, n)
        j = round(za * t / (2 * math.pi)) % t
        base = Angle.of_pi(Fraction(j, t))
        cands = [base, base.plus_pi()]
        best = min(cands, key=lambda c: abs(_wrap(float(c) - approx)))
        if best >= TWO_PI:
            best = Angle(best.pi_coef - 2, best.rad)
        return best

    def arg_vector(self, a):
        """Certified arguments of sigma_1(alpha)..sigma_N(alpha) in [0, 2pi)."""
        if a.is_zero():
            raise ZeroDivisionError("argument of zero")
        return [self.certified_arg(a.nums, n) for n in range(self.degree_N)]

    # -- heights

    def height_power(self, a):
        """H(alpha)^(2N) exactly, as a QuadReal."""
        if a.is_zero():
            raise ZeroDivisionError("height of zero")
        fin = Fraction(1)
        if a.den != 1:
            m = a.den
            rows = self.ring.mul_matrix(a.nums)
            rows += [tuple(m * int(i == j) for j in range(self.degree)) for i in range(self.degree)]
            gcd_norm = IdealHNF(self.ring, hnf(rows)).norm
            fin = Fraction(m ** self.degree, gcd_norm)
        nu = self.norm_rel(a)
        if all(x == (1 if i == 0 else 0) for i, x in enumerate(nu)):
            return QuadReal(fin, 0, self.k_sqrt)
        arch = QuadReal(1, 0, self.k_sqrt)
        for n in range(self.degree_N):
            arch = arch * qmax1(self.sigma_k(nu, n))
        return arch * fin

    def weil_height(self, a):
        return float(self.height_power(a)) ** (1.0 / self.degree)

    # -- norm-one group

    def in_SK(self, a):
        if a.is_zero():
            raise ZeroDivisionError("zero is not in K^x")
        nu = self.norm_rel(a)
        return nu[0] == 1 and not any(nu[1:])

    def is_torsion(self, a):
        return a.is_integral() and self.in_SK(a)

    def torsion_order(self, a):
        """Multiplicative order of a root of unity, else None."""
        if not self.is_torsion(a):
            return None
        bound = 2 * abs(self.disc_K)
        p = a
        for t in range(1, bound + 1):
            if p == self.one:
                return t
            p = p * a
        raise ArithmeticError("integral norm-one element without finite order")

    def torsion(self):
        """All roots of unity of K, found by a box search over the integral basis."""
        if self._torsion is None:
            B = self._coordinate_bound(1.0)
            found = []
            for nums in _box(self.degree, B):
                if any(nums):
                    e = self.element(nums)
                    if self.in_SK(e):
                        found.append(e)
            found.sort(key=lambda e: self.arg_float(e.nums, 0))
            self._torsion = found
        return self._torsion

    def _coordinate_bound(self, radius):
        # coordinates = (real Minkowski vector) @ inverse basis matrix
        rows = []
        for i in range(self.degree):
            v = self.embed_float(self.ring.basis_element(i))
            row = []
            for z in v:
                row += [z.real, z.imag]
            rows.append(row)
        inv = _float_inverse(rows)
        col_norms = [math.sqrt(sum(inv[r][c] ** 2 for r in range(self.degree)))
                     for c in range(self.degree)]
        return int(math.floor(radius * math.sqrt(self.degree_N) * max(col_norms) + 1e-9)) + 1

    # -- ideals tied to the descriptor

    def squarefree_part(self):
        out = IdealHNF.unit(self.ring)
        for _, pk in self.ramified:
            out = out * pk
        return out

    def extend_to_K(self, A):
        gens = [self.from_k_int(row) for row in A.matrix]
        return IdealHNF.from_generators(self.ring, gens)

    def tau_ideal(self, I):
        return IdealHNF.from_generators(self.ring, [self.tau_nums(row) for row in I.matrix])

    def describe(self):
        return {
            "name": self.name,
            "degree_N": self.degree_N,
            "disc_k": self.disc_k,
            "disc_K": self.disc_K,
            "h_k": self.h_k,
            "regulator": self.regulator,
            "omega_k": self.omega_k,
            "rel_disc_norm": self.rel_disc_norm,
            "ramified": [P.norm for P, _ in self.ramified],
        }


def _bad(msg):
    raise ConfigError(msg)


def _wrap(x):
    x = math.fmod(x, 2 * math.pi)
    if x > math.pi:
        x -= 2 * math.pi
    elif x < -math.pi:
        x += 2 * math.pi
    return x


def _pick_pivots(vectors):
    n = len(vectors)
    m = len(vectors[0])
    from itertools import combinations
    for cols in combinations(range(m), n):
        if det([[v[c] for c in cols] for v in vectors]) != 0:
            return cols
    raise ConfigError("subfield basis is degenerate")


def _float_inverse(rows):
    import numpy as np
    return np.linalg.inv(np.array(rows, dtype=float)).tolist()


def _box(n, B):
    if n == 0:
        yield ()
        return
    for rest in _box(n - 1, B):
        for x in range(-B, B + 1):
            yield rest + (x,)


# ---------------------------------------------------------------------------
# loading


BUILTIN = {
    "Qi": {"mode": "imag_quadratic", "d": 1},
    "Qsqrt-1": {"mode": "imag_quadratic", "d": 1},
    "Qsqrt-2": {"mode": "imag_quadratic", "d": 2},
    "Qsqrt-3": {"mode": "imag_quadratic", "d": 3},
    "Qsqrt-5": {"mode": "imag_quadratic", "d": 5},
    "Qsqrt-7": {"mode": "imag_quadratic", "d": 7},
    "Qzeta5": "Qzeta5.json",
}


def builtin_names():
    return sorted(BUILTIN)


def load_descriptor(config, validate=True):
    """Build a descriptor from a builtin name, a JSON path, or a config dict."""
    if isinstance(config, str):
        if config in BUILTIN:
            spec = BUILTIN[config]
            if isinstance(spec, str):
                text = resources.files("normone.data").joinpath(spec).read_text()
                config = json.loads(text)
            else:
                config = dict(spec, name=config)
        elif config.startswith("Qsqrt-") and config[6:].isdigit():
            config = {"mode": "imag_quadratic", "d": int(config[6:]), "name": config}
        else:
            try:
                with open(config) as fh:
                    config = json.load(fh)
            except OSError as exc:
                raise ConfigError(f"unknown field {config!r}: {exc}") from None
            except json.JSONDecodeError as exc:
                raise ConfigError(f"bad JSON in {config!r}: {exc}") from None
    if not isinstance(config, dict) or "mode" not in config:
        raise ConfigError("config must be an object with a 'mode' key")
    mode = config["mode"]
    if mode == "imag_quadratic":
        fd = _imag_quadratic(config)
    elif mode == "quartic_cm":
        fd = _quartic(config)
    else:
        raise ConfigError(f"unsupported mode {mode!r}")
    if validate:
        validate_descriptor(fd)
    return fd


def _squarefree(d):
    return d > 0 and all(d % (p * p) for p in rational_prime_factors(d))


def _imag_quadratic(cfg):
    try:
        d = int(cfg["d"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("imag_quadratic mode needs an integer d") from None
    if not _squarefree(d):
        raise ConfigError(f"d={d} is not a positive squarefree integer")
    if d % 4 == 3:
        poly = [(1 + d) // 4, -1, 1]
        disc_K = -d
        tau = [[1, 0], [1, -1]]
        root = complex(0.5, math.sqrt(d) / 2)
    else:
        poly = [d, 0, 1]
        disc_K = -4 * d
        tau = [[1, 0], [0, -1]]
        root = complex(0, math.sqrt(d))
    name = cfg.get("name") or f"Qsqrt-{d}"
    fd = FieldDescriptor(
        name=name, poly_K=poly, poly_k=[0, 1], k_basis_in_K=[[1, 0]], tau=tau,
        roots=[root], disc_k=1, disc_K=disc_K, class_reps=[[[1]]], h_k=1, units=[],
        regulator=1.0, ramified=[], rel_disc_norm=abs(disc_K))
    ram = []
    for p in rational_prime_factors(disc_K):
        P = IdealHNF(fd.ringk, [[p]])
        above = primes_above(fd.ring, p)
        if len(above) != 1 or above[0].e != 2:
            raise ConfigError(f"prime {p} divides the discriminant but does not ramify")
        ram.append((P, above[0].ideal))
    fd.ramified = ram
    return fd


def _quartic(cfg):
    try:
        basis = cfg["basis"]
        discs = cfg["discs"]
        fd = FieldDescriptor(
            name=cfg.get("name", "quartic"),
            poly_K=basis["poly_K"], poly_k=basis["poly_k"],
            k_basis_in_K=[[1, 0, 0, 0], basis["k_generator"]],
            tau=cfg["tau"], roots=[complex(*z) for z in basis["embeddings"]],
            disc_k=discs["k"], disc_K=discs["K"], class_reps=cfg["class_reps"],
            h_k=cfg.get("h_k", len(cfg["class_reps"])), units=cfg["units"],
            regulator=cfg["regulator"], ramified=[],
            rel_disc_norm=cfg.get("rel_disc_norm", 0),
            torsion_size=cfg.get("torsion_size"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"incomplete quartic config: {exc}") from None
    disc_poly = fd.ring.discriminant()
    ratio = Fraction(disc_poly, fd.disc_K)
    if ratio.denominator != 1 or ratio <= 0 or math.isqrt(int(ratio)) ** 2 != ratio:
        raise ConfigError("polynomial discriminant is not a square multiple of disc_K")
    fd.ring.index_primes = tuple(rational_prime_factors(math.isqrt(int(ratio))))
    if fd.ringk.discriminant() != fd.disc_k:
        raise ConfigError("subfield polynomial does not give a maximal order with disc_k")
    if not fd.rel_disc_norm:
        rel = Fraction(abs(fd.disc_K), fd.disc_k ** 2)
        if rel.denominator != 1:
            raise ConfigError("|disc_K| is not divisible by disc_k^2")
        fd.rel_disc_norm = int(rel)
    ram = []
    for entry in cfg.get("ramified", []):
        P = IdealHNF.from_generators(fd.ringk, [tuple(g) for g in entry["P"]])
        pK = IdealHNF.from_generators(fd.ring, [tuple(g) for g in entry["p"]])
        ram.append((P, pK))
    fd.ramified = ram
    return fd


def validate_descriptor(fd, samples=40, seed=0):
    """Check every structural invariant; raises ConfigError on failure."""
    ring = fd.ring
    n = fd.degree
    basis = [ring.basis_element(i) for i in range(n)]
    # tau is an involutive ring automorphism fixing k
    for b in basis:
        if fd.tau_nums(fd.tau_nums(b)) != b:
            raise ConfigError("tau is not an involution")
    for i in range(n):
        for j in range(n):
            lhs = fd.tau_nums(ring.mul(basis[i], basis[j]))
            rhs = ring.mul(fd.tau_nums(basis[i]), fd.tau_nums(basis[j]))
            if lhs != rhs:
                raise ConfigError("tau is not multiplicative")
    for v in fd.k_basis_in_K:
        if fd.tau_nums(v) != v:
            raise ConfigError("tau does not fix the subfield")
    # the subfield generator satisfies the subfield polynomial
    if fd.degree_N == 2:
        g = fd.k_basis_in_K[1]
        c0, c1 = fd.ringk.poly[0], fd.ringk.poly[1]
        val = [a + c1 * b + (c0 if i == 0 else 0)
               for i, (a, b) in enumerate(zip(ring.mul(g, g), g))]
        if any(val):
            raise ConfigError("k_generator does not satisfy the subfield polynomial")
    # embeddings are roots, one per conjugate pair, and tau acts as complex conjugation
    for z in fd.roots_float:
        if abs(ring.evaluate(ring.poly, z)) > 1e-8 * (1 + abs(z)) ** n or z.imag <= 0:
            raise ConfigError("embedding data is not a root in the upper half-plane")
    for b in basis:
        s = fd.embed_float(b)
        t = fd.embed_float(fd.tau_nums(b))
        if any(abs(x.conjugate() - y) > 1e-8 for x, y in zip(s, t)):
            raise ConfigError("tau is not complex conjugation under the embeddings")
    # discriminants
    if abs(ring.discriminant()) % abs(fd.disc_K):
        raise ConfigError("disc_K does not divide the polynomial discriminant")
    if abs(fd.disc_K) != fd.disc_k ** 2 * fd.rel_disc_norm:
        raise ConfigError("|disc_K| != disc_k^2 * N(D_{K/k})")
    # ramification
    norm_prod = 1
    for P, pk in fd.ramified:
        if pk * pk != fd.extend_to_K(P):
            raise ConfigError("ramified prime does not square to the extended prime")
        norm_prod *= P.norm
    if fd.ramified or fd.degree_N == 1:
        if fd.degree_N == 1 and sorted(P.norm for P, _ in fd.ramified) != \
                rational_prime_factors(fd.disc_K):
            raise ConfigError("ramified list differs from the primes dividing disc_K")
    if fd.rel_disc_norm % norm_prod:
        raise ConfigError("ramified primes do not divide the relative discriminant")
    # class data
    if fd.degree_N == 1:
        if fd.units or fd.h_k != 1 or fd.regulator != 1.0:
            raise ConfigError("k = Q needs no units, h_k = 1 and regulator 1")
    else:
        if len(fd.units) != fd.degree_N - 1:
            raise ConfigError("need N-1 fundamental units")
        for u in fd.units:
            if abs(fd.norm_k(u)) != 1:
                raise ConfigError("fundamental unit has norm different from +-1")
        reg = abs(math.log(abs(float(fd.sigma_k(fd.units[0], 0)))))
        if abs(reg - fd.regulator) > 1e-9 * max(1.0, reg):
            raise ConfigError("regulator does not match the fundamental unit")
    if len(fd.class_reps) != fd.h_k:
        raise ConfigError("need exactly h_k class representatives")
    # kernel of the relative norm equals the elements of modulus one everywhere
    rng = random.Random(seed)
    for _ in range(samples):
        b = fd.element(tuple(rng.randint(-6, 6) for _ in range(n)))
        if b.is_zero():
            continue
        a = fd.psi(b)
        exact = fd.in_SK(a)
        numeric = all(abs(abs(z) - 1) < 1e-9 for z in fd.embed_float(a.nums, a.den))
        if not (exact and numeric):
            raise ConfigError("psi(beta) is not of modulus one")
        exact_b = fd.in_SK(b)
        numeric_b = all(abs(abs(z) - 1) < 1e-9 for z in fd.embed_float(b.nums, b.den))
        if exact_b != numeric_b:
            raise ConfigError("relative-norm kernel disagrees with the modulus-one test")
    if fd._torsion_size_hint is not None and len(fd.torsion()) != fd._torsion_size_hint:
        raise ConfigError("torsion subgroup has unexpected size")
    return True
