"""Norm-one points of degree at most two over all imaginary quadratic fields.

Apart from +-1, a point e^(i theta) of degree 2 and height sqrt(a) has
minimal polynomial a x^2 + b x + a with gcd(a, b) = 1, |b| < 2a and
cos(theta) = -b / 2a.  Counting over theta in [lo, hi) inside [0, pi]
therefore reduces to counting integers b coprime to a in a range whose
ends are cosines of the arc ends.  Those are compared exactly: cos(q pi) is
rational only for the five Niven angles, and any other end has a
transcendental cosine, so multiprecision refinement separates it from
every rational.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import mpmath
import numpy as np

from .angles import PI, TWO_PI, ZERO, Angle, Interval, PrecisionError, working_precisions
from .heights import Height

# cos(q pi) for the rational q in [0, 2] where it is rational
_NIVEN = {Fraction(0): 1, Fraction(1, 3): Fraction(1, 2), Fraction(1, 2): 0,
          Fraction(2, 3): Fraction(-1, 2), Fraction(1): -1, Fraction(4, 3): Fraction(-1, 2),
          Fraction(3, 2): 0, Fraction(5, 3): Fraction(1, 2), Fraction(2): 1}


@dataclass(frozen=True)
class AggregatePoint:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or abs(self.b) >= 2 * self.a or math.gcd(self.a, self.b) != 1:
            raise ValueError(f"({self.a}, {self.b}) is not a primitive reciprocal pair")

    @property
    def cos(self):
        return Fraction(-self.b, 2 * self.a)

    @property
    def theta(self):
        return math.acos(-self.b / (2 * self.a))

    @property
    def height(self):
        return math.sqrt(self.a)

    @property
    def discriminant(self):
        return self.b * self.b - 4 * self.a * self.a

    @property
    def field_d(self):
        """d with the point in Q(sqrt(-d)), d squarefree."""
        return squarefree_kernel(-self.discriminant)


def squarefree_kernel(n):
    out, p = 1, 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            out *= p
        p += 1
    return out * n


def cos_compare(x, angle):
    """Sign of x - cos(angle) for rational x, exact."""
    x = Fraction(x)
    if angle.is_pi_rational:
        q = angle.pi_coef % 2
        if q in _NIVEN:
            c = Fraction(_NIVEN[q])
            return (x > c) - (x < c)
    c = math.cos(float(angle))
    if abs(float(x) - c) > 1e-9:
        return 1 if x > c else -1
    for prec in working_precisions():
        with mpmath.workprec(prec):
            v = mpmath.mpf(x.numerator) / x.denominator - mpmath.cos(angle.mp())
            if abs(v) > mpmath.ldexp(1, -prec + 8):
                return 1 if v > 0 else -1
    raise PrecisionError("cosine could not be separated from a rational")


def _floor_scaled_cos(m, angle):
    """floor(m cos(angle)) for an integer m >= 1, exact."""
    t = math.floor(m * math.cos(float(angle)))
    while cos_compare(Fraction(t, m), angle) > 0:
        t -= 1
    while cos_compare(Fraction(t + 1, m), angle) <= 0:
        t += 1
    return t


def _check_upper(interval):
    if interval.lo < ZERO or interval.hi > PI:
        raise ValueError(f"interval {interval} is not inside [0, pi]")


def _divisors_mu(n):
    primes, p = [], 2
    while p * p <= n:
        if n % p == 0:
            primes.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        primes.append(n)
    out = [(1, 1)]
    for p in primes:
        out += [(d * p, -mu) for d, mu in out]
    return out


def _coprime_in_range(a, lo, hi):
    """#{lo <= b <= hi : gcd(a, b) = 1}."""
    if hi < lo:
        return 0
    return sum(mu * (hi // d - (lo - 1) // d) for d, mu in _divisors_mu(a))


def b_range(a, interval):
    """Inclusive range of b with theta in [lo, hi), i.e. cos(hi) < -b/2a <= cos(lo)."""
    lo = -_floor_scaled_cos(2 * a, interval.lo)
    hi = -_floor_scaled_cos(2 * a, interval.hi) - 1
    # |b| < 2a leaves out theta = 0 and theta = pi
    return max(lo, -2 * a + 1), min(hi, 2 * a - 1)


def _endpoints(interval, height):
    """+1 (theta = 0) and -1 (theta = pi) at height 1, when in the arc."""
    n = 0
    if interval.lo.compare(ZERO) <= 0 < interval.hi.compare(ZERO):
        n += 1
    if interval.lo.compare(PI) <= 0 < interval.hi.compare(PI):
        n += 1
    return n


def count_S2_upper(interval, height):
    """Exact #S_2(I, H) for a half-open I inside [0, pi]."""
    _check_upper(interval)
    amax = math.floor(Height.of(height).sq)
    total = _endpoints(interval, height)
    for a in range(1, amax + 1):
        lo, hi = b_range(a, interval)
        total += _coprime_in_range(a, lo, hi)
    return total


def reflect_to_upper(interval):
    """I inside [pi, 2pi] maps to I - pi, which has the same count."""
    if interval.lo < PI or interval.hi > TWO_PI:
        raise ValueError(f"interval {interval} is not inside [pi, 2pi]")
    return Interval(interval.lo - PI, interval.hi - PI)


def split_upper_lower(interval):
    """Pieces of a half-open I inside [0, 2pi), lower pieces already reflected."""
    if interval.lo < ZERO or interval.hi > TWO_PI:
        raise ValueError(f"interval {interval} is outside [0, 2pi)")
    pieces = []
    if interval.lo < PI:
        pieces.append(Interval(interval.lo, min(interval.hi, PI, key=_key)))
    if interval.hi > PI:
        pieces.append(reflect_to_upper(Interval(max(interval.lo, PI, key=_key), interval.hi)))
    return pieces


def _key(angle):
    return float(angle)


def count_S2(interval, height):
    """Exact #S_2(I, H) for any half-open I inside [0, 2pi)."""
    return sum(count_S2_upper(p, height) for p in split_upper_lower(interval))


def main_term_S2(interval, height):
    """(cos lo - cos hi) / zeta(2) H^4 for I inside [0, pi]; zeta(2) = pi^2/6."""
    _check_upper(interval)
    width = math.cos(float(interval.lo)) - math.cos(float(interval.hi))
    return width * 6 / math.pi ** 2 * float(Height.of(height).sq) ** 2


def enumerate_S2(interval, height):
    """All degree-2 pairs (a, b) with theta in the upper interval, as arrays.

    Returns (a, b) numpy arrays; the points +-1 are not included.
    """
    _check_upper(interval)
    amax = math.floor(Height.of(height).sq)
    a_parts, b_parts = [], []
    for a in range(1, amax + 1):
        lo, hi = b_range(a, interval)
        if hi < lo:
            continue
        b = np.arange(lo, hi + 1, dtype=np.int64)
        b = b[np.gcd(b, a) == 1]
        a_parts.append(np.full(b.shape, a, dtype=np.int64))
        b_parts.append(b)
    if not a_parts:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(a_parts), np.concatenate(b_parts)


def _is_square(n):
    r = np.floor(np.sqrt(n.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        r = np.where(r * r > n, r - 1, r)
        r = np.where((r + 1) * (r + 1) <= n, r + 1, r)
    return r * r == n


def regroup_by_field(interval, height, ds):
    """#S_K(I, H) for K = Q(sqrt(-d)), d in ds, read off the aggregate points.

    A pair (a, b) lies in Q(sqrt(-d)) exactly when 4a^2 - b^2 = d m^2; the
    points +-1 lie in every field.  With sigma(sqrt(-d)) in the upper half
    plane, the conjugate of a point with theta in (0, pi) has argument
    2pi - theta, so upper-half counts are read off directly.
    """
    a, b = enumerate_S2(interval, height)
    n = 4 * a * a - b * b
    ends = _endpoints(interval, height)
    out = {}
    for d in ds:
        mask = (n % d == 0) & _is_square(n // d)
        out[d] = int(mask.sum()) + ends
    return out
