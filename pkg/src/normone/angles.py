"""Exact angles and half-open arc products.

An :class:`Angle` is ``pi_coef * pi + rad`` with rational parts.  Two angles
are equal only if both parts agree (pi is irrational); other comparisons fall
back to multiprecision evaluation, which always terminates because distinct
values eventually separate.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
import os
import re

import mpmath

DEFAULT_PRECISION = 128
MAX_PRECISION = 1 << 14
PRECISION_ENV = "NORMONE_PRECISION_BITS"


class PrecisionError(ArithmeticError):
    """Raised when adaptive precision cannot separate two quantities."""


def default_precision():
    """Starting precision in bits, from NORMONE_PRECISION_BITS when set."""
    raw = os.environ.get(PRECISION_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV}={raw!r} is not an integer") from None
    if not 53 <= bits <= MAX_PRECISION:
        raise ValueError(f"{PRECISION_ENV} must lie in [53, {MAX_PRECISION}]")
    return bits


def working_precisions(start=None):
    prec = max(53, start or default_precision())
    while prec <= MAX_PRECISION:
        yield prec
        prec *= 2


@dataclass(frozen=True, order=False)
class Angle:
    pi_coef: Fraction = Fraction(0)
    rad: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "pi_coef", Fraction(self.pi_coef))
        object.__setattr__(self, "rad", Fraction(self.rad))

    @classmethod
    def of_pi(cls, q):
        return cls(Fraction(q), Fraction(0))

    @classmethod
    def parse(cls, text):
        """Parse ``"pi/3"``, ``"3pi/4"``, ``"2*pi"``, ``"0.5236"`` and the like."""
        s = text.strip().lower().replace(" ", "").replace("*", "")
        m = re.fullmatch(r"([+-]?[0-9./]*)pi(?:/([0-9]+))?", s)
        if m:
            num = m.group(1)
            if num in ("", "+"):
                coef = Fraction(1)
            elif num == "-":
                coef = Fraction(-1)
            else:
                coef = Fraction(num)
            if m.group(2):
                coef /= int(m.group(2))
            return cls(coef, Fraction(0))
        try:
            return cls(Fraction(0), Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse angle {text!r}") from None

    def __float__(self):
        return float(self.pi_coef) * math.pi + float(self.rad)

    def mp(self):
        return mpmath.mpf(self.pi_coef.numerator) / self.pi_coef.denominator * mpmath.pi \
            + mpmath.mpf(self.rad.numerator) / self.rad.denominator

    @property
    def is_pi_rational(self):
        return self.rad == 0

    def half(self):
        return Angle(self.pi_coef / 2, self.rad / 2)

    def plus_pi(self, k=1):
        return Angle(self.pi_coef + k, self.rad)

    def __sub__(self, other):
        return Angle(self.pi_coef - other.pi_coef, self.rad - other.rad)

    def __add__(self, other):
        return Angle(self.pi_coef + other.pi_coef, self.rad + other.rad)

    def compare(self, other):
        """Sign of self - other, exact."""
        if self == other:
            return 0
        diff = self - other
        if diff.rad == 0:
            return 1 if diff.pi_coef > 0 else -1
        if diff.pi_coef == 0:
            return 1 if diff.rad > 0 else -1
        approx = float(diff)
        if abs(approx) > 1e-9:
            return 1 if approx > 0 else -1
        for prec in working_precisions():
            with mpmath.workprec(prec):
                v = diff.mp()
                if abs(v) > mpmath.ldexp(1, -prec + 8):
                    return 1 if v > 0 else -1
        raise PrecisionError("angles could not be separated")

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __str__(self):
        if self.rad == 0:
            if self.pi_coef == 0:
                return "0"
            return f"{self.pi_coef}*pi"
        if self.pi_coef == 0:
            return str(self.rad)
        return f"{self.pi_coef}*pi+{self.rad}"


ZERO = Angle()
PI = Angle.of_pi(1)
TWO_PI = Angle.of_pi(2)


@dataclass(frozen=True)
class Interval:
    """Half-open interval [lo, hi) of angles."""

    lo: Angle
    hi: Angle

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")

    @property
    def length(self):
        return self.hi - self.lo

    def half(self):
        return Interval(self.lo.half(), self.hi.half())

    def shifted_pi(self):
        return Interval(self.lo.plus_pi(), self.hi.plus_pi())

    def __str__(self):
        return f"[{self.lo}, {self.hi})"


class ArcProduct:
    """Product of N non-wrapping half-open arcs inside [0, 2pi)."""

    def __init__(self, intervals):
        ivs = []
        for iv in intervals:
            if not isinstance(iv, Interval):
                lo, hi = iv
                lo = lo if isinstance(lo, Angle) else _to_angle(lo)
                hi = hi if isinstance(hi, Angle) else _to_angle(hi)
                iv = Interval(lo, hi)
            if iv.lo < ZERO or iv.hi > TWO_PI:
                raise ValueError(f"arc {iv} is not inside [0, 2pi); split wrapping arcs")
            ivs.append(iv)
        if not ivs:
            raise ValueError("need at least one arc")
        self.intervals = tuple(ivs)

    @classmethod
    def full(cls, N):
        return cls([Interval(ZERO, TWO_PI)] * N)

    @property
    def N(self):
        return len(self.intervals)

    @property
    def measure(self):
        out = 1.0
        for iv in self.intervals:
            out *= float(iv.length)
        return out

    def measure_mp(self):
        out = mpmath.mpf(1)
        for iv in self.intervals:
            out *= iv.length.mp()
        return out

    def __eq__(self, other):
        return isinstance(other, ArcProduct) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        return "ArcProduct(" + " x ".join(map(str, self.intervals)) + ")"

    def __str__(self):
        return " x ".join(map(str, self.intervals))


def _to_angle(x):
    if isinstance(x, Angle):
        return x
    if isinstance(x, str):
        return Angle.parse(x)
    if isinstance(x, float):
        return Angle(0, Fraction(repr(x)))
    return Angle(0, Fraction(x))


def parse_arcs(spec, N=1):
    """Parse ``lo:hi[,lo:hi...]`` into a list of ArcProducts.

    For N = 1 the arcs form a union and must not overlap.  For N > 1 they
    apply to successive coordinates and missing coordinates take the full
    circle.  An upper endpoint beyond 2pi is clipped to 2pi and a wrapping
    arc (lo > hi) is split in two.
    """
    parts = [p for p in spec.split(",") if p.strip()]
    per_coord = []
    for part in parts:
        ends = part.split(":")
        if len(ends) != 2:
            raise ValueError(f"arc {part!r} is not of the form lo:hi")
        lo_s, hi_s = ends
        lo, hi = Angle.parse(lo_s), Angle.parse(hi_s)
        if lo < ZERO:
            raise ValueError(f"arc start {lo} is negative")
        if hi > TWO_PI:
            hi = TWO_PI
        if lo >= TWO_PI:
            raise ValueError(f"arc start {lo} is not below 2pi")
        if lo < hi:
            per_coord.append([Interval(lo, hi)])
        else:
            pieces = [Interval(lo, TWO_PI)]
            if hi > ZERO:
                pieces.append(Interval(ZERO, hi))
            per_coord.append(pieces)
    if N == 1 and len(per_coord) > 1:
        pieces = sorted((iv for ps in per_coord for iv in ps), key=lambda iv: float(iv.lo))
        for a, b in zip(pieces, pieces[1:]):
            if b.lo < a.hi:
                raise ValueError(f"arcs {a} and {b} overlap")
        return [ArcProduct([iv]) for iv in pieces]
    if len(per_coord) > N:
        raise ValueError(f"{len(per_coord)} arcs given for N={N}")
    while len(per_coord) < N:
        per_coord.append([Interval(ZERO, TWO_PI)])
    products = [[]]
    for pieces in per_coord:
        products = [p + [iv] for p in products for iv in pieces]
    return [ArcProduct(p) for p in products]
