"""Height bounds stored exactly through their square."""

from dataclasses import dataclass
from fractions import Fraction
import math
import re


@dataclass(frozen=True, order=True)
class Height:
    """A bound H >= 1 with H^2 rational (covers integers, decimals and sqrt(q))."""

    sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "sq", Fraction(self.sq))
        if self.sq < 1:
            raise ValueError("height bounds must be at least 1")

    @classmethod
    def of(cls, value):
        if isinstance(value, Height):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, float):
            value = Fraction(repr(value))
        return cls(Fraction(value) ** 2)

    @classmethod
    def parse(cls, text):
        s = text.strip().lower().replace(" ", "")
        m = re.fullmatch(r"sqrt\(?([0-9./]+)\)?", s)
        if m:
            return cls(Fraction(m.group(1)))
        try:
            return cls(Fraction(s) ** 2)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse height {text!r}") from None

    def power(self, e):
        """H^e for even e, exactly."""
        if e % 2:
            raise ValueError("only even powers are exact")
        return self.sq ** (e // 2)

    def __float__(self):
        return math.sqrt(self.sq)

    def __str__(self):
        r = math.isqrt(self.sq.numerator)
        if self.sq.denominator == 1 and r * r == self.sq.numerator:
            return str(r)
        q = Fraction(math.isqrt(self.sq.numerator), math.isqrt(self.sq.denominator))
        if q * q == self.sq:
            return str(q) if q.denominator != 1 else str(q.numerator)
        return f"sqrt({self.sq})"
