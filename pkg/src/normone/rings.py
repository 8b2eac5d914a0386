"""Orders Z[theta] presented by a monic integer polynomial.

Every ring used by the package (Z, O_k, O_K) is monogenic in the supported
range, so an order is just the power basis 1, theta, ..., theta^(n-1) and the
structure constants obtained by reducing theta^(i+j) modulo the polynomial.
Elements are tuples of Python ints in that basis.
"""

from fractions import Fraction
import math


class NumberRing:
    """The order Z[x]/(f) for a monic integer polynomial f.

    ``poly`` lists coefficients from the constant term upwards.
    """

    def __init__(self, poly, name=""):
        poly = tuple(int(c) for c in poly)
        if len(poly) < 2 or poly[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree >= 1")
        self.poly = poly
        self.degree = n = len(poly) - 1
        self.name = name
        powers = [tuple(int(i == k) for i in range(n)) for k in range(n)]
        for _ in range(n, 2 * n - 1):
            prev = powers[-1]
            top = prev[-1]
            shifted = (0,) + prev[:-1]
            powers.append(tuple(shifted[i] - top * poly[i] for i in range(n)))
        self._powers = powers
        # sparse structure constants: (i, j) -> [(k, c), ...]
        self._table = [[[(k, c) for k, c in enumerate(powers[i + j]) if c]
                        for j in range(n)] for i in range(n)]
        self.one = tuple(int(i == 0) for i in range(n))
        self.zero = (0,) * n

    def __repr__(self):
        return f"NumberRing({self.name or self.poly})"

    # -- element arithmetic on integer (or Fraction) coordinate tuples --

    def mul(self, a, b):
        n = self.degree
        if n == 1:
            return (a[0] * b[0],)
        if n == 2:
            c0, c1 = self.poly[0], self.poly[1]
            t = a[1] * b[1]
            return (a[0] * b[0] - c0 * t, a[0] * b[1] + a[1] * b[0] - c1 * t)
        out = [0] * n
        table = self._table
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = table[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                p = ai * bj
                for k, c in row[j]:
                    out[k] += c * p
        return tuple(out)

    def basis_element(self, i):
        return tuple(int(k == i) for k in range(self.degree))

    def mul_matrix(self, a):
        """Rows are omega_i * a, so that (x * a) = x_row @ mul_matrix(a)."""
        return [self.mul(self.basis_element(i), a) for i in range(self.degree)]

    def power_coords(self, k):
        return self._powers[k] if k < len(self._powers) else None

    def norm(self, a):
        if self.degree == 1:
            return a[0]
        if self.degree == 2:
            c0, c1 = self.poly[0], self.poly[1]
            x, y = a
            return x * x - c1 * x * y + c0 * y * y
        return det(self.mul_matrix(a))

    def trace(self, a):
        return sum(row[i] for i, row in enumerate(self.mul_matrix(a)))

    def discriminant(self):
        n = self.degree
        basis = [self.basis_element(i) for i in range(n)]
        return det([[self.trace(self.mul(basis[i], basis[j])) for j in range(n)]
                    for i in range(n)])

    def evaluate(self, a, root):
        """Value of the element with coordinates ``a`` at a numeric root."""
        acc = 0
        for c in reversed(a):
            acc = acc * root + c
        return acc


def det(rows):
    """Exact determinant of a square matrix of ints or Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    result *= sign
    return int(result) if result.denominator == 1 else result


def solve_left(rows, rhs):
    """Solve x @ rows = rhs exactly for a square invertible matrix ``rows``.

    Returns a list of Fractions.
    """
    n = len(rows)
    # transpose to the usual A y = b form
    a = [[Fraction(rows[j][i]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col] / p
                for c in range(col, n + 1):
                    a[r][c] -= f * a[col][c]
    return [a[i][n] / a[i][i] for i in range(n)]


def content(nums):
    g = 0
    for x in nums:
        g = math.gcd(g, x)
    return g
