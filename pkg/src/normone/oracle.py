"""Brute-force enumeration of S_K(I, H), independent of the sieve.

Every integral beta in a ball large enough to hold all canonical preimages is
tested: it must lie in the fundamental domain (no cap, full arcs), its
decomposition beta O_K = (A O_K) D B must have A equal to a class
representative, and alpha = beta / tau(beta) must have height at most H
(computed from alpha itself, through its denominator ideal) and arguments in
I.  The formula N(beta) / N(A O_K D) for the height is checked against the
direct value for every point.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
import random

import mpmath
import numpy as np

from .angles import Angle, ArcProduct
from .domain import RegionSF
from .heights import Height
from .ideals import IdealHNF, decompose
from .lattice import enumerate_ball, minkowski_lattice
from .sieve import cells, _as_arc_list


class OracleError(AssertionError):
    """Two routes to the same quantity disagreed."""


@dataclass(frozen=True)
class NormOnePoint:
    alpha: object          # FieldElement with relative norm 1
    beta: tuple            # canonical integral preimage
    height_power: object   # H(alpha)^(2N), exact
    args: tuple            # CertifiedArg per coordinate
    cell: tuple            # (C matrix, D matrix)

    @property
    def height(self):
        return float(self.height_power) ** (1.0 / (2 * len(self.args)))

    @property
    def arg_values(self):
        return tuple(a.approx for a in self.args)


def candidate_betas(fd, height):
    """Integral beta in the domain (no cap) with N(beta) <= H^(2N) max N(cell)."""
    height = Height.of(height)
    h2n = height.power(2 * fd.degree_N)
    max_cell = max(fd.extend_to_K(C).norm * D.norm for C, D in cells(fd))
    cap = h2n * max_cell
    region = RegionSF(fd, ArcProduct.full(fd.degree_N), cap)
    lat = minkowski_lattice(fd, IdealHNF.unit(fd.ring))
    out = []
    for x in enumerate_ball(lat, region.radius_sq):
        if not any(x):
            continue
        nums = lat.element(x)
        if region.contains(nums):
            out.append(nums)
    return out


def enumerate_SK(fd, arcs, height, betas=None):
    """All points of S_K(I, H) with their canonical preimages, sorted by argument."""
    height = Height.of(height)
    h2n = height.power(2 * fd.degree_N)
    arc_list = _as_arc_list(fd, arcs)
    reps = {C.matrix: C for C in fd.class_reps}
    ext_reps = {C.matrix: fd.extend_to_K(C) for C in fd.class_reps}
    if betas is None:
        betas = candidate_betas(fd, height)
    seen = {}
    points = []
    for nums in betas:
        A, D, _ = decompose(fd, nums, cofactor=False)
        if A.matrix not in reps:
            continue
        cell_norm = ext_reps[A.matrix].norm * D.norm
        # cheap exact prefilter on N(beta) >= N(cell): all larger candidates fail
        if fd.ring.norm(nums) > h2n * cell_norm:
            continue
        alpha = fd.psi(fd.element(nums))
        hp = fd.height_power(alpha)
        if hp != Fraction(fd.ring.norm(nums), cell_norm):
            raise OracleError(f"height formula disagrees for beta={nums}")
        if hp > h2n:
            continue
        args = tuple(fd.certified_arg(alpha.nums, n) for n in range(fd.degree_N))
        if not any(all(a.in_interval(iv) for a, iv in zip(args, ap.intervals))
                   for ap in arc_list):
            continue
        key = (alpha.nums, alpha.den)
        if key in seen:
            raise OracleError(f"alpha {alpha} reached twice: {seen[key]} and {nums}")
        seen[key] = nums
        points.append(NormOnePoint(alpha, tuple(nums), hp, args, (A.matrix, D.matrix)))
    points.sort(key=lambda p: p.arg_values)
    return points


def count_oracle(fd, arcs, height):
    return len(enumerate_SK(fd, arcs, height))


def points_in(points, arcs):
    """Filter already-enumerated points by another arc set (exact)."""
    out = []
    for p in points:
        for ap in arcs if not isinstance(arcs, ArcProduct) else [arcs]:
            if all(a.in_interval(iv) for a, iv in zip(p.args, ap.intervals)):
                out.append(p)
                break
    return out


# ---------------------------------------------------------------------------
# discrepancy


def _sorted_args(points):
    args = sorted((p.args[0] for p in points), key=lambda a: a.approx)
    # resolve near-ties exactly; two distinct points never share an argument
    for i in range(len(args) - 1):
        if args[i + 1].approx - args[i].approx < 1e-12:
            a, b = args[i], args[i + 1]
            with mpmath.workprec(200):
                va = a.field.arg_mp(a.element, 0, 200)
                vb = b.field.arg_mp(b.element, 0, 200)
            if vb < va:
                args[i], args[i + 1] = b, a
    return [a.approx for a in args]


def discrepancy_1d(thetas):
    """Exact sup over half-open [a, b) of |#/n - (b - a)/2pi| for sorted thetas."""
    n = len(thetas)
    if n == 0:
        raise ValueError("no points")
    two_pi = 2 * math.pi
    # surplus: a = theta_i, b just above theta_j, i <= j
    best_plus = 0.0
    running_min = math.inf
    for j in range(1, n + 1):
        t = thetas[j - 1] / two_pi
        running_min = min(running_min, (j - 1) / n - t)
        best_plus = max(best_plus, j / n - t - running_min)
    # deficit: a just above theta_i (or 0), b = theta_j (or 2pi), i < j
    ext = [0.0] + [t / two_pi for t in thetas] + [1.0]
    best_minus = 0.0
    running_min = ext[0] - 0.0
    for j in range(1, n + 2):
        best_minus = max(best_minus, ext[j] - (j - 1) / n - running_min)
        if j <= n:
            running_min = min(running_min, ext[j] - j / n)
    return max(best_plus, best_minus)


def discrepancy(fd, height, points=None, grid=32):
    """D_H(S_K): exact for N = 1, a grid lower bound for N = 2.

    Returns (value, mode) with mode "exact" or "grid-lower-bound".
    """
    if points is None:
        points = enumerate_SK(fd, ArcProduct.full(fd.degree_N), height)
    if fd.degree_N == 1:
        return discrepancy_1d(_sorted_args(points)), "exact"
    n = len(points)
    args = np.array([p.arg_values for p in points])
    cell = np.floor(args / (2 * math.pi) * grid).astype(int).clip(0, grid - 1)
    hist = np.zeros((grid, grid))
    np.add.at(hist, (cell[:, 0], cell[:, 1]), 1)
    cum = np.zeros((grid + 1, grid + 1))
    cum[1:, 1:] = hist.cumsum(0).cumsum(1)
    best = 0.0
    idx = np.arange(grid + 1)
    for a1 in range(grid):
        for b1 in range(a1 + 1, grid + 1):
            strip = cum[b1] - cum[a1]                     # counts per prefix in coord 2
            counts = strip[None, :] - strip[:, None]      # [a2, b2)
            area = (b1 - a1) * (idx[None, :] - idx[:, None]) / grid ** 2
            mask = idx[None, :] > idx[:, None]
            dev = np.abs(counts / n - area)[mask]
            best = max(best, float(dev.max()))
    return best, "grid-lower-bound"


def histogram(fd, height, bins, points=None):
    """Rows (bin_lo, bin_hi, count) for arg sigma_1 over S_K(H), bins exact."""
    if points is None:
        points = enumerate_SK(fd, ArcProduct.full(fd.degree_N), height)
    edges = [Angle.of_pi(Fraction(2 * i, bins)) for i in range(bins + 1)]
    counts = [0] * bins
    for p in points:
        a = p.args[0]
        i = min(int(a.approx / (2 * math.pi) * bins), bins - 1)
        while i > 0 and a.compare(edges[i]) < 0:
            i -= 1
        while i < bins - 1 and a.compare(edges[i + 1]) >= 0:
            i += 1
        counts[i] += 1
    return [(float(edges[i]), float(edges[i + 1]), counts[i]) for i in range(bins)]


def histogram_csv(rows):
    lines = ["bin_lo,bin_hi,count"]
    lines += [f"{lo:.12f},{hi:.12f},{c}" for lo, hi, c in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# coset properties


def random_k_element(fd, rng, size=6):
    while True:
        num = [rng.randint(-size, size) for _ in range(fd.degree_N)]
        if any(num):
            den = rng.randint(1, size)
            return fd.from_k([Fraction(x, den) for x in num])


def random_K_element(fd, rng, size=5):
    while True:
        nums = tuple(rng.randint(-size, size) for _ in range(fd.degree))
        if any(nums):
            return fd.element(nums, rng.randint(1, size))


def coset_checks(fd, points, samples=1000, seed=0):
    """Minimal height in cosets and the square characterisation, on samples.

    Returns a dict of counters; any violation raises OracleError.
    """
    rng = random.Random(seed)
    report = {"height_pairs": 0, "psi_square": 0, "coset_samples": 0}
    for p in points:
        if fd.psi(p.alpha) != p.alpha * p.alpha:
            raise OracleError(f"psi(alpha) != alpha^2 for {p.alpha}")
        report["psi_square"] += 1
    for _ in range(samples):
        p = points[rng.randrange(len(points))]
        g = random_k_element(fd, rng)
        if not fd.height_power(p.alpha) <= fd.height_power(p.alpha * g):
            raise OracleError(f"H(alpha) > H(alpha*gamma) for {p.alpha}, {g}")
        report["height_pairs"] += 1
        # psi(beta) = alpha^2 exactly when beta lies in alpha k^x
        gamma = random_K_element(fd, rng)
        beta = p.alpha * gamma
        same = fd.psi(beta) == p.alpha * p.alpha
        in_coset = fd.to_k((beta / p.alpha).nums, (beta / p.alpha).den) is not None
        if same != in_coset:
            raise OracleError(f"square characterisation fails for {p.alpha}, {gamma}")
        beta_k = p.alpha * g
        if fd.psi(beta_k) != p.alpha * p.alpha:
            raise OracleError("psi(alpha*gamma) != alpha^2 for gamma in k")
        report["coset_samples"] += 1
    return report
