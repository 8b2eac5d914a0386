import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from normone import ArcProduct, Interval, parse_arcs
from normone.angles import Angle
from normone.oracle import (OracleError, candidate_betas, coset_checks, count_oracle,
                            discrepancy, discrepancy_1d, enumerate_SK, histogram,
                            histogram_csv, points_in)
from normone.sieve import count_SK

from conftest import field

FULL = parse_arcs("0:2pi")


def _alphas(points):
    return {(p.alpha.nums, p.alpha.den) for p in points}


def test_height_one_in_gaussian_field(Qi):
    got = _alphas(enumerate_SK(Qi, FULL, 1))
    assert got == {((1, 0), 1), ((0, 1), 1), ((-1, 0), 1), ((0, -1), 1)}


def test_first_quadrant_at_sqrt5(Qi):
    arc = parse_arcs("0:pi/2")
    pts = enumerate_SK(Qi, arc, "sqrt5")
    assert _alphas(pts) == {((1, 0), 1), ((3, 4), 5), ((4, 3), 5)}
    # sorted by argument
    assert [p.alpha.nums for p in pts] == [(1, 0), (4, 3), (3, 4)]
    assert pts[1].height_power == 5 and pts[1].height == pytest.approx(math.sqrt(5))


def test_sixth_roots_at_height_one(Q3):
    pts = enumerate_SK(Q3, FULL, 1)
    assert len(pts) == 6 and all(p.height_power == 1 for p in pts)
    assert all(Q3.is_torsion(p.alpha) for p in pts)


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-3", "Qsqrt-5", "Qsqrt-7"])
def test_points_are_norm_one_with_preimages(name):
    fd = field(name)
    for p in enumerate_SK(fd, FULL, 8):
        assert fd.in_SK(p.alpha)
        assert fd.psi(fd.element(p.beta)) == p.alpha
        assert fd.psi(p.alpha) == p.alpha * p.alpha
        assert fd.height_power(p.alpha) == p.height_power <= 8 ** 2


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-5", "Qsqrt-7"])
def test_argument_doubles(name):
    fd = field(name)
    for p in enumerate_SK(fd, FULL, 8):
        b = fd.arg_float(p.beta, 0)
        assert (2 * b - p.arg_values[0]) / (2 * math.pi) == pytest.approx(
            round((2 * b - p.arg_values[0]) / (2 * math.pi)), abs=1e-9)


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-3", "Qsqrt-5"])
def test_closed_under_inverse(name):
    fd = field(name)
    pts = enumerate_SK(fd, FULL, 10)
    alphas = {p.alpha for p in pts}
    assert all(fd.tau(a) in alphas and 1 / a in alphas for a in alphas)


def test_cells_partition_the_points(Q5):
    pts = enumerate_SK(Q5, FULL, 10)
    cells = {p.cell for p in pts}
    assert len(cells) > 1
    assert sum(len([p for p in pts if p.cell == c]) for c in cells) == len(pts)


def test_torsion_of_quartic_field(Qz5):
    pts = enumerate_SK(Qz5, ArcProduct.full(2), 1)
    assert len(pts) == 10 and all(Qz5.is_torsion(p.alpha) for p in pts)


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-3", "Qsqrt-7"])
@given(st.integers(0, 23), st.integers(1, 24), st.sampled_from([3, 5, "sqrt10", 9]))
def test_points_in_agrees_with_direct_enumeration(name, a, length, H):
    fd = field(name)
    b = min(a + length, 24)
    if b <= a:
        return
    arc = ArcProduct([Interval(Angle.of_pi(Fraction(a, 12)), Angle.of_pi(Fraction(b, 12)))])
    allp = enumerate_SK(fd, FULL, H)
    sub = points_in(allp, arc)
    assert _alphas(sub) == _alphas(enumerate_SK(fd, [arc], H))
    assert len(sub) == count_SK(fd, [arc], H)[0]


def test_candidates_are_nonzero(Qi):
    assert all(any(b) for b in candidate_betas(Qi, 3))


def test_count_oracle(Qi):
    assert count_oracle(Qi, FULL, 5) == 36


# ---------------------------------------------------------------------------
# discrepancy and histograms


def test_discrepancy_1d_examples():
    assert discrepancy_1d([0.0]) == pytest.approx(1.0)
    assert discrepancy_1d([0.0, math.pi]) == pytest.approx(0.5)
    even = [2 * math.pi * (j + 0.5) / 100 for j in range(100)]
    assert discrepancy_1d(even) == pytest.approx(0.01)


@given(st.lists(st.floats(0, 2 * math.pi, exclude_max=True), min_size=1, max_size=40))
def test_discrepancy_1d_range(thetas):
    d = discrepancy_1d(sorted(thetas))
    assert 1 / len(thetas) - 1e-12 <= d <= 1 + 1e-12


def test_discrepancy_of_fields(Qi, Qz5):
    d, mode = discrepancy(Qi, 1)
    assert mode == "exact" and d == pytest.approx(0.25)
    d10, _ = discrepancy(Qi, 10)
    assert 0 < d10 < 0.1
    dq, mode = discrepancy(Qz5, 2, grid=8)
    assert mode == "grid-lower-bound" and 0 <= dq <= 1


def test_histogram(Qi):
    rows = histogram(Qi, 10, 8)
    assert len(rows) == 8 and sum(c for _, _, c in rows) == count_oracle(Qi, FULL, 10)
    assert rows[0][0] == 0 and rows[-1][1] == pytest.approx(2 * math.pi)
    # the four units sit on bin edges and land in the bin they open
    unit_bins = [0, 2, 4, 6]
    h1 = histogram(Qi, 1, 8)
    assert [i for i, (_, _, c) in enumerate(h1) if c] == unit_bins
    text = histogram_csv(rows)
    assert text.splitlines()[0] == "bin_lo,bin_hi,count"
    assert text.splitlines()[1].startswith("0.000000000000,0.785398163397,")


# ---------------------------------------------------------------------------
# coset properties


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-5"])
def test_coset_checks(name):
    fd = field(name)
    pts = enumerate_SK(fd, FULL, 6)
    rep = coset_checks(fd, pts, samples=300, seed=1)
    assert rep["psi_square"] == len(pts)
    assert rep["height_pairs"] == rep["coset_samples"] == 300


def test_coset_checks_quartic(Qz5):
    pts = enumerate_SK(Qz5, ArcProduct.full(2), 2)
    rep = coset_checks(Qz5, pts, samples=100, seed=2)
    assert rep["coset_samples"] == 100


def test_oracle_error_is_an_assertion():
    assert issubclass(OracleError, AssertionError)
