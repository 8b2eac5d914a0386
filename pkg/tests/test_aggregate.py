import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from normone import Interval, parse_arcs
from normone.angles import PI, ZERO, Angle
from normone.aggregate import (AggregatePoint, b_range, cos_compare, count_S2, count_S2_upper,
                               enumerate_S2, main_term_S2, reflect_to_upper, regroup_by_field,
                               split_upper_lower, squarefree_kernel)
from normone.sieve import count_SK

from conftest import field

UPPER = Interval(ZERO, PI)


def arc(p, q):
    return Interval(Angle.of_pi(Fraction(p)), Angle.of_pi(Fraction(q)))


def test_point_validation():
    pt = AggregatePoint(1, -1)
    assert pt.cos == Fraction(1, 2) and pt.theta == pytest.approx(math.pi / 3)
    assert pt.discriminant == -3 and pt.field_d == 3 and pt.height == 1
    assert AggregatePoint(5, 6).field_d == 1            # (3 + 4i)/5 up to sign
    for a, b in [(0, 0), (2, 4), (2, 2), (3, -6)]:
        with pytest.raises(ValueError):
            AggregatePoint(a, b)


def test_squarefree_kernel():
    assert [squarefree_kernel(n) for n in (1, 4, 12, 18, 75, 97)] == [1, 1, 3, 2, 3, 97]


def test_cos_compare_exact_at_niven_angles():
    assert cos_compare(Fraction(1, 2), Angle.of_pi(Fraction(1, 3))) == 0
    assert cos_compare(0, Angle.of_pi(Fraction(3, 2))) == 0
    assert cos_compare(Fraction(-1, 2) + Fraction(1, 10 ** 30), Angle.of_pi(Fraction(2, 3))) == 1
    # cos(pi/5) = 0.80901699437494742410...
    fifth = Angle.of_pi(Fraction(1, 5))
    assert cos_compare(Fraction(80901699437494742, 10 ** 17), fifth) == -1
    assert cos_compare(Fraction(80901699437494743, 10 ** 17), fifth) == 1


def test_height_one():
    # +1 and the pairs (1, -1), (1, 0), (1, 1) at pi/3, pi/2, 2pi/3; -1 is excluded
    assert count_S2(UPPER, 1) == 4
    assert count_S2(parse_arcs("0:2pi")[0].intervals[0], 1) == 8
    assert b_range(1, UPPER) == (-1, 1)


def _brute(interval, height):
    lo, hi = float(interval.lo), float(interval.hi)
    n = (lo <= 0 < hi) + (lo <= math.pi < hi)
    for a in range(1, math.floor(height ** 2) + 1):
        for b in range(-2 * a + 1, 2 * a):
            if math.gcd(a, b) == 1 and lo <= math.acos(-b / (2 * a)) < hi:
                n += 1
    return n


@given(st.integers(0, 34), st.integers(1, 35), st.sampled_from([1, 2, 3, 5, 7]))
def test_matches_brute_force(p, length, H):
    # angles in multiples of pi/35 hit no rational cosine except at 0 and pi
    q = min(p + length, 35)
    if q <= p:
        return
    I = arc(Fraction(p, 35), Fraction(q, 35))
    assert count_S2_upper(I, H) == _brute(I, H)


@given(st.lists(st.integers(1, 11), max_size=4), st.sampled_from([2, 4, 6]))
def test_additive_over_a_partition(cuts, H):
    ends = [0] + sorted(set(cuts)) + [12]
    pieces = [arc(Fraction(a, 12), Fraction(b, 12)) for a, b in zip(ends, ends[1:])]
    assert sum(count_S2_upper(I, H) for I in pieces) == count_S2_upper(UPPER, H)


def test_monotone_in_height():
    counts = [count_S2(UPPER, H) for H in (1, 1.5, 2, 3, 5, 8)]
    assert counts == sorted(counts) and counts[-1] > counts[0]


def test_reflection():
    I = arc(1, Fraction(3, 2))
    R = reflect_to_upper(I)
    assert (R.lo, R.hi) == (ZERO, Angle.of_pi(Fraction(1, 2)))
    for p, q in [(Fraction(1, 7), Fraction(4, 7)), (Fraction(1, 5), Fraction(9, 10))]:
        assert count_S2(arc(p + 1, q + 1), 6) == count_S2(arc(p, q), 6)
    with pytest.raises(ValueError):
        reflect_to_upper(arc(0, Fraction(1, 2)))
    with pytest.raises(ValueError):
        count_S2_upper(arc(Fraction(1, 2), Fraction(3, 2)), 2)


def test_split_full_circle():
    upper, lower = split_upper_lower(arc(0, 2))
    assert (upper.lo, upper.hi) == (ZERO, PI) and (lower.lo, lower.hi) == (ZERO, PI)
    assert count_S2(arc(0, 2), 5) == 2 * count_S2_upper(UPPER, 5)


def test_enumeration_matches_count():
    a, b = enumerate_S2(UPPER, 6)
    assert len(a) + 2 - 1 == count_S2(UPPER, 6)      # +1 is counted, -1 is not
    assert all(math.gcd(int(x), int(y)) == 1 for x, y in zip(a, b))
    assert (abs(b) < 2 * a).all()


def test_asymptotic_ratio_at_30():
    ratio = count_S2(UPPER, 30) / main_term_S2(UPPER, 30)
    assert abs(ratio - 1) < 0.05
    assert main_term_S2(UPPER, 30) == pytest.approx(12 / math.pi ** 2 * 30 ** 4)


def test_exponent_gap():
    """The aggregate grows like H^4 and a single field like H^2."""
    Qi = field("Qi")
    Hs = (10, 20, 30)
    ratios = [count_S2(UPPER, H) / count_SK(Qi, [parse_arcs("0:pi")[0]], H)[0] for H in Hs]
    for (h1, r1), (h2, r2) in zip(zip(Hs, ratios), zip(Hs[1:], ratios[1:])):
        slope = math.log(r2 / r1) / math.log(h2 / h1)
        assert 1.8 < slope < 2.2


@pytest.mark.parametrize("H", [1, 2, 5, 9])
def test_regroup_matches_each_field(H):
    ds = [1, 2, 3, 5, 7]
    got = regroup_by_field(UPPER, H, ds)
    half = parse_arcs("0:pi")[0]
    for d in ds:
        name = "Qi" if d == 1 else f"Qsqrt-{d}"
        assert got[d] == count_SK(field(name), [half], H)[0], d
