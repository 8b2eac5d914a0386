import itertools

import pytest
from hypothesis import given, strategies as st

from normone.ideals import (IdealHNF, decompose, factor_ideal, hnf, ideal_from_element,
                            in_IP, mobius_enumerate, primes_above)

from conftest import field


def principal(fd, nums):
    return ideal_from_element(fd.ring, nums)


def nonzero(n, lo=-12, hi=12):
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n).filter(any)


def test_unit_and_ramified_two(Qi):
    assert principal(Qi, (1, 0)).is_unit()
    p = principal(Qi, (1, 1))
    assert p.norm == 2
    assert p * p == principal(Qi, (2, 0))


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-3", "Qsqrt-5", "Qzeta5"])
@given(data=st.data())
def test_ideal_arithmetic(name, data):
    fd = field(name)
    a = tuple(data.draw(nonzero(fd.degree)))
    b = tuple(data.draw(nonzero(fd.degree)))
    I, J = principal(fd, a), principal(fd, b)
    assert I.norm == abs(fd.ring.norm(a))
    IJ = I * J
    assert IJ == principal(fd, fd.ring.mul(a, b))
    assert I.divides(IJ) and J.divides(IJ)
    assert IJ.quotient(J) == I
    assert (I + J).divides(I) and (I + J).divides(J)


@pytest.mark.parametrize("name", ["Qsqrt-5", "Qzeta5"])
def test_extension_of_subfield_ideals(name):
    fd = field(name)
    terms = list(mobius_enumerate(fd.ringk, 60))
    for s, t in itertools.product(terms[:8], repeat=2):
        A, B = s.ideal, t.ideal
        assert fd.extend_to_K(A).norm == A.norm ** 2
        assert fd.extend_to_K(A * B) == fd.extend_to_K(A) * fd.extend_to_K(B)


def test_primes_above_examples(Qi, Q3):
    five = primes_above(Qi.ring, 5)
    assert len(five) == 2 and all(P.e == 1 and P.f == 1 for P in five)
    gens = {principal(Qi, (2, 1)), principal(Qi, (2, -1))}
    assert {P.ideal for P in five} == gens
    (two,) = primes_above(Qi.ring, 2)
    assert two.e == 2 and two.ideal == principal(Qi, (1, 1))
    (five3,) = primes_above(Q3.ring, 5)
    assert five3.e == 1 and five3.f == 2 and five3.ideal.norm == 25


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-3", "Qsqrt-5", "Qsqrt-7", "Qzeta5"])
@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 29, 31, 41])
def test_prime_decomposition_is_complete(name, p):
    fd = field(name)
    prod = IdealHNF.unit(fd.ring)
    total = 0
    for P in primes_above(fd.ring, p):
        prod = prod * P.ideal ** P.e
        total += P.e * P.f
    assert total == fd.degree
    assert prod == principal(fd, (p,) + (0,) * (fd.degree - 1))


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-5", "Qzeta5"])
@given(data=st.data())
def test_factorisation_round_trip(name, data):
    fd = field(name)
    a = tuple(data.draw(nonzero(fd.degree, -6, 6)))
    I = principal(fd, a)
    prod = IdealHNF.unit(fd.ring)
    for P, v in factor_ideal(I):
        prod = prod * P.ideal ** v
    assert prod == I


def test_mobius_small_cases(Qi):
    (only,) = list(mobius_enumerate(Qi.ringk, 1))
    assert only.ideal.is_unit() and only.mu == 1
    two = [P for P, _ in Qi.ramified]
    got = {t.ideal.norm: t.mu for t in mobius_enumerate(Qi.ringk, 10, two)}
    assert got == {1: 1, 3: -1, 5: -1, 7: -1}


def _brute_squarefree(fd, X, exclude):
    """All squarefree O_k-ideals of norm <= X coprime to ``exclude``, by HNF search."""
    ring = fd.ringk
    found = {}
    for a in range(1, X + 1):
        for c in range(1, X // a + 1):
            for b in range(c):
                try:
                    I = IdealHNF(ring, [[a, b], [0, c]])
                except ValueError:
                    continue
                if IdealHNF.from_generators(ring, I.matrix) != I:
                    continue
                fac = factor_ideal(I)
                if any(v > 1 for _, v in fac):
                    continue
                if any(P.ideal in exclude for P, _ in fac):
                    continue
                found[I.matrix] = (-1) ** len(fac)
    return found


def test_mobius_enumeration_matches_brute_force(Qz5):
    exclude = [P for P, _ in Qz5.ramified]
    X = 120
    got = {}
    for t in mobius_enumerate(Qz5.ringk, X, exclude):
        assert t.ideal.matrix not in got
        got[t.ideal.matrix] = t.mu
    assert got == _brute_squarefree(Qz5, X, set(exclude))


# ---------------------------------------------------------------------------
# decomposition


def _triple(fd, nums):
    A, D, B = decompose(fd, nums)
    return A.norm, D.norm, B.norm, A, D, B


def test_decompose_examples(Qi):
    A, D, B = decompose(Qi, (6, 0))
    assert A.matrix == ((6,),) and D.is_unit() and B.is_unit()
    A, D, B = decompose(Qi, (1, 1))
    assert A.is_unit() and D == principal(Qi, (1, 1)) and B.is_unit()
    A, D, B = decompose(Qi, (2, 1))
    assert A.is_unit() and D.is_unit() and B == principal(Qi, (2, 1))


def test_in_IP_examples(Qi):
    assert in_IP(Qi, IdealHNF.unit(Qi.ring))
    assert not in_IP(Qi, principal(Qi, (5, 0)))
    assert in_IP(Qi, principal(Qi, (2, 1)))
    assert not in_IP(Qi, principal(Qi, (1, 1)))


def _small_elements(fd, bound):
    B = 15 if fd.degree == 2 else 3
    for nums in itertools.product(range(-B, B + 1), repeat=fd.degree):
        if any(nums) and abs(fd.ring.norm(nums)) <= bound:
            yield nums


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-3", "Qsqrt-5", "Qzeta5"])
def test_decompose_is_a_left_inverse(name):
    fd = field(name)
    P = fd.squarefree_part()
    for nums in _small_elements(fd, 200):
        A, D, B = decompose(fd, nums)
        assert fd.extend_to_K(A) * D * B == principal(fd, nums)
        assert P.divides(P) and D.divides(P)
        assert in_IP(fd, B)
        # tau-stability and coprimality with the conjugate
        assert (B + fd.tau_ideal(B)).is_unit()
        assert fd.tau_ideal(D) == D


@pytest.mark.parametrize("name", ["Qi", "Qsqrt-5"])
def test_decomposition_is_unique(name):
    fd = field(name)
    ideals = {}
    A_list = [t.ideal for t in mobius_enumerate(fd.ringk, 10)] + [IdealHNF(fd.ringk, [[4]])]
    Ds = [IdealHNF.unit(fd.ring)] + [p for _, p in fd.ramified]
    Bs = [IdealHNF.unit(fd.ring)]
    for nums in _small_elements(fd, 30):
        B = principal(fd, nums)
        if in_IP(fd, B) and B not in Bs:
            Bs.append(B)
    for A in A_list:
        for D in Ds:
            for B in Bs:
                I = fd.extend_to_K(A) * D * B
                assert I not in ideals, "two triples give the same ideal"
                ideals[I] = (A, D, B)


def test_hnf_is_canonical():
    rows = [(4, 6), (2, 8), (6, 2)]
    h = hnf(rows)
    assert h == hnf([(2, 8), (6, 2), (4, 6), (0, 0)])
    assert all(h[i][i] > 0 for i in range(len(h)))
