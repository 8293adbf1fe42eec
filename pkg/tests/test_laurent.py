import random
from fractions import Fraction
from itertools import product

import pytest

from persym.census import rank_census, ranks_by_index
from persym.errors import CapacityError, ShapeError
from persym.formulas import rq_closed
from persym.gf2 import PolyGF2
from persym.laurent import (
    TruncatedLaurent,
    char_E,
    char_E_poly_pair,
    char_psi,
    coset_integral,
    exp_sum_f,
    exp_sums_by_index,
    block_moments,
    f_value_counts,
)
from persym.model import CoeffAssignment, Shape

from .shapes import shapes_by_cosets


def tails_for(shape, x, depth_extra=0):
    a = CoeffAssignment.from_index(shape, x)
    return [TruncatedLaurent(w + depth_extra, word) for w, word in zip(shape.block_bits, a.blocks)]


def naive_f(shape, x):
    """Sum the characters term by term from coefficient lists."""
    a = CoeffAssignment.from_index(shape, x)
    k = shape.k
    total = 0
    for y in product((0, 1), repeat=k):
        prod = 1
        for j, sj in enumerate(shape.s):
            alpha = [None] + a.block_bits_list(j)
            inner = 0
            for u in product((0, 1), repeat=sj):
                # T^-1 coefficient of t * Y * U: sum of y_a u_b alpha_{a+b+1}
                c = 0
                for da, ya in enumerate(y):
                    for db, ub in enumerate(u):
                        c ^= ya & ub & alpha[da + db + 1]
                inner += -1 if c else 1
            prod *= inner
        total += prod
    return total


def test_truncated_laurent_basics():
    t = TruncatedLaurent.from_terms([2, 4], 4)
    assert [t.coeff(i) for i in range(1, 5)] == [0, 1, 0, 1]
    assert t.in_ideal(1) and not t.in_ideal(2)
    with pytest.raises(ValueError):
        TruncatedLaurent(2, 0b100)
    with pytest.raises(ValueError):
        t.in_ideal(5)


def test_char_E_examples():
    assert char_E(TruncatedLaurent(3)) == 1
    assert char_E(TruncatedLaurent.from_terms([1], 3)) == -1
    assert char_E(TruncatedLaurent.from_terms([2], 3)) == 1
    with pytest.raises(ShapeError):
        char_E(TruncatedLaurent(0))


def test_char_E_poly_pair_examples():
    t = TruncatedLaurent.from_terms([1, 3], 3)
    assert char_E_poly_pair(t, PolyGF2(0), PolyGF2(5)) == 1
    assert char_E_poly_pair(TruncatedLaurent.from_terms([1], 1), PolyGF2(1), PolyGF2(1)) == -1
    t3 = TruncatedLaurent.from_terms([3], 3)
    T = PolyGF2.from_exponents(1)
    assert char_E_poly_pair(t3, T, T) == -1
    assert char_E_poly_pair(t3, T, PolyGF2(1)) == 1
    with pytest.raises(ShapeError):
        char_E_poly_pair(TruncatedLaurent(2), T, T)


def test_char_psi_examples():
    z = TruncatedLaurent(2)
    e1 = TruncatedLaurent.from_terms([1], 2)
    e2 = TruncatedLaurent.from_terms([2], 2)
    assert char_psi([z, z, z]) == 1
    assert char_psi([e1, e1]) == 1
    assert char_psi([e1, e2]) == -1


def test_exp_sum_examples():
    sh = Shape((2, 1), 3)
    assert exp_sum_f(sh, tails_for(sh, 0)) == 2 ** (sh.total_rows + sh.k)
    sh = Shape((1,), 2)
    assert exp_sum_f(sh, [TruncatedLaurent.from_terms([1], 2)]) == 4
    sh = Shape((2,), 3)
    assert exp_sum_f(sh, [TruncatedLaurent.from_coeffs([1, 1, 0, 0])]) == 8
    with pytest.raises(ShapeError):
        exp_sum_f(sh, [TruncatedLaurent(3)])


SMALL = [Shape(s, k) for s, k in [((1,), 2), ((2,), 2), ((1, 1), 2), ((2,), 3), ((1, 2), 3), ((2, 2), 3), ((3,), 4), ((1, 1, 1), 3)]]


@pytest.mark.parametrize("sh", SMALL, ids=Shape.label)
def test_python_and_compiled_sums_match_naive(sh):
    table = exp_sums_by_index(sh)
    rnd = random.Random(sh.coeff_bits)
    xs = range(1 << sh.coeff_bits) if sh.coeff_bits <= 8 else rnd.sample(range(1 << sh.coeff_bits), 64)
    for x in xs:
        want = naive_f(sh, x)
        assert exp_sum_f(sh, tails_for(sh, x)) == want
        assert table[x] == want


@pytest.mark.parametrize("sh", SMALL, ids=Shape.label)
def test_rank_identity(sh):
    f = exp_sums_by_index(sh)
    r = ranks_by_index(sh)
    for x in range(1 << sh.coeff_bits):
        assert f[x] == 2 ** (sh.total_rows + sh.k - int(r[x]))


def test_coset_constancy_under_deeper_truncation():
    rnd = random.Random(3)
    sh = Shape((2, 3), 3)
    for _ in range(40):
        x = rnd.randrange(1 << sh.coeff_bits)
        base = exp_sum_f(sh, tails_for(sh, x))
        deeper = [t.deepen(t.depth + 6, rnd.getrandbits(6)) for t in tails_for(sh, x)]
        assert exp_sum_f(sh, deeper) == base


def test_coset_integral_examples():
    sh = Shape((1,), 2)
    assert coset_integral(sh, 1) == 5 == Fraction(8 + 3 * 4, 4)
    assert coset_integral(sh, 2) == 28 == Fraction(64 + 3 * 16, 4)
    assert f_value_counts(sh) == {4: 3, 8: 1}


@pytest.mark.parametrize("sh", SMALL, ids=Shape.label)
def test_coset_integral_equals_rq_closed(sh):
    d = rank_census(sh)
    for q in (1, 2, 3):
        direct = coset_integral(sh, q)
        assert direct == rq_closed(d, q)
        assert coset_integral(sh, q, method="factored") == direct
    assert coset_integral(sh, 1) == 2**sh.total_rows + 2**sh.k - 1


def test_coset_integral_threads_and_cap():
    sh = Shape((2, 2, 2), 3)
    assert coset_integral(sh, 2, threads=1) == coset_integral(sh, 2, threads=4)
    with pytest.raises(CapacityError):
        coset_integral(sh, 1, state_cap=2**10)
    with pytest.raises(ValueError):
        coset_integral(sh, 1, method="monte-carlo")



@pytest.mark.parametrize("sh", shapes_by_cosets(10), ids=Shape.label)
def test_monomial_product_matches_full_enumeration(sh):
    assert (exp_sums_by_index(sh) == exp_sums_by_index(sh, full=True)).all()


@pytest.mark.parametrize("sj,k,q", [(1, 2, 1), (2, 2, 3), (2, 3, 2), (3, 3, 1), (3, 4, 2)])
def test_block_moments_product_form_matches_full_enumeration(sj, k, q):
    assert (block_moments(sj, k, q) == block_moments(sj, k, q, full=True)).all()


@pytest.mark.parametrize("sh", [Shape((2, 3), 2), Shape((1, 1, 1), 3), Shape((6,), 4)], ids=Shape.label)
def test_auto_integral_matches_direct(sh):
    for q in (1, 2):
        assert coset_integral(sh, q, method="auto") == coset_integral(sh, q)
