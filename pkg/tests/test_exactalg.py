import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from palfkit.exactalg import (
    QQ, ExactMatrix, Field, IntMatrix, Mod, cokernel, gcd_list, int_det,
    kernel_basis, rank, smith_normal_form, solve_in_span,
)


def dense_rank_oracle(rows):
    """Fraction-free (integer-scaled) dense elimination, no division."""
    den = 1
    for r in rows:
        for x in r:
            den = den * Fraction(x).denominator // __import__("math").gcd(den, Fraction(x).denominator)
    a = [[int(Fraction(x) * den) for x in r] for r in rows]
    m, n = len(a), len(a[0]) if a else 0
    rk, row = 0, 0
    for col in range(n):
        piv = next((i for i in range(row, m) if a[i][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        for i in range(row + 1, m):
            f, g = a[i][col], a[row][col]
            a[i] = [g * x - f * y for x, y in zip(a[i], a[row])]
        row += 1
        rk += 1
    return rk


def determinantal_divisors(rows):
    """SNF diagonal via gcds of k x k minors: d_1...d_k = gcd of k-minors."""
    m, n = len(rows), len(rows[0])
    prev, out = 1, []
    for k in range(1, min(m, n) + 1):
        g = gcd_list(int_det([[rows[i][j] for j in cs] for i in rs])
                     for rs in itertools.combinations(range(m), k)
                     for cs in itertools.combinations(range(n), k))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_identity_and_zero_rank():
    assert rank(ExactMatrix.identity(3)) == 3
    assert rank(ExactMatrix(2, 5)) == 0


def test_random_rank_matches_dense_oracle():
    rng = random.Random(11)
    for _ in range(40):
        rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.6 else 0
                 for _ in range(6)] for _ in range(6)]
        # force some dependence
        if rng.random() < 0.5:
            rows[5] = [a + 2 * b for a, b in zip(rows[0], rows[1])]
        assert rank(ExactMatrix.from_dense(rows)) == dense_rank_oracle(rows)


def test_kernel_examples():
    assert kernel_basis(ExactMatrix.identity(4)) == []
    m = ExactMatrix.from_dense([[1, -1, 1]])
    ker = kernel_basis(m)
    assert len(ker) == 2
    assert rank(ExactMatrix.from_dense(ker)) == 2
    for v in ker:
        assert m.apply(v) == [0]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 7), st.randoms(use_true_random=False))
def test_rank_nullity(m, n, rnd):
    rows = [[rnd.randint(-2, 2) for _ in range(n)] for _ in range(m)]
    mat = ExactMatrix.from_dense(rows)
    ker = kernel_basis(mat)
    assert rank(mat) + len(ker) == n
    for v in ker:
        assert all(x == 0 for x in mat.apply(v))


def test_prime_field_arithmetic():
    f7 = Field.parse("fp:7")
    assert f7(3) * f7(5) == f7(1)
    assert f7(Fraction(1, 2)) == f7(4)
    assert rank(ExactMatrix.from_dense([[1, 2], [3, 6]], f7)) == 1
    # singular mod 7 only
    assert rank(ExactMatrix.from_dense([[1, 2], [3, 13]], f7)) == 1
    assert rank(ExactMatrix.from_dense([[1, 2], [3, 13]])) == 2
    with pytest.raises(ValueError):
        Field(8)
    assert Mod(6, 7).signed() == -1


def test_solve_in_span():
    vecs = [[1, 0, 1], [0, 1, 1]]
    assert solve_in_span(vecs, [2, 3, 5]) == [2, 3]
    assert solve_in_span(vecs, [0, 0, 1]) is None


def test_snf_small():
    s = smith_normal_form(IntMatrix.from_rows([[2]]))
    assert s.diagonal == (2,)
    assert str(s.cokernel(1)) == "Z/2"
    assert str(cokernel(IntMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))) == "0"
    assert str(cokernel(IntMatrix.zeros(6, 3))) == "Z^6"


def test_snf_random_against_determinantal_divisors():
    rng = random.Random(5)
    for _ in range(30):
        rows = [[rng.randint(-4, 4) for _ in range(6)] for _ in range(4)]
        m = IntMatrix.from_rows(rows)
        s = smith_normal_form(m)
        assert list(s.diagonal) == determinantal_divisors(rows)
        for a, b in zip(s.diagonal, s.diagonal[1:]):
            assert b % a == 0
        assert abs(int_det(s.left.tolist())) == 1
        assert abs(int_det(s.right.tolist())) == 1
        d = (s.left @ m @ s.right).tolist()
        for i in range(4):
            for j in range(6):
                assert d[i][j] == (s.diagonal[i] if i == j and i < len(s.diagonal) else 0)


def test_deterministic():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    a = kernel_basis(ExactMatrix.from_dense(rows))
    b = kernel_basis(ExactMatrix.from_dense(rows))
    assert a == b
