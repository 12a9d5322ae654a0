from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from oddsurg.exactalg import (
    IntMatrix,
    NoSolution,
    NotSymmetricError,
    ShapeError,
    determinant,
    invariant_factors,
    signature,
    smith_normal_form,
    solve_rational,
)

from oracles import cofactor_det, descartes_signature, determinantal_invariant_factors


def random_matrix(rng, rows, cols, lo=-9, hi=9):
    return IntMatrix.of([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_symmetric(rng, n, lo=-9, hi=9):
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            A[i][j] = A[j][i] = rng.randint(lo, hi)
    return IntMatrix.of(A, cols=n)


def random_unimodular(rng, n, ops=12):
    P = IntMatrix.identity(n).tolist()
    for _ in range(ops):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            P[i] = [-x for x in P[i]]
            continue
        q = rng.randint(-2, 2)
        P[i] = [a + q * b for a, b in zip(P[i], P[j])]
    return IntMatrix.of(P, cols=n)


def check_snf(M):
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert abs(determinant(U)) == 1
    assert abs(determinant(V)) == 1
    assert D.is_diagonal()
    d = D.diagonal()
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)
    return d


@pytest.mark.parametrize(
    "rows, diag",
    [
        ([[0, 1], [1, -3]], [1, 1]),
        ([[0]], [0]),
        ([[6]], [6]),
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
        ([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]], [1, 10, 30, 0]),
    ],
)
def test_snf_examples(rows, diag):
    assert check_snf(IntMatrix.of(rows)) == diag


def test_snf_rectangular_and_empty():
    assert check_snf(IntMatrix.of([[2, 4, 6]])) == [2]
    assert check_snf(IntMatrix.of([[2], [4], [7]])) == [1]
    U, D, V = smith_normal_form(IntMatrix.of([]))
    assert D.shape == (0, 0)


def test_snf_random_identities():
    rng = random.Random(1234)
    for _ in range(200):
        check_snf(random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6)))


def test_snf_matches_determinantal_divisors():
    rng = random.Random(99)
    for _ in range(60):
        M = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
        d = check_snf(M)
        assert d == determinantal_invariant_factors(M.tolist())


def test_snf_low_rank_matrix():
    # rank one, so everything past the first factor is zero
    M = IntMatrix.of([[a * b for b in (2, -4, 6)] for a in (1, 3, -2)])
    assert check_snf(M) == [2, 0, 0]


def test_abs_det_of_snf_equals_abs_det():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 6)
        M = random_matrix(rng, n, n)
        _, D, _ = smith_normal_form(M)
        assert abs(determinant(D)) == abs(determinant(M))


@pytest.mark.parametrize("n", [-10, -3, -1, 0, 2, 17])
def test_determinant_of_linking_matrix(n):
    rows = [[0, 1], [1, n - 2]]
    assert cofactor_det(rows) == -1
    assert determinant(IntMatrix.of(rows)) == -1


def test_determinant_trivial():
    assert determinant(IntMatrix.identity(2)) == 1
    assert determinant(IntMatrix.of([[0]])) == 0
    assert determinant(IntMatrix.of([])) == 1


def test_determinant_matches_cofactor_oracle():
    rng = random.Random(5)
    for _ in range(150):
        n = rng.randint(1, 6)
        M = random_matrix(rng, n, n)
        assert determinant(M) == cofactor_det(M.tolist())


def test_determinant_rejects_non_square():
    with pytest.raises(ShapeError):
        determinant(IntMatrix.of([[1, 2]]))


@pytest.mark.parametrize(
    "rows, sig",
    [
        ([[0, 1], [1, -3]], 0),
        ([[1, 0], [0, 1]], 2),
        ([[2, 1], [1, 2]], 2),
        ([[0, 0], [0, 0]], 0),
        ([[0, 1], [1, 0]], 0),
        ([[-1]], -1),
        ([[0, 2, 0], [2, 0, 0], [0, 0, -5]], -1),
    ],
)
def test_signature_examples(rows, sig):
    assert signature(IntMatrix.of(rows)) == sig
    assert descartes_signature(rows) == sig


def test_signature_rejects_asymmetric():
    with pytest.raises(NotSymmetricError):
        signature(IntMatrix.of([[0, 1], [2, 0]]))


def test_signature_matches_eigenvalue_oracle():
    rng = random.Random(2024)
    for _ in range(150):
        S = random_symmetric(rng, rng.randint(1, 5))
        assert signature(S) == descartes_signature(S.tolist())


def test_signature_degenerate_blocks():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(2, 5)
        v = [rng.randint(-3, 3) for _ in range(n)]
        w = [rng.randint(-3, 3) for _ in range(n)]
        # rank <= 2 forms exercise the zero-pivot path
        S = IntMatrix.of([[v[i] * w[j] + v[j] * w[i] for j in range(n)] for i in range(n)])
        assert signature(S) == descartes_signature(S.tolist())


def test_signature_congruence_invariance():
    rng = random.Random(11)
    for _ in range(80):
        n = rng.randint(1, 5)
        S = random_symmetric(rng, n)
        P = random_unimodular(rng, n)
        assert signature(P @ S @ P.T) == signature(S)


@given(
    st.integers(1, 4).flatmap(
        lambda n: st.lists(st.integers(-9, 9), min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(
            lambda xs, n=n: (n, xs)
        )
    )
)
@settings(max_examples=100, deadline=None)
def test_signature_bounded_by_rank(data):
    n, xs = data
    A = [[0] * n for _ in range(n)]
    it = iter(xs)
    for i in range(n):
        for j in range(i, n):
            A[i][j] = A[j][i] = next(it)
    S = IntMatrix.of(A, cols=n)
    rank = sum(1 for d in invariant_factors(S) if d)
    sig = signature(S)
    assert abs(sig) <= rank and (rank - sig) % 2 == 0


def test_solve_examples():
    S = IntMatrix.of([[0, 1], [1, -3]])
    assert solve_rational(S, [2, -1]) == [5, 2]
    assert solve_rational(IntMatrix.identity(3), [4, -1, 7]) == [4, -1, 7]
    with pytest.raises(NoSolution):
        solve_rational(IntMatrix.of([[0]]), [2])


def test_solve_fractional_and_singular():
    assert solve_rational(IntMatrix.of([[2, 0], [0, 3]]), [1, 1]) == [Fraction(1, 2), Fraction(1, 3)]
    a = solve_rational(IntMatrix.of([[1, 1], [1, 1]]), [3, 3])
    assert a == [3, 0]
    with pytest.raises(NoSolution):
        solve_rational(IntMatrix.of([[1, 1], [1, 1]]), [3, 4])


def test_solve_round_trip_random():
    rng = random.Random(8)
    hits = 0
    for _ in range(200):
        n = rng.randint(1, 5)
        S = random_matrix(rng, n, n, -4, 4)
        c = [rng.randint(-9, 9) for _ in range(n)]
        try:
            a = solve_rational(S, c)
        except NoSolution:
            assert determinant(S) == 0
            continue
        hits += 1
        assert S.apply(a) == c
    assert hits > 100


def test_intmatrix_rejects_ragged_and_non_int():
    with pytest.raises(ShapeError):
        IntMatrix(2, 2, ((1, 2), (3,)))
    with pytest.raises(TypeError):
        IntMatrix.of([[1.5]])
    assert IntMatrix.of([[1, 2], [2, 5]]).symmetric
    assert not IntMatrix.of([[1, 2], [3, 5]]).symmetric
