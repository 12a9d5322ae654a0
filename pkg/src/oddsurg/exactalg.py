"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so
there is no overflow and no rounding anywhere on the invariant paths.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "NoSolution",
    "ShapeError",
    "NotSymmetricError",
    "smith_normal_form",
    "determinant",
    "signature",
    "solve_rational",
    "invariant_factors",
]


class ShapeError(ValueError):
    pass


class NotSymmetricError(ValueError):
    pass


class NoSolution(ValueError):
    """The right-hand side is not in the rational column space."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable dense integer matrix stored row-major as nested tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeError(f"entries do not form a {self.rows}x{self.cols} matrix")
        for r in self.entries:
            for x in r:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise TypeError(f"matrix entry {x!r} is not an integer")

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        entries = tuple(tuple(operator.index(x) for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls.of([[0] * cols for _ in range(rows)], cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def symmetric(self) -> bool:
        return self.is_square and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.of(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix.of(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries],
            cols=other.cols,
        )

    def apply(self, v: Sequence) -> list:
        """Matrix-vector product; works for int and Fraction vectors alike."""
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        return [sum((a * x for a, x in zip(r, v)), 0) for r in self.entries]

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j] == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]


def _as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix.of(M)


def _require_symmetric(S: IntMatrix) -> None:
    if not S.is_square:
        raise ShapeError(f"expected a square matrix, got {S.rows}x{S.cols}")
    if not S.symmetric:
        raise NotSymmetricError("matrix is not symmetric")


def smith_normal_form(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` in Smith normal form.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative
    entries ``d1 | d2 | ...`` and any zeros trailing.

    Pivots are taken as the smallest nonzero entry (in absolute value) of
    the remaining block, which keeps coefficient growth modest.
    """
    M = _as_matrix(M)
    m, n = M.shape
    A = M.tolist()
    U = IntMatrix.identity(m).tolist()
    V = IntMatrix.identity(n).tolist()

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])

        while True:
            dirty = False
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                # a remainder survived; it is strictly smaller than the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cands)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)

        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]

    return (
        IntMatrix.of(U, cols=m),
        IntMatrix.of(A, cols=n),
        IntMatrix.of(V, cols=n),
    )


def invariant_factors(M) -> list[int]:
    """Diagonal of the Smith normal form, padded with zeros to the row count."""
    M = _as_matrix(M)
    _, D, _ = smith_normal_form(M)
    d = D.diagonal()
    return d + [0] * (M.rows - len(d))


def determinant(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = _as_matrix(M)
    if not M.is_square:
        raise ShapeError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return 1
    A = M.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def signature(S) -> int:
    """Signature of a symmetric integer form, zeros in the kernel ignored.

    Congruence-diagonalizes over the rationals.  When no nonzero diagonal
    pivot remains but an off-diagonal entry ``s_ij`` does, adding row and
    column ``j`` to ``i`` makes the ``(i, i)`` entry ``2 s_ij`` and the
    elimination continues.
    """
    S = _as_matrix(S)
    _require_symmetric(S)
    n = S.rows
    A = [[Fraction(x) for x in r] for r in S.entries]
    pos = neg = 0
    for t in range(n):
        diag = [i for i in range(t, n) if A[i][i] != 0]
        if diag:
            piv = min(diag, key=lambda i: abs(A[i][i]))
        else:
            off = [
                (abs(A[i][j]), i, j)
                for i in range(t, n)
                for j in range(i + 1, n)
                if A[i][j] != 0
            ]
            if not off:
                break
            _, piv, j = min(off)
            A[piv] = [a + b for a, b in zip(A[piv], A[j])]
            for row in A:
                row[piv] += row[j]
        A[t], A[piv] = A[piv], A[t]
        for row in A:
            row[t], row[piv] = row[piv], row[t]
        p = A[t][t]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for k in range(t + 1, n):
            f = A[k][t] / p
            if f:
                A[k] = [a - f * b for a, b in zip(A[k], A[t])]
                for row in A:
                    row[k] -= f * row[t]
    return pos - neg


def solve_rational(S, c: Sequence[int]) -> list[Fraction]:
    """Solve ``S a = c`` exactly over the rationals.

    Raises :class:`NoSolution` when ``c`` is outside the column space.  For
    singular ``S`` the free variables are set to zero.
    """
    S = _as_matrix(S)
    if len(c) != S.rows:
        raise ShapeError(f"right-hand side has length {len(c)}, expected {S.rows}")
    m, n = S.shape
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(S.entries, c)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        lead = aug[r][col]
        aug[r] = [x / lead for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    if any(aug[i][n] != 0 for i in range(r, m)):
        raise NoSolution("right-hand side is not in the rational image of the matrix")
    a = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        a[col] = aug[i][n]
    return a
