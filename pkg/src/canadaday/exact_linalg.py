"""Exact rational linear algebra: dense matrices of arbitrary-precision
rationals with fraction-free determinants, minors, and the structured
lower-triangular matrix T with entries 1 + sgn(i - j).

All public interfaces are 1-based in row/column indices, so worked examples
from the literature transcribe directly.  Internal storage is 0-based
row-major.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

# Matrix entries are stdlib Fractions: always in lowest terms, positive
# denominator, exact arithmetic.
Rational = Fraction

__all__ = [
    "DimensionError",
    "ExactMatrix",
    "IndexSet",
    "Rational",
    "determinant",
    "determinant_cofactor",
    "k_subsets",
    "load_matrix",
    "matrix_from_json_dict",
    "matrix_to_json_dict",
    "minor",
    "random_matrix",
    "random_symmetric",
    "save_matrix",
    "submatrix",
    "t_matrix",
]


class DimensionError(ValueError):
    """Raised when matrix or index-set dimensions are incompatible."""


@dataclass(frozen=True, order=True)
class IndexSet:
    """A strictly increasing subset of {1, ..., n}, kept with its ambient size."""

    n: int
    elems: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elems", tuple(self.elems))
        if self.n < 0:
            raise ValueError(f"ambient size must be nonnegative, got {self.n}")
        prev = 0
        for e in self.elems:
            if e <= prev:
                raise ValueError(
                    f"elements must be strictly increasing and >= 1, got {self.elems}"
                )
            prev = e
        if self.elems and self.elems[-1] > self.n:
            raise ValueError(
                f"element {self.elems[-1]} exceeds ambient size {self.n}"
            )

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elems)

    def __contains__(self, value: object) -> bool:
        return value in self.elems


def k_subsets(n: int, k: int) -> Iterator[IndexSet]:
    """Yield all k-element subsets of {1, ..., n} in lexicographic order."""
    for combo in combinations(range(1, n + 1), k):
        yield IndexSet(n, combo)


@dataclass(frozen=True)
class ExactMatrix:
    """Dense matrix of Fractions, stored row-major."""

    rows: int
    cols: int
    entries: tuple[Rational, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(Fraction(v) for v in self.entries))
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> ExactMatrix:
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise DimensionError("ragged rows")
        return ExactMatrix(r, c, tuple(Fraction(v) for row in rows for v in row))

    @staticmethod
    def identity(n: int) -> ExactMatrix:
        return ExactMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    def entry(self, i: int, j: int) -> Rational:
        """Entry at row i, column j (both 1-based)."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexError(f"entry ({i}, {j}) out of range for {self.rows}x{self.cols}")
        return self.entries[(i - 1) * self.cols + (j - 1)]

    def to_rows(self) -> list[list[Rational]]:
        c = self.cols
        return [list(self.entries[r * c : (r + 1) * c]) for r in range(self.rows)]

    def transpose(self) -> ExactMatrix:
        return ExactMatrix.from_rows(
            [[self.entries[r * self.cols + c] for r in range(self.rows)] for c in range(self.cols)]
        )

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and self == self.transpose()

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise DimensionError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        a, b = self.to_rows(), other.to_rows()
        return ExactMatrix.from_rows(
            [
                [sum(a[i][t] * b[t][j] for t in range(self.cols)) for j in range(other.cols)]
                for i in range(self.rows)
            ]
        )


def t_matrix(n: int) -> ExactMatrix:
    """The n x n matrix with entries 1 + sgn(i - j): 0 above the diagonal,
    1 on it, 2 below."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return ExactMatrix.from_rows(
        [[0 if i < j else (1 if i == j else 2) for j in range(n)] for i in range(n)]
    )


def determinant(m: ExactMatrix) -> Rational:
    """Exact determinant by fraction-free (Bareiss) elimination.

    For integer matrices every intermediate value stays an integer; over
    rationals the exact divisions are still exact.  The 0x0 determinant is 1.
    """
    if not m.is_square():
        raise DimensionError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = m.to_rows()
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i = a[i]
            row_k = a[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) / prev
            row_i[k] = Fraction(0)
        prev = pivot
    return sign * a[n - 1][n - 1]


def determinant_cofactor(m: ExactMatrix) -> Rational:
    """Determinant by cofactor expansion along the first row.

    Independent oracle for `determinant`; exponential, intended for n <= 4.
    """
    if not m.is_square():
        raise DimensionError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")

    def expand(rows: list[list[Rational]]) -> Rational:
        if not rows:
            return Fraction(1)
        if len(rows) == 1:
            return rows[0][0]
        total = Fraction(0)
        head, rest = rows[0], rows[1:]
        for j, v in enumerate(head):
            if v == 0:
                continue
            sub = [r[:j] + r[j + 1 :] for r in rest]
            term = v * expand(sub)
            total += term if j % 2 == 0 else -term
        return total

    return expand(m.to_rows())


def submatrix(m: ExactMatrix, rows: IndexSet, cols: IndexSet) -> ExactMatrix:
    """Order-preserving slice of m by 1-based row and column index sets."""
    if rows.elems and rows.elems[-1] > m.rows:
        raise IndexError(f"row index {rows.elems[-1]} out of range for {m.rows} rows")
    if cols.elems and cols.elems[-1] > m.cols:
        raise IndexError(f"column index {cols.elems[-1]} out of range for {m.cols} columns")
    return ExactMatrix.from_rows([[m.entry(i, j) for j in cols] for i in rows])


def minor(m: ExactMatrix, rows: IndexSet, cols: IndexSet) -> Rational:
    """The minor of m with the given row and column sets (equal cardinality)."""
    if len(rows) != len(cols):
        raise DimensionError(
            f"minor needs equally many rows and columns, got {len(rows)} and {len(cols)}"
        )
    return determinant(submatrix(m, rows, cols))


def random_symmetric(n: int, seed: int, entry_bound: int) -> ExactMatrix:
    """Seeded random symmetric n x n matrix with integer entries in
    [-entry_bound, entry_bound]. Same arguments always give the same matrix."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if entry_bound < 0:
        raise ValueError(f"entry_bound must be >= 0, got {entry_bound}")
    rng = random.Random(seed)
    vals = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = rng.randint(-entry_bound, entry_bound)
            vals[i][j] = v
            vals[j][i] = v
    return ExactMatrix.from_rows(vals)


def random_matrix(n: int, seed: int, entry_bound: int) -> ExactMatrix:
    """Seeded random n x n integer matrix, no symmetry imposed."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if entry_bound < 0:
        raise ValueError(f"entry_bound must be >= 0, got {entry_bound}")
    rng = random.Random(seed)
    return ExactMatrix.from_rows(
        [[rng.randint(-entry_bound, entry_bound) for _ in range(n)] for _ in range(n)]
    )


def matrix_to_json_dict(m: ExactMatrix) -> dict:
    """Serialize to {"rows", "cols", "entries"} with entries as exact strings:
    integers as plain strings, non-integers as "p/q" in lowest terms."""
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[str(v) for v in row] for row in m.to_rows()],
    }


def matrix_from_json_dict(d: dict) -> ExactMatrix:
    rows, cols = d["rows"], d["cols"]
    entries = d["entries"]
    if len(entries) != rows or any(len(row) != cols for row in entries):
        raise DimensionError("entry grid does not match declared rows/cols")
    return ExactMatrix.from_rows([[Fraction(v) for v in row] for row in entries])


def save_matrix(m: ExactMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json_dict(m), fh, indent=2)
        fh.write("\n")


def load_matrix(path) -> ExactMatrix:
    with open(path) as fh:
        return matrix_from_json_dict(json.load(fh))
