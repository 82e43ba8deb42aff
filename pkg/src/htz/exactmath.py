"""Exact rational scalars, dense matrices, rank and nullspace.

Scalars are :class:`fractions.Fraction`; nothing in this module touches
floating point, so rank decisions cannot be flipped by rounding.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from .errors import EmptyMatrixError, PoleAtSample

Rational = Fraction
RatVector = tuple  # tuple[Fraction, ...]
RationalLike = Union[int, str, Fraction]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce an int, a ``"a/b"`` string or a Fraction; floats are refused."""
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, str):
        return Fraction(x.strip().replace("−", "-"))
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


class RatMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[RationalLike]]):
        data = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if not data or not data[0]:
            raise EmptyMatrixError("matrix must have at least one row and one column")
        width = len(data[0])
        for i, row in enumerate(data):
            if len(row) != width:
                raise ValueError(f"row {i} has length {len(row)}, expected {width}")
        self._rows = data
        self.nrows = len(data)
        self.ncols = width

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls([[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {ij} outside {self.shape} matrix")
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self._rows))

    def vstack(self, *others: "RatMatrix") -> "RatMatrix":
        rows = list(self._rows)
        for other in others:
            if other.ncols != self.ncols:
                raise ValueError("column counts differ")
            rows.extend(other.rows)
        return RatMatrix(rows)

    def with_entry(self, i: int, j: int, value: RationalLike) -> "RatMatrix":
        rows = [list(r) for r in self._rows]
        rows[i][j] = as_rational(value)
        return RatMatrix(rows)

    def matvec(self, v: Sequence[RationalLike]) -> RatVector:
        if len(v) != self.ncols:
            raise ValueError(f"vector length {len(v)} != {self.ncols} columns")
        v = [as_rational(x) for x in v]
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self._rows)

    def to_lists(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self._rows]

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in row) for row in self._rows)
        return f"RatMatrix([{body}])"


def rref(M: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are the first nonzero entry found scanning rows top-down, so the
    result depends only on the input.
    """
    a = [list(r) for r in M.rows]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        piv = next((i for i in range(r, M.nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][c]
        if lead != 1:
            a[r] = [x / lead for x in a[r]]
        for i in range(M.nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == M.nrows:
            break
    return a, pivots


def rank(M: RatMatrix) -> int:
    return len(rref(M)[1])


def nullspace(M: RatMatrix) -> list[RatVector]:
    """Basis of the right nullspace; each vector's first nonzero entry is 1."""
    a, pivots = rref(M)
    free = [c for c in range(M.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        lead = next(x for x in v if x != 0)
        basis.append(tuple(x / lead for x in v))
    return basis


def is_zero_vector(v: Iterable[Fraction]) -> bool:
    return all(x == 0 for x in v)


def verify_rational_identity(
    lhs: Callable[[int], Fraction],
    rhs: Callable[[int], Fraction],
    degree_bound: int,
    start: int = 0,
    max_poles: int = 1000,
) -> bool:
    """Decide ``lhs(k) == rhs(k)`` for all k by sampling.

    Both sides must be rational functions of k whose cross-multiplied
    difference is a polynomial of degree at most ``degree_bound``; agreement
    at ``degree_bound + 1`` distinct non-pole integers then forces identity.
    Samples run upward from ``start``; a callable signals a pole by raising
    ZeroDivisionError (PoleAtSample is a subclass) and that k is skipped.
    """
    if degree_bound < 0:
        raise ValueError("degree_bound must be nonnegative")
    needed = degree_bound + 1
    k = start
    skipped = 0
    while needed:
        try:
            equal = lhs(k) == rhs(k)
        except ZeroDivisionError:
            skipped += 1
            if skipped > max_poles:
                raise PoleAtSample(f"more than {max_poles} poles from k={start}")
            k += 1
            continue
        if not equal:
            return False
        needed -= 1
        k += 1
    return True
