"""Truncated exact matrices of quasihomogeneous Toeplitz operators.

Basis of the harmonic Bergman space: a signed index q stands for ``z**q``
when q >= 0 and for ``conj(z)**(-q)`` when q < 0.  With ``e_q`` normalized as
above (not orthonormal) the operator with symbol ``exp(i p theta) phi(r)``
maps

    e_q  ->  2 (|q+p| + 1) * phi^(|q| + |q+p| + 2) * e_{q+p},

phi^ being the Mellin transform.  Every matrix is a sparse map
``(row, col) -> Fraction`` over the window |q| <= K, plus an ``exact_margin``
M: columns with |q| <= K - M coincide with the untruncated operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import EmptyExactRegion, MismatchedTruncation, TruncationTooSmall
from .exactmath import format_rational
from .symbols import MellinSample, QuasiSymbol, RadialSymbol, mellin_eval


def basis_label(q: int) -> str:
    if q == 0:
        return "1"
    return f"z^{q}" if q > 0 else f"zbar^{-q}"


def apply(p: int, phi: RadialSymbol, q: int) -> tuple[int, Fraction]:
    """Image of ``e_q`` under the degree-p Toeplitz operator with radial part phi."""
    t = q + p
    return t, 2 * (abs(t) + 1) * mellin_eval(phi, abs(q) + abs(t) + 2)


@dataclass(frozen=True)
class OperatorMatrix:
    K: int
    entries: dict = field(default_factory=dict)
    exact_margin: int = 0

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if abs(i) > self.K or abs(j) > self.K:
                raise IndexError(f"entry ({i}, {j}) outside window |q| <= {self.K}")
            if v != 0:
                clean[(i, j)] = Fraction(v)
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "exact_margin", min(self.exact_margin, self.K + 1))

    @property
    def indices(self) -> range:
        return range(-self.K, self.K + 1)

    @property
    def exact_bound(self) -> int:
        """Columns with |q| <= exact_bound are exact (negative: none)."""
        return self.K - self.exact_margin

    def exact_columns(self) -> range:
        b = self.exact_bound
        return range(-b, b + 1)

    def entry(self, row: int, col: int) -> Fraction:
        return self.entries.get((row, col), Fraction(0))

    def column(self, col: int) -> dict[int, Fraction]:
        return {i: v for (i, j), v in self.entries.items() if j == col}

    def _columns(self) -> dict[int, dict[int, Fraction]]:
        cols: dict[int, dict[int, Fraction]] = {}
        for (i, j), v in self.entries.items():
            cols.setdefault(j, {})[i] = v
        return cols

    def exact_entries(self) -> Iterator[tuple[int, int, Fraction]]:
        b = self.exact_bound
        for (i, j), v in sorted(self.entries.items()):
            if abs(j) <= b:
                yield i, j, v

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_same_K(self, other)
        out = dict(self.entries)
        for key, v in other.entries.items():
            out[key] = out.get(key, Fraction(0)) - v
        return OperatorMatrix(self.K, out, max(self.exact_margin, other.exact_margin))

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "margin": self.exact_margin,
            "entries": [
                {"row": i, "col": j, "value": format_rational(v)}
                for (i, j), v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "OperatorMatrix":
        entries = {(e["row"], e["col"]): Fraction(e["value"]) for e in data["entries"]}
        return cls(data["K"], entries, data["margin"])


def _check_same_K(a: OperatorMatrix, b: OperatorMatrix) -> None:
    if a.K != b.K:
        raise MismatchedTruncation(f"truncations differ: K={a.K} vs K={b.K}")


def build_matrix(sym: QuasiSymbol, K: int) -> OperatorMatrix:
    p = sym.degree
    if K < abs(p):
        raise TruncationTooSmall(f"K={K} is smaller than |degree|={abs(p)}")
    entries = {}
    for q in range(-K, K + 1):
        t, v = apply(p, sym.radial, q)
        if abs(t) <= K:
            entries[(t, q)] = v
    return OperatorMatrix(K, entries, abs(p))


def identity_matrix(K: int) -> OperatorMatrix:
    return OperatorMatrix(K, {(q, q): Fraction(1) for q in range(-K, K + 1)}, 0)


def compose(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    """Matrix of ``A @ B`` on the window; exact_margin adds."""
    _check_same_K(A, B)
    a_cols = A._columns()
    out: dict[tuple[int, int], Fraction] = {}
    for (k, j), b in B.entries.items():
        for i, a in a_cols.get(k, {}).items():
            out[(i, j)] = out.get((i, j), Fraction(0)) + a * b
    return OperatorMatrix(A.K, out, A.exact_margin + B.exact_margin)


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    return compose(A, B) - compose(B, A)


def _require_exact_region(M: OperatorMatrix) -> None:
    if M.exact_margin >= M.K:
        raise EmptyExactRegion(
            f"exact margin {M.exact_margin} >= K={M.K}; increase K to decide"
        )


def is_zero_on_exact_region(M: OperatorMatrix) -> bool:
    _require_exact_region(M)
    return next(M.exact_entries(), None) is None


def nonzero_witness(M: OperatorMatrix) -> Optional[tuple[int, int, Fraction]]:
    """First nonzero exact entry in (row, col) order, or None."""
    _require_exact_region(M)
    return next(M.exact_entries(), None)


@dataclass(frozen=True)
class ToeplitzTest:
    """Outcome of :func:`is_toeplitz`.

    ``witness`` is set exactly when the matrix is not Toeplitz: two entries
    (row, col, value) that cannot come from a single symbol.
    """

    is_toeplitz: bool
    degree: Optional[int] = None
    samples: tuple[MellinSample, ...] = ()
    matched: Optional[RadialSymbol] = None
    witness: Optional[tuple[tuple[int, int, Fraction], tuple[int, int, Fraction]]] = None
    reason: str = ""

    def __bool__(self):
        return self.is_toeplitz

    def to_json(self) -> dict:
        out: dict = {"toeplitz": self.is_toeplitz}
        if self.is_toeplitz:
            out["degree"] = self.degree
            out["samples"] = [s.to_json() for s in self.samples]
            out["matched"] = None if self.matched is None else self.matched.to_json()
        else:
            out["reason"] = self.reason
            out["witness"] = [
                {"row": i, "col": j, "value": format_rational(v)} for i, j, v in self.witness
            ]
        return out


def is_toeplitz(M: OperatorMatrix, candidates: Sequence[RadialSymbol] = ()) -> ToeplitzTest:
    """Decide whether the exact region of M is that of a quasihomogeneous Toeplitz operator.

    A degree-d Toeplitz operator with radial part h has, in column q, one
    entry at row q+d equal to ``2(|q+d|+1) h^(|q|+|q+d|+2)``.  Each column
    therefore yields a Mellin sample of h, and columns sharing an argument
    (e.g. q and -q-d) must yield the same value.  The recovered samples sit
    on an arithmetic progression, which pins h down; ``candidates`` are
    matched against them.
    """
    _require_exact_region(M)
    cols = list(M.exact_columns())
    nonzero = list(M.exact_entries())
    if not nonzero:
        d = 0
    else:
        first = nonzero[0]
        d = first[0] - first[1]
        for e in nonzero[1:]:
            if e[0] - e[1] != d:
                return ToeplitzTest(False, witness=(first, e), reason="more than one band")

    seen: dict[Fraction, tuple[int, int, Fraction]] = {}
    values: dict[Fraction, Fraction] = {}
    for q in cols:
        t = q + d
        if abs(t) > M.K:
            continue
        v = M.entry(t, q)
        arg = Fraction(abs(q) + abs(t) + 2)
        h = v / (2 * (abs(t) + 1))
        if arg in values and values[arg] != h:
            return ToeplitzTest(
                False,
                witness=(seen[arg], (t, q, v)),
                reason=f"entries imply two different Mellin values at z={arg}",
            )
        values.setdefault(arg, h)
        seen.setdefault(arg, (t, q, v))

    samples = tuple(MellinSample(z, values[z]) for z in sorted(values))
    matched = None
    for cand in candidates:
        if all(mellin_eval(cand, s.argument) == s.value for s in samples):
            matched = cand
            break
    return ToeplitzTest(True, degree=d, samples=samples, matched=matched)


def operator_for(degree: int, radial: RadialSymbol, K: int) -> OperatorMatrix:
    return build_matrix(QuasiSymbol(degree, radial), K)


def product_of(symbols: Iterable[QuasiSymbol], K: int) -> OperatorMatrix:
    """Matrix of ``T_{f1} T_{f2} ...`` in the given order."""
    mats = [build_matrix(s, K) for s in symbols]
    out = mats[0]
    for m in mats[1:]:
        out = compose(out, m)
    return out
