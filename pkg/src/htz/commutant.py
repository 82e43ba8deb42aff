"""Commutants of ``T_{e^{ip theta} r^n}`` with ``n = (2m+1)p`` among degree-s symbols.

Two independent routes are provided:

* the closed-form block system (A; B; C) and the partial-fraction ray of the
  Gamma-ratio function F, both written from their printed formulas;
* :func:`generate_ansatz_equations`, which regenerates every commutation
  condition mechanically from :func:`htz.operators.apply`.

:func:`solve_commutant` uses the second route, certifies each candidate
against the exact truncated commutator, and reports the first route as
diagnostics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DuplicateExponents, InvalidDegrees, NegativeExponent, TruncationTooSmall
from .exactmath import (
    RationalLike,
    RatMatrix,
    RatVector,
    as_rational,
    format_rational,
    is_zero_vector,
    nullspace,
    rank,
)
from .operators import apply, commutator, is_zero_on_exact_region, nonzero_witness, operator_for
from .symbols import RadialSymbol, mellin_eval, monomial


class Verdict(str, enum.Enum):
    TRIVIAL = "trivial"
    FAMILY = "family"


class Prediction(str, enum.Enum):
    TRIVIAL = "trivial"
    EXISTS = "exists"


def _check_degrees(p: int, s: int, m: int) -> None:
    if not (isinstance(p, int) and isinstance(s, int) and isinstance(m, int)):
        raise InvalidDegrees("p, s, m must be integers")
    if not p > s >= 1:
        raise InvalidDegrees(f"need p > s >= 1, got p={p}, s={s}")
    if m < 0:
        raise InvalidDegrees(f"need m >= 0, got m={m}")


def symbol_degree_n(p: int, m: int) -> int:
    return (2 * m + 1) * p


# -- block system (S) ----------------------------------------------------------

@dataclass(frozen=True)
class CommutantSystem:
    p: int
    s: int
    m: int
    n: int
    A: RatMatrix
    B: RatMatrix
    C: RatMatrix

    @property
    def AB(self) -> RatMatrix:
        return self.A.vstack(self.B)

    @property
    def S(self) -> RatMatrix:
        return self.A.vstack(self.B, self.C)

    def to_json(self) -> dict:
        return {
            "p": self.p, "s": self.s, "m": self.m, "n": self.n,
            "A": self.A.to_lists(), "B": self.B.to_lists(), "C": self.C.to_lists(),
        }


def block_a(p: int, s: int, n: int, k: int, j: int) -> Fraction:
    return (Fraction(s - k + 1, (p + 2 * s - 2 * k + n + 2) * (s + j * p + 1))
            - Fraction(p - k + 1, (p + n + 2) * (p + s - k + j * p + 1)))


def block_b(p: int, s: int, k: int, j: int) -> Fraction:
    return Fraction(p - k + 1, (j + 1) * p + s - k + 1) - Fraction(k - s + 1, k + j * p + 1)


def block_c(p: int, s: int, n: int, k: int, j: int) -> Fraction:
    return (Fraction(k - p + 1, (2 * k - p + n + 2) * (s + j * p + 1))
            - Fraction(k - s + 1, (p + n + 2) * (k + j * p + 1)))


def build_blocks(p: int, s: int, m: int) -> CommutantSystem:
    """Blocks A (rows k = 0..s-1), B (k = s..p-1), C (k = p..p+s-1); columns j = 0..m."""
    _check_degrees(p, s, m)
    n = symbol_degree_n(p, m)
    cols = range(m + 1)
    A = RatMatrix([[block_a(p, s, n, k, j) for j in cols] for k in range(s)])
    B = RatMatrix([[block_b(p, s, k, j) for j in cols] for k in range(s, p)])
    C = RatMatrix([[block_c(p, s, n, k, j) for j in cols] for k in range(p, p + s)])
    return CommutantSystem(p, s, m, n, A, B, C)


def block_identity_failures(sys: CommutantSystem) -> list[str]:
    """Violations of ``a[s-l, j] == c[p+l, j]`` and ``c[p, j] == -b[s, j]/(p+n+2)``.

    Row indices in the messages use the block k labels, not matrix rows.
    """
    p, s, m, n = sys.p, sys.s, sys.m, sys.n
    out = []
    for j in range(m + 1):
        for l in range(1, s):
            a, c = sys.A[s - l, j], sys.C[l, j]
            if a != c:
                out.append(f"a[{s - l},{j}]={a} != c[{p + l},{j}]={c}")
        c, b = sys.C[0, j], sys.B[0, j]
        if c != -b / (p + n + 2):
            out.append(f"c[{p},{j}]={c} != -b[{s},{j}]/{p + n + 2}={-b / (p + n + 2)}")
    return out


def check_block_identities(sys: CommutantSystem) -> bool:
    return not block_identity_failures(sys)


# -- partial-fraction ray --------------------------------------------------------

def gamma_ratio(p: int, s: int, m: int, z: RationalLike) -> Fraction:
    """F(z) in its finite-product form (Gamma functions cancelled).

    F(z) = prod_{i=1..m} (z/2p + i) / prod_{i=0..m} (z/2p + s/p + i).
    """
    w = as_rational(z) / (2 * p)
    num = Fraction(1)
    for i in range(1, m + 1):
        num *= w + i
    den = Fraction(1)
    for i in range(m + 1):
        den *= w + Fraction(s, p) + i
    return num / den


@dataclass(frozen=True)
class PartialFractionRay:
    p: int
    s: int
    m: int
    poles: tuple[Fraction, ...]
    weights: tuple[Fraction, ...]

    def __call__(self, z: RationalLike) -> Fraction:
        z = as_rational(z)
        return sum((a / (z - pole) for a, pole in zip(self.weights, self.poles)), Fraction(0))

    def symbol(self) -> RadialSymbol:
        """psi = sum_j a_j r^{s+2jp}: the radial part whose ``r^s psi`` has Mellin transform F."""
        return RadialSymbol(tuple((a, self.s + 2 * j * self.p) for j, a in enumerate(self.weights)))

    def to_json(self) -> dict:
        return {
            "p": self.p, "s": self.s, "m": self.m,
            "poles": [format_rational(x) for x in self.poles],
            "weights": [format_rational(x) for x in self.weights],
        }


def partial_fraction_ray(p: int, s: int, m: int) -> PartialFractionRay:
    _check_degrees(p, s, m)
    poles = tuple(Fraction(-(2 * s + 2 * j * p)) for j in range(m + 1))
    assert len(set(poles)) == len(poles), "poles must be simple"
    # F = 2p * prod_{i=1..m}(z + 2pi) / prod_{i=0..m}(z + 2s + 2pi); residues at simple poles.
    weights = []
    for j, zj in enumerate(poles):
        w = Fraction(2 * p)
        for i in range(1, m + 1):
            w *= zj + 2 * p * i
        for i, zi in enumerate(poles):
            if i != j:
                w /= zj - zi
        weights.append(w)
    ray = PartialFractionRay(p, s, m, poles, tuple(weights))
    for z in range(1, m + 3):
        if ray(z) != gamma_ratio(p, s, m, z):
            raise ArithmeticError(f"partial fractions disagree with F at z={z}")
    return ray


# -- ansatz equations ----------------------------------------------------------

class AnsatzEquations(RatMatrix):
    """RatMatrix of commutation conditions, with provenance per row.

    ``row_labels[i]`` is the basis index q whose image under the commutator
    row i encodes; ``degree_bound`` is the polynomial degree used to cut the
    infinite interior families down to finitely many samples.
    """

    __slots__ = ("row_labels", "degree_bound", "exponents")

    def __init__(self, rows, row_labels, degree_bound, exponents):
        super().__init__(rows)
        self.row_labels = tuple(row_labels)
        self.degree_bound = degree_bound
        self.exponents = tuple(exponents)


def _validate_exponents(exponents: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    exps = tuple(as_rational(e) for e in exponents)
    if not exps:
        raise ValueError("exponent list must be nonempty")
    if any(e < 0 for e in exps):
        raise NegativeExponent(f"exponents must be >= 0: {[str(e) for e in exps]}")
    if len(set(exps)) != len(exps):
        raise DuplicateExponents(f"duplicate exponents: {[str(e) for e in exps]}")
    return exps


def commutation_row(
    p: int, s: int, phi: RadialSymbol, exponents: Sequence[Fraction], q: int
) -> list[Fraction]:
    """Coefficients (one per exponent) of ``[T_phi, T_psi] e_q`` at ``e_{q+p+s}``."""
    _, phi_after = apply(p, phi, q + s)
    _, phi_first = apply(p, phi, q)
    row = []
    for b in exponents:
        r_b = monomial(b)
        _, psi_first = apply(s, r_b, q)
        _, psi_after = apply(s, r_b, q + p)
        row.append(phi_after * psi_first - psi_after * phi_first)
    return row


def interior_degree_bound(p: int, s: int, phi: RadialSymbol, exponents: Sequence[Fraction]) -> int:
    """Number of distinct linear factors (2k + c) in the denominators of an interior row.

    For q = k >= 0 every Mellin argument is 2k + const; cleared of these
    denominators the row combination is a polynomial in k of at most this
    degree.
    """
    consts = set()
    for e in phi.exponents:
        consts.add(p + 2 + e)
        consts.add(2 * s + p + 2 + e)
    for b in exponents:
        consts.add(s + 2 + b)
        consts.add(2 * p + s + 2 + b)
    return len(consts)


def generate_ansatz_equations(
    p: int, s: int, exponents: Sequence[RationalLike], phi: RadialSymbol
) -> AnsatzEquations:
    """All conditions ``[T_{e^{ip}phi}, T_{e^{is}psi}] = 0`` for ``psi = sum c_j r^{b_j}``.

    Rows cover the boundary indices -(p+s) < q < 0 and, for each of the two
    interior families q = k and q = -(p+s)-k (k >= 0), enough consecutive k
    to decide the rational identity.  The nullspace is the commutant within
    the ansatz.
    """
    if not (isinstance(p, int) and isinstance(s, int)) or p < 1 or s < 1:
        raise InvalidDegrees(f"need positive integer degrees, got p={p}, s={s}")
    exps = _validate_exponents(exponents)
    bound = max(len(exps) + 3, interior_degree_bound(p, s, phi, exps))
    qs = list(range(-(p + s) + 1, 0))
    qs += list(range(0, bound + 1))
    qs += [-(p + s) - k for k in range(0, bound + 1)]
    rows = [commutation_row(p, s, phi, exps, q) for q in qs]
    return AnsatzEquations(rows, qs, bound, exps)


# -- solver ------------------------------------------------------------------------

@dataclass(frozen=True)
class CommutantResult:
    p: int
    s: int
    m: int
    n: int
    verdict: Verdict
    coefficients: tuple[RatVector, ...]
    symbols: tuple[RadialSymbol, ...]
    rank_AB: int
    rank_S: int
    rank_ansatz: int
    ray_in_nullspace: bool
    ray_residual: tuple[Fraction, ...] = ()
    uncertified: tuple[RatVector, ...] = field(default=())

    @property
    def dimension(self) -> int:
        return len(self.coefficients)

    def to_json(self) -> dict:
        return {
            "p": self.p, "s": self.s, "m": self.m, "n": self.n,
            "verdict": self.verdict.value,
            "dimension": self.dimension,
            "coefficients": [[format_rational(x) for x in v] for v in self.coefficients],
            "rankAB": self.rank_AB,
            "ray_in_nullspace": self.ray_in_nullspace,
        }


def default_exponents(p: int, s: int, m: int) -> list[int]:
    return [s + 2 * j * p for j in range(m + 1)]


def certify(p: int, phi: RadialSymbol, s: int, psi: RadialSymbol, K: int) -> bool:
    """Exact truncated commutator vanishes on its exact region."""
    return is_zero_on_exact_region(
        commutator(operator_for(p, phi, K), operator_for(s, psi, K))
    )


def commutator_witness(p: int, phi: RadialSymbol, s: int, psi: RadialSymbol, K: int):
    return nonzero_witness(commutator(operator_for(p, phi, K), operator_for(s, psi, K)))


def solve_commutant(
    p: int,
    s: int,
    m: int,
    K: int = 40,
    exponents: Optional[Sequence[RationalLike]] = None,
) -> CommutantResult:
    """Degree-s radial parts psi commuting with ``T_{e^{ip theta} r^n}``, n = (2m+1)p."""
    _check_degrees(p, s, m)
    if K < 2 * (p + s) + 4:
        raise TruncationTooSmall(f"K={K} < 2(p+s)+4={2 * (p + s) + 4}")
    n = symbol_degree_n(p, m)
    phi = monomial(n)
    exps = default_exponents(p, s, m) if exponents is None else exponents
    eqs = generate_ansatz_equations(p, s, exps, phi)
    basis = nullspace(eqs)

    certified, rejected, symbols = [], [], []
    for v in basis:
        psi = RadialSymbol(tuple(zip(v, eqs.exponents)))
        if certify(p, phi, s, psi, K):
            certified.append(v)
            symbols.append(psi)
        else:
            rejected.append(v)

    system = build_blocks(p, s, m)
    ray = partial_fraction_ray(p, s, m)
    residual = system.S.matvec(ray.weights)
    return CommutantResult(
        p=p, s=s, m=m, n=n,
        verdict=Verdict.FAMILY if certified else Verdict.TRIVIAL,
        coefficients=tuple(certified),
        symbols=tuple(symbols),
        rank_AB=rank(system.AB),
        rank_S=rank(system.S),
        rank_ansatz=rank(eqs),
        ray_in_nullspace=is_zero_vector(residual),
        ray_residual=residual,
        uncertified=tuple(rejected),
    )


def classify_th7(p: int, s: int, m: int) -> Prediction:
    """Published verdict from the inequality alone: trivial iff p >= m+1."""
    _check_degrees(p, s, m)
    return Prediction.TRIVIAL if p >= m + 1 else Prediction.EXISTS


def functional_equation_holds(p: int, s: int, m: int, psi: RadialSymbol) -> bool:
    """Check the period-2p ratio identity for ``G = Mellin(r^s psi)``.

    G(z+2p)(z+p+2s+n)(z+2p) == G(z)(z+2s)(z+p+n), tested on z = 2k+2 as a
    rational identity in k.
    """
    from .exactmath import verify_rational_identity

    n = symbol_degree_n(p, m)
    g = psi.shift(s)

    def lhs(k):
        z = 2 * k + 2
        return mellin_eval(g, z + 2 * p) * (z + p + 2 * s + n) * (z + 2 * p)

    def rhs(k):
        z = 2 * k + 2
        return mellin_eval(g, z) * (z + 2 * s) * (z + p + n)

    # cross-multiplied: two quadratics times G, whose denominators have
    # at most 2*len(terms) distinct linear factors
    return verify_rational_identity(lhs, rhs, 2 * len(g.terms) + 2)
