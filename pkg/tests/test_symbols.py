from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from htz.errors import DivergentMellin, NegativeExponent, SymbolSyntaxError
from htz.symbols import (
    ONE,
    ZERO,
    RadialSymbol,
    mellin_eval,
    mellin_quadrature,
    monomial,
    parse_radial,
)

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=9)
exps = st.fractions(min_value=0, max_value=20, max_denominator=5)


@st.composite
def symbols(draw, max_terms=4):
    n = draw(st.integers(0, max_terms))
    return RadialSymbol(tuple((draw(coeffs), draw(exps)) for _ in range(n)))


class TestParse:
    @pytest.mark.parametrize("text, terms", [
        ("1", ((1, 0),)),
        ("2*r^3 - 1/2*r^{1/2}", ((F(-1, 2), F(1, 2)), (2, 3))),
        ("r^2 - r^2", ()),
        ("-r + 3*r", ((2, 1),)),
        ("r^1/3", ((1, F(1, 3)),)),
        ("  5/2 −  r^{4} ", ((F(5, 2), 0), (-1, 4))),
        ("0", ()),
    ])
    def test_examples(self, text, terms):
        assert parse_radial(text) == RadialSymbol(terms)

    @pytest.mark.parametrize("text, pos", [
        ("2*", 2),
        ("x", 0),
        ("2 r", 2),
        ("r^", 2),
        ("r^{2", 4),
        ("", 0),
        ("1 +", 3),
    ])
    def test_syntax_errors_report_position(self, text, pos):
        with pytest.raises(SymbolSyntaxError) as info:
            parse_radial(text)
        assert info.value.position == pos

    def test_negative_exponent(self):
        with pytest.raises(NegativeExponent):
            parse_radial("r^-1")
        with pytest.raises(NegativeExponent):
            parse_radial("r^{-1/2}")

    @given(symbols())
    def test_render_round_trip(self, f):
        assert parse_radial(f.render()) == f

    @given(symbols())
    def test_json_round_trip(self, f):
        assert RadialSymbol.from_json(f.to_json()) == f


class TestRadialSymbol:
    def test_canonical_order_and_merge(self):
        f = RadialSymbol(((1, 3), (2, 1), (F(1, 2), 3)))
        assert f.terms == ((2, 1), (F(3, 2), 3))

    def test_ratio(self):
        r = monomial(1)
        assert (r * 2).ratio_to(r) == 2
        assert monomial(2).ratio_to(r) is None
        assert ZERO.ratio_to(r) == 0
        assert r.ratio_to(ZERO) is None
        assert (ONE + r).ratio_to((ONE + r) * 3) == F(1, 3)

    def test_constant(self):
        assert ONE.is_constant() and ZERO.is_constant()
        assert not monomial(1).is_constant()


class TestMellin:
    def test_constant(self):
        assert mellin_eval(ONE, 2) == F(1, 2)

    def test_monomial(self):
        assert mellin_eval(monomial(3), 5) == F(1, 8)

    def test_combination(self):
        assert mellin_eval(parse_radial("2*r - r^2"), 4) == F(7, 30)

    def test_divergent(self):
        with pytest.raises(DivergentMellin):
            mellin_eval(ONE, 0)
        with pytest.raises(DivergentMellin):
            mellin_eval(monomial(F(1, 2)), F(-1, 2))
        assert mellin_eval(monomial(1), F(-1, 2)) == 2

    @given(symbols(), symbols(), coeffs, coeffs, st.integers(1, 30))
    def test_linearity(self, f, g, a, b, z):
        assert mellin_eval(f * a + g * b, z) == a * mellin_eval(f, z) + b * mellin_eval(g, z)

    @given(symbols(), exps, st.integers(1, 30))
    def test_shift_rule(self, f, beta, z):
        assert mellin_eval(f.shift(beta), z) == mellin_eval(f, z + beta)


class TestQuadrature:
    @pytest.mark.parametrize("f, z, expected", [
        (ONE, 2.0, 0.5),
        (monomial(3), 5.0, 0.125),
        (parse_radial("2*r - r^2"), 4.0, 7 / 30),
    ])
    def test_examples(self, f, z, expected):
        assert mellin_quadrature(f, z, 1e-12) == pytest.approx(expected, abs=1e-12)

    def test_fractional_exponent(self):
        f = parse_radial("r^{1/2} - 3*r^{7/3}")
        assert mellin_quadrature(f, 2.0, 1e-12) == pytest.approx(float(mellin_eval(f, 2)), abs=1e-12)

    def test_divergent(self):
        with pytest.raises(DivergentMellin):
            mellin_quadrature(ONE, 0.0)

    @given(symbols(), st.integers(2, 12))
    def test_oracle_agreement(self, f, z):
        assert abs(float(mellin_eval(f, z)) - mellin_quadrature(f, float(z), 1e-12)) <= 1e-9
