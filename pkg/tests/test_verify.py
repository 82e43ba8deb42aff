import csv
import io
import json
from fractions import Fraction as F

import pytest

from htz.errors import UnknownSuite
from htz.symbols import ONE, monomial, parse_radial
from htz.verify import (
    GridReport,
    run_grid,
    verify_block_identities,
    verify_case_formulas,
    verify_monomial_small_degree,
    verify_product_theorem,
    verify_radial_commutation,
    verify_same_degree,
    verify_th7,
    verify_uniqueness,
)

r = monomial(1)


class TestProductTheorem:
    def test_nonconstant(self):
        rep = verify_product_theorem(1, r, [r, monomial(2), ONE + r], 40)
        assert rep.passed and rep.cases_run == 3
        assert all(not row["toeplitz"] for row in rep.rows)
        assert all("entry(row=" in row["witness"] for row in rep.rows)

    def test_constant(self):
        rep = verify_product_theorem(1, r, [ONE * 3], 40)
        assert rep.passed and rep.rows[0]["h"] == "3*r"

    def test_degree_two_identity_symbol(self):
        rep = verify_product_theorem(2, ONE, [r], 40)
        assert rep.passed and not rep.rows[0]["toeplitz"]

    def test_hypothesis_violation_is_skipped(self):
        phi = parse_radial("1 - 2*r^2")  # phi^(z) = (2 - z)/(z(z+2)) vanishes at z = 2
        rep = verify_product_theorem(0, phi, [r], 10)
        assert rep.rows[0].get("skipped") and "HypothesisViolated" in rep.rows[0]["witness"]


class TestRadialCommutation:
    def test_examples(self):
        assert verify_radial_commutation(1, r, [r], 40).rows[0]["commutes"] is False
        assert verify_radial_commutation(1, r, [ONE * 5], 40).rows[0]["commutes"] is True
        rep = verify_radial_commutation(-2, monomial(3), [r], 40)
        assert rep.passed and rep.rows[0]["commutes"] is False


class TestSameDegree:
    @pytest.mark.parametrize("p, phi, psi, commutes", [
        (1, "r", "2*r", True),
        (1, "r", "r^2", False),
        (3, "1 + r^2", "2 + 2*r^2", True),
    ])
    def test_examples(self, p, phi, psi, commutes):
        rep = verify_same_degree(p, parse_radial(phi), parse_radial(psi), 40)
        assert rep.passed
        assert rep.rows[0]["commutes"] is commutes
        assert rep.rows[0]["proportional"] is commutes


class TestMonomialSmallDegree:
    def test_12(self):
        row = verify_monomial_small_degree(1, 2, 1, 40).rows[0]
        assert row["ok"] and row["dimension"] == 0 and row["failing_k"] == 1

    def test_equal_degrees(self):
        rep = verify_monomial_small_degree(2, 2, 3, 40)
        assert rep.passed and rep.rows[0]["family"] == ["1", "0", "0", "0", "0"]

    def test_rational_exponent(self):
        rep = verify_monomial_small_degree(1, 3, F(1, 2), 40)
        assert rep.passed and rep.rows[0]["dimension"] == 0

    def test_rejects_p_above_s(self):
        with pytest.raises(ValueError):
            verify_monomial_small_degree(3, 2, 1)


class TestUniqueness:
    @pytest.mark.parametrize("p, s, n, exps", [
        (2, 1, 10, [1, 5, 9]),
        (2, 1, 6, [1, 5, 9, 13, 17, 21]),
        (3, 2, 21, [2, 8, 14, 20]),
    ])
    def test_dimension_at_most_one(self, p, s, n, exps):
        rep = verify_uniqueness(p, s, monomial(n), exps, 40)
        assert rep.passed and rep.rows[0]["dimension"] <= 1


class TestGrid:
    def test_case_formulas_small(self):
        assert verify_case_formulas(q_max=8, p_max=3, exp_max=2).passed

    def test_block_identities(self):
        rep = run_grid({"suite": "block-identities", "p_max": 5, "m_max": 3})
        assert rep.passed and rep.cases_run == 10 * 4

    def test_th7_report_carries_witnesses(self):
        rep = verify_th7(p_max=3, m_max=3)
        assert rep.cases_run == 12
        failing = {tuple(p.values()) for p, _ in rep.failures}
        assert failing == {(2, 1, 2), (2, 1, 3), (3, 1, 3), (3, 2, 3)}
        assert all("ray violates row" in w for _, w in rep.failures)

    def test_unknown(self):
        with pytest.raises(UnknownSuite):
            run_grid({"suite": "nope"})

    def test_deterministic_serialization(self):
        a = run_grid({"suite": "th6"}).to_json()
        b = run_grid({"suite": "th6"}).to_json()
        assert a == b
        assert "wall_time" not in json.loads(a)

    def test_csv_one_row_per_case(self):
        rep = run_grid({"suite": "product"})
        rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
        assert len(rows) == rep.cases_run
        assert {row["suite"] for row in rows} == {"product"}

    def test_failures_iff_not_passed(self):
        rep = GridReport("x", {})
        rep.add({"a": 1}, True)
        assert rep.passed
        rep.add({"a": 2}, False, "boom")
        assert not rep.passed and rep.failures == [({"a": 2}, "boom")]
