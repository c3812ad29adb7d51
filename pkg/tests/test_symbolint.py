"""Fiber integration: closed-form densities and the eleven-piece trace table."""

import pytest
import sympy as sp

from dtnzeta.symbolcas import chart
from dtnzeta.symbolint import (
    TERM_LABELS,
    a0_density,
    a0_reference,
    a1_coefficient,
    interior_coefficient_difference,
    pi0_density,
    q_density,
    q_density_reference,
    reference_table_sum,
    reference_term_table,
    term_table,
)


def _exact_zero(expr) -> bool:
    diff = sp.expand(expr)
    return diff == 0 or sp.simplify(diff) == 0


class TestDim2Densities:
    def test_a0_density_q0(self):
        ch = chart(2, 0)
        assert _exact_zero(a0_density(2, 0) - ch.kappas[0] / (2 * sp.pi))

    def test_a0_density_q1(self):
        ch = chart(2, 1)
        target = (1 - 2 * sp.log(2)) * ch.kappas[0] / (2 * sp.pi)
        assert _exact_zero(a0_density(2, 1) - target)

    def test_a0_density_combined_form(self):
        # a0(y) = kappa/(2 pi) - (ln 2 / pi) Tr omega_m~ in both degrees
        for q in (0, 1):
            ch = chart(2, q)
            tr = ch.project(ch.conn_values[1]).trace()
            target = ch.kappas[0] / (2 * sp.pi) - sp.log(2) / sp.pi * tr
            assert _exact_zero(a0_density(2, q) - target)

    def test_q_density(self):
        assert q_density(2, 0) == 0
        ch = chart(2, 1)
        assert _exact_zero(q_density(2, 1) + ch.kappas[0] / (2 * sp.pi))


class TestDim3Coefficients:
    @pytest.mark.parametrize("q", [0, 1, 2])
    def test_pi0_matches_fiber_dimension(self, q):
        from math import comb
        assert _exact_zero(pi0_density(q) - sp.Integer(comb(2, q)) / (8 * sp.pi))

    @pytest.mark.parametrize("q", [0, 1, 2])
    def test_subleading_coefficient_vanishes(self, q):
        assert a1_coefficient(q) == 0

    @pytest.mark.parametrize("q", [0, 1, 2])
    def test_interior_difference(self, q):
        from math import comb
        assert interior_coefficient_difference(q) == sp.Integer(comb(2, q)) / (8 * sp.pi)


class TestDim3Table:
    """The eleven-piece trace table (one degree here; all degrees run in the
    acceptance suite)."""

    def test_terms_match_reference_q0(self):
        computed = term_table(0)
        expected = reference_term_table(0)
        for label in TERM_LABELS:
            assert _exact_zero(computed[label] - expected[label]), label

    def test_sum_matches_reference_q0(self):
        total = sum(term_table(0)[label] for label in TERM_LABELS)
        assert _exact_zero(total - reference_table_sum(0))

    def test_a0_density_matches_reference_q0(self):
        assert _exact_zero(a0_density(3, 0) - a0_reference(3, 0))

    def test_q_density_matches_reference_q0(self):
        assert _exact_zero(q_density(3, 0) - q_density_reference(3, 0))


class TestScalingDegrees:
    """The densities are exact polynomials of scaling weight 2(m-1)/2: under
    kappa -> kappa/c, tau -> tau/c^2 they scale by c^{-(m-1)}."""

    @pytest.mark.parametrize("m,q", [(2, 0), (2, 1), (3, 0)])
    def test_density_weight(self, m, q):
        ch = chart(m, q)
        c = sp.Symbol("c", positive=True)
        dens = a0_density(m, q)
        sub = {k: k / c for k in ch.kappas}
        sub.update({ch.tauM: ch.tauM / c ** 2, ch.tauY: ch.tauY / c ** 2})
        assert _exact_zero(dens.subs(sub) - dens / c ** (m - 1))
