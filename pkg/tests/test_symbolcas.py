"""Symbol calculus: fiber bases, connection matrices, graded symbol identities."""

import math

import pytest
import sympy as sp
from sympy import Matrix, Symbol, zeros

from dtnzeta.symbolcas import (
    JetResolutionError,
    canonical_zero_form,
    chart,
    connection_matrices,
    form_basis,
    parametrix_defect,
    projected_square_correction_defect,
    riccati_residual,
    star_compose,
)


class TestFormBasis:
    @pytest.mark.parametrize("m,q", [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)])
    def test_dimension(self, m, q):
        basis = form_basis(m, q)
        expected = math.comb(m - 1, q) + (math.comb(m - 1, q - 1) if q >= 1 else 0)
        assert len(basis) == expected

    def test_tangential_first(self):
        basis = form_basis(3, 1)
        assert basis == [(False, (1,)), (False, (2,)), (True, ())]


class TestConnectionMatrices:
    def setup_method(self):
        self.k1, self.k2 = sp.symbols("kappa1 kappa2")

    def test_dim3_degree1(self):
        k1, k2 = self.k1, self.k2
        om1, om2, omm = connection_matrices(3, 1, (k1, k2))
        assert om1 == Matrix([[0, 0, -k1], [0, 0, 0], [k1, 0, 0]])
        assert om2 == Matrix([[0, 0, 0], [0, 0, -k2], [0, k2, 0]])
        assert omm == sp.diag(k1, k2, 0)

    def test_dim3_degree2(self):
        k1, k2 = self.k1, self.k2
        om1, om2, omm = connection_matrices(3, 2, (k1, k2))
        assert om1 == Matrix([[0, 0, -k1], [0, 0, 0], [k1, 0, 0]])
        assert om2 == Matrix([[0, k2, 0], [-k2, 0, 0], [0, 0, 0]])
        assert omm == sp.diag(k1 + k2, k1, k2)

    def test_dim2_degree1(self):
        k = Symbol("kappa")
        om1, omm = connection_matrices(2, 1, (k,))
        assert om1 == Matrix([[0, -k], [k, 0]])
        assert omm == sp.diag(k, 0)

    @pytest.mark.parametrize("m,q", [(2, 1), (3, 1), (3, 2)])
    def test_structure(self, m, q):
        ks = sp.symbols(f"kappa1:{m}")
        oms = connection_matrices(m, q, ks)
        for a in range(m - 1):
            assert oms[a] == -oms[a].T, "tangential connection must be antisymmetric"
        assert oms[m - 1] == sp.diag(*[oms[m - 1][i, i] for i in range(oms[m - 1].rows)])

    def test_degree_zero_trivial(self):
        for om in connection_matrices(3, 0, self.setup_method() or (self.k1, self.k2)):
            assert om == zeros(1, 1)


class TestChartStructure:
    def test_principal_symbol(self):
        ch = chart(2, 0)
        # degree-1 homogeneity of the principal symbol
        t = Symbol("t", positive=True)
        sub = {ch.xis[0]: t * ch.xis[0], ch.lam: t ** 2 * ch.lam}
        assert sp.simplify(ch.w.subs(sub) - t * ch.w) == 0

    def test_canonical_zero_form_kills_sqrt_relation(self):
        ch = chart(2, 0)
        expr = ch.w ** 2 - sum(ch.gu[i, j] * ch.xis[i] * ch.xis[j]
                               for i in range(ch.d) for j in range(ch.d)) - ch.lam
        assert canonical_zero_form(ch, expr) == 0

    def test_jet_resolution_error(self):
        ch = chart(2, 0)
        too_deep = sp.diff(ch.gu[0, 0], ch.ym, 3)
        with pytest.raises(JetResolutionError):
            ch.eval_at_boundary_point(Matrix([[too_deep]]))


class TestStarCompose:
    def test_identity_is_neutral(self):
        ch = chart(2, 0)
        res = ch.resolvent()
        A = {0: ch.Id_proj}
        B = {-1: res["r1"]}
        C = star_compose(A, B, ch, orders=(-1,))
        assert (C[-1] - res["r1"]).applyfunc(
            lambda e: canonical_zero_form(ch, e)) == zeros(ch.n_proj, ch.n_proj)


class TestGradedIdentities:
    """Exact identities of the graded symbol solution (fast dimension-2 fibers;
    the full five-fiber parametrix check runs in the acceptance suite)."""

    @pytest.mark.parametrize("q", [0, 1])
    def test_quadratic_symbol_equation_dim2(self, q):
        ch = chart(2, q)
        res = riccati_residual(ch)
        for k in (2, 1, 0):
            assert res[k] == zeros(*res[k].shape), f"order {k} defect nonzero"

    @pytest.mark.parametrize("q", [0, 1])
    def test_projected_square_correction_dim2(self, q):
        ch = chart(2, q)
        assert projected_square_correction_defect(ch) == zeros(ch.n_proj, ch.n_proj)

    @pytest.mark.parametrize("q", [0, 1])
    def test_parametrix_dim2(self, q):
        ch = chart(2, q)
        defect = parametrix_defect(ch)
        for k, M in defect.items():
            assert M == zeros(*M.shape), f"order {k} defect nonzero"
