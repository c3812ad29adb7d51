"""Model spectrum streams: enumeration, structure tags, round-trips."""

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtnzeta.spectra import (
    DtnProductSpectrum,
    ExplicitSpectrum,
    PowerSpectrum,
    ProductSpectrum,
    circle_form_spectrum,
    disk_steklov_spectrum,
    product_dtn_spectrum,
    product_laplacian_spectra,
)


class TestPowerSpectrum:
    def test_circle(self):
        N = circle_form_spectrum(2 * math.pi, 0)
        eigs = list(N.eigenvalues(10.0))
        assert eigs == [(1.0, 2), (4.0, 2), (9.0, 2)]
        assert N.kernel_dim == 1

    def test_disk_steklov(self):
        d = disk_steklov_spectrum(2.0)
        assert list(d.eigenvalues(1.6)) == [(0.5, 2), (1.0, 2), (1.5, 2)]

    def test_degree_range(self):
        with pytest.raises(ValueError):
            circle_form_spectrum(1.0, 2)

    @given(st.floats(min_value=0.5, max_value=4.0),
           st.floats(min_value=10.0, max_value=200.0))
    def test_counting_monotone(self, L, cutoff):
        N = circle_form_spectrum(L, 0)
        assert N.counting(cutoff) <= N.counting(cutoff * 2)


class TestExplicitSpectrum:
    def test_json_round_trip(self):
        spec = ExplicitSpectrum(entries=((0.5, 2), (1.25, 1)), kernel_dim=1,
                                dim=1, degree=0, betti=1, label="toy")
        text = spec.to_json()
        again = ExplicitSpectrum.from_json(text)
        assert again == spec
        assert again.to_json() == text  # canonical serialization is stable

    def test_rejects_wrong_tag(self):
        with pytest.raises(ValueError):
            ExplicitSpectrum.from_json(json.dumps({"tag": "affine-zeta"}))


class TestProductSpectrum:
    def test_kernel_only_for_absolute(self):
        sabs, sdir = product_laplacian_spectra(1.0, 2 * math.pi, 0)
        assert sabs.kernel_dim == 1 and sdir.kernel_dim == 0

    def test_eigenvalue_lattice(self):
        a = 1.0
        sabs, _ = product_laplacian_spectra(a, 2 * math.pi, 0)
        eigs = sorted(lam for lam, _ in sabs.eigenvalues(20.0))
        step = (math.pi / a) ** 2
        lattice = sorted(
            n * n + step * k * k
            for n in range(0, 6) for k in range(0, 3)
            if 0 < n * n + step * k * k <= 20.0
            for _ in ((),)
        )
        for lam in eigs:
            assert any(abs(lam - mu) < 1e-12 for mu in lattice)

    def test_invalid_boundary_condition(self):
        base = circle_form_spectrum(2 * math.pi, 0)
        with pytest.raises(ValueError):
            ProductSpectrum(a=1.0, bc="mixed", base_q=base, base_qm1=None)


class TestDtnProductSpectrum:
    @given(st.floats(min_value=0.1, max_value=10.0),
           st.floats(min_value=0.05, max_value=50.0))
    def test_branch_pair_telescopes(self, a, lam):
        # (1 + 2/(e^x - 1)) * (1 - 2/(e^x + 1)) == 1 exactly
        dtn = DtnProductSpectrum(a=a, base_q=circle_form_spectrum(2 * math.pi, 0))
        up, dn = dtn.branch_pair(lam)
        assert abs(up * dn - lam) < 1e-12 * max(1.0, lam)

    def test_smallest_eigenvalues(self):
        dtn = product_dtn_spectrum(1.0, 2 * math.pi, 0)
        eigs = sorted(lam for lam, _ in dtn.eigenvalues(3.0))
        # lower branches of lambda = 1 and 4, then the zero-mode branch 2/a
        assert abs(eigs[0] - (1 - 2 / (math.e + 1))) < 1e-12
        assert abs(eigs[1] - 2 * (1 - 2 / (math.e ** 2 + 1))) < 1e-12
        assert abs(eigs[2] - 2.0) < 1e-12

    def test_weyl_slope(self):
        # both branches sit near sqrt(lambda_n) = n, each with multiplicity 2,
        # so the counting function grows with slope ~ 4
        dtn = product_dtn_spectrum(1.0, 2 * math.pi, 0)
        cutoff = 200.0
        count = sum(m for _, m in dtn.eigenvalues(cutoff))
        slope = count / cutoff
        assert abs(slope - 4.0) < 0.1
