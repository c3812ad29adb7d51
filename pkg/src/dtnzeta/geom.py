"""Quadrature geometries and curvature-integral constants.

A :class:`GeometrySpec` carries fixed-weight boundary quadrature nodes with
pointwise principal curvatures and scalar curvatures, plus the interior volume
and boundary volume.  On top of it this module evaluates:

* the determinant-gluing constant ``a0`` (integral of the derived boundary
  density),
* the zeta-at-zero constant (integral of twice the derived half-density),
* the Gram determinant of restricted harmonic forms,
* the assembled determinant-gluing identity residual,
* the conformal-variation identity in dimension 2.

Accuracy is the node supplier's contract: the integrands are fixed polynomials
in the supplied pointwise fields, so fixed-weight quadrature is exact up to
the sampling of the fields themselves.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import sympy as sp

from .symbolcas import chart
from .symbolint import a0_density, q_density

__all__ = [
    "GeometrySpec",
    "HarmonicBasis",
    "BoundaryNode",
    "mean_curvatures",
    "a0_constant",
    "zeta0_constant",
    "det_s",
    "assemble_gluing_identity",
    "conformal_variation_check",
    "unit_disk",
    "unit_ball",
    "cylinder_boundary",
    "rescale",
    "constant_harmonic_basis",
]


@dataclass(frozen=True)
class BoundaryNode:
    """One boundary quadrature node: weight, curvatures, scalar curvatures."""

    w: float
    kappa: tuple[float, ...]
    tau_M: float = 0.0
    tau_Y: float = 0.0


@dataclass(frozen=True)
class GeometrySpec:
    """Boundary quadrature description of a compact manifold with boundary.

    Parameters
    ----------
    m : int
        Interior dimension, 2 or 3.
    nodes : tuple of BoundaryNode
        Fixed-weight quadrature nodes; weights sum to ``ellY``.
    V : float
        Interior volume.
    ellY : float
        Boundary volume (length for ``m = 2``, area for ``m = 3``).
    label : str
        Human-readable identifier.
    """

    m: int
    nodes: tuple[BoundaryNode, ...]
    V: float
    ellY: float
    label: str = ""

    def __post_init__(self):
        if self.m not in (2, 3):
            raise ValueError("only interior dimensions 2 and 3 are supported")
        if self.V <= 0 or self.ellY <= 0:
            raise ValueError("volumes must be positive")
        wsum = sum(n.w for n in self.nodes)
        if not self.nodes or any(n.w <= 0 for n in self.nodes):
            raise ValueError("quadrature weights must be positive")
        if abs(wsum - self.ellY) > 1e-12 * max(1.0, self.ellY):
            raise ValueError(
                f"weights sum to {wsum!r}, expected boundary volume {self.ellY!r}")
        for n in self.nodes:
            if len(n.kappa) != self.m - 1:
                raise ValueError("each node needs m-1 principal curvatures")
            if self.m == 2 and n.tau_Y != 0.0:
                raise ValueError("a 1-dimensional boundary has tau_Y = 0")

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        payload = {
            "m": self.m,
            "nodes": [
                {"w": n.w, "kappa": list(n.kappa), "tau_M": n.tau_M, "tau_Y": n.tau_Y}
                for n in self.nodes
            ],
            "V": self.V,
            "ellY": self.ellY,
            "label": self.label,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "GeometrySpec":
        payload = json.loads(text)
        return GeometrySpec(
            m=payload["m"],
            nodes=tuple(
                BoundaryNode(w=n["w"], kappa=tuple(n["kappa"]),
                             tau_M=n.get("tau_M", 0.0), tau_Y=n.get("tau_Y", 0.0))
                for n in payload["nodes"]
            ),
            V=payload["V"],
            ellY=payload["ellY"],
            label=payload.get("label", ""),
        )


@dataclass(frozen=True)
class HarmonicBasis:
    """Boundary traces of an orthonormal basis of harmonic forms.

    ``traces[i][j]`` holds the components of the i-th basis form at the j-th
    quadrature node (scalars for degree 0).
    """

    traces: tuple[tuple[tuple[float, ...], ...], ...]

    def __post_init__(self):
        if not self.traces:
            raise ValueError("need at least one harmonic form")
        ncomp = {len(c) for row in self.traces for c in row}
        if len(ncomp) != 1:
            raise ValueError("trace arrays must share a component count")

    @property
    def count(self) -> int:
        return len(self.traces)


# ---------------------------------------------------------------------------
# Pointwise curvature functions
# ---------------------------------------------------------------------------

def mean_curvatures(kappas: tuple[float, ...], m: int) -> tuple[float, float | None]:
    """Normalized first and second mean curvatures from principal curvatures.

    ``H1`` is the mean of the principal curvatures; ``H2`` (only defined for
    ``m >= 3``) the normalized second elementary symmetric function.
    """
    if len(kappas) != m - 1:
        raise ValueError("expected m-1 principal curvatures")
    H1 = sum(kappas) / (m - 1)
    if m == 2:
        return H1, None
    pairs = sum(kappas[i] * kappas[j]
                for i in range(m - 1) for j in range(i + 1, m - 1))
    H2 = 2.0 * pairs / ((m - 1) * (m - 2))
    return H1, H2


@lru_cache(maxsize=None)
def _density_fn(m: int, q: int, kind: str):
    """Lambdified boundary density: ``a0`` density or zeta-at-zero density."""
    ch = chart(m, q)
    expr = a0_density(m, q) if kind == "a0" else 2 * q_density(m, q)
    args = list(ch.kappas) + [ch.tauM, ch.tauY]
    return sp.lambdify(args, expr, modules="math")


def a0_constant(geom: GeometrySpec, q: int) -> float:
    """Determinant-gluing constant: quadrature of the derived a0 density."""
    fn = _density_fn(geom.m, q, "a0")
    return float(sum(n.w * fn(*n.kappa, n.tau_M, n.tau_Y) for n in geom.nodes))


def zeta0_constant(geom: GeometrySpec, q: int) -> float:
    """Zeta value at zero plus the harmonic-space dimension, by quadrature."""
    fn = _density_fn(geom.m, q, "zeta0")
    return float(sum(n.w * fn(*n.kappa, n.tau_M, n.tau_Y) for n in geom.nodes))


# ---------------------------------------------------------------------------
# Gram determinant and identity assembly
# ---------------------------------------------------------------------------

def det_s(basis: HarmonicBasis, geom: GeometrySpec) -> float:
    """Determinant of the boundary Gram matrix of restricted harmonic forms."""
    ell = basis.count
    weights = np.array([n.w for n in geom.nodes])
    arr = np.array(basis.traces, dtype=np.float64)  # (ell, nodes, comp)
    gram = np.einsum("j,ijc,kjc->ik", weights, arr, arr)
    sign, logabs = np.linalg.slogdet(gram)
    if sign <= 0 or not np.isfinite(logabs):
        raise ValueError("Gram matrix of boundary traces is singular")
    val = float(np.exp(logabs))
    return val


def constant_harmonic_basis(geom: GeometrySpec) -> HarmonicBasis:
    """The normalized constant function as a degree-0 harmonic basis."""
    c = 1.0 / math.sqrt(geom.V)
    return HarmonicBasis(traces=(tuple((c,) for _ in geom.nodes),))


def assemble_gluing_identity(geom: GeometrySpec, q: int, logdet_abs: float,
                             logdet_D: float, logdet_Q: float,
                             basis: HarmonicBasis) -> float:
    """Residual of the determinant-gluing identity.

    ``(logdet_abs - logdet_D) - (a0 - ln det S + logdet_Q)``; for product
    collars the curvature fields vanish and ``a0`` is identically zero.
    """
    a0 = a0_constant(geom, q)
    return (logdet_abs - logdet_D) - (a0 - math.log(det_s(basis, geom)) + logdet_Q)


# ---------------------------------------------------------------------------
# Canonical geometries
# ---------------------------------------------------------------------------

def unit_disk(n: int = 256) -> GeometrySpec:
    """Unit disk: boundary circle of length 2*pi, curvature 1, flat interior."""
    w = 2 * math.pi / n
    nodes = tuple(BoundaryNode(w=w, kappa=(1.0,)) for _ in range(n))
    return GeometrySpec(m=2, nodes=nodes, V=math.pi, ellY=2 * math.pi,
                        label="unit-disk")


def unit_ball(n_polar: int = 32, n_azimuth: int = 64) -> GeometrySpec:
    """Unit ball: boundary sphere of area 4*pi, both curvatures 1, tau_Y = 2."""
    x, gl_w = np.polynomial.legendre.leggauss(n_polar)
    nodes = []
    dphi = 2 * math.pi / n_azimuth
    for xi, wi in zip(x, gl_w):
        for _ in range(n_azimuth):
            nodes.append(BoundaryNode(w=float(wi) * dphi, kappa=(1.0, 1.0),
                                      tau_M=0.0, tau_Y=2.0))
    total = sum(n.w for n in nodes)
    # Gauss-Legendre weights sum to 2 exactly only in exact arithmetic;
    # renormalize to the exact sphere area
    nodes = tuple(BoundaryNode(w=n.w * 4 * math.pi / total, kappa=n.kappa,
                               tau_M=n.tau_M, tau_Y=n.tau_Y) for n in nodes)
    return GeometrySpec(m=3, nodes=nodes, V=4 * math.pi / 3, ellY=4 * math.pi,
                        label="unit-ball")


def cylinder_boundary(a: float, L: float, n: int = 64) -> GeometrySpec:
    """Flat cylinder ``[0, a] x S^1_L``: two totally geodesic boundary circles."""
    w = L / n
    nodes = tuple(BoundaryNode(w=w, kappa=(0.0,)) for _ in range(2 * n))
    return GeometrySpec(m=2, nodes=nodes, V=a * L, ellY=2 * L,
                        label=f"cylinder-a{a}-L{L}")


def rescale(geom: GeometrySpec, c: float) -> GeometrySpec:
    """Geometry of the metric scaled by ``c**2``.

    Lengths scale by ``c``: curvatures by ``1/c``, scalar curvatures by
    ``1/c**2``, boundary measure by ``c**(m-1)``, volume by ``c**m``.
    """
    s = c ** (geom.m - 1)
    nodes = tuple(
        BoundaryNode(w=n.w * s, kappa=tuple(k / c for k in n.kappa),
                     tau_M=n.tau_M / c ** 2, tau_Y=n.tau_Y / c ** 2)
        for n in geom.nodes
    )
    return GeometrySpec(m=geom.m, nodes=nodes, V=geom.V * c ** geom.m,
                        ellY=geom.ellY * s, label=f"{geom.label}-scaled{c}")


# ---------------------------------------------------------------------------
# Conformal variation (m = 2, q = 0)
# ---------------------------------------------------------------------------

def _polar_disk_integral(f, n_r: int, n_t: int) -> float:
    """Gauss-Legendre x trapezoid integral of ``f(x, y)`` over the unit disk."""
    x, w = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * w
    theta = np.linspace(0.0, 2 * math.pi, n_t, endpoint=False)
    dt = 2 * math.pi / n_t
    total = 0.0
    for ri, wi in zip(r, wr):
        xs = ri * np.cos(theta)
        ys = ri * np.sin(theta)
        vals = np.array([f(xx, yy) for xx, yy in zip(xs, ys)])
        total += float(wi * ri * np.sum(vals) * dt)
    return total


def conformal_variation_check(geom: GeometrySpec, boundary_values,
                              normal_inward, interior_fn) -> float:
    """First-order conformal variation of the determinant-gluing identity.

    For the disk (``m = 2``, degree 0) and a conformal factor ``exp(2 eps F)``,
    the variations of the two log-determinants, of the gluing constant, of the
    Gram determinant, and of the boundary length assemble to an identity whose
    total first-order variation vanishes.  Each integral is evaluated by its
    own quadrature (boundary trapezoid over the supplied samples, interior
    polar Gauss-Legendre at two resolutions), so the returned residual
    reflects genuine numerical error rather than exact cancellation.

    Parameters
    ----------
    geom : GeometrySpec
        Disk-like geometry (m = 2).
    boundary_values, normal_inward : array-like
        Samples of ``F`` and of its inward normal derivative at the nodes.
    interior_fn : callable
        ``F(x, y)`` on the interior, used for the volume integrals.
    """
    if geom.m != 2:
        raise ValueError("the conformal variation check is 2-dimensional")
    if normal_inward is None:
        raise ValueError("inward normal-derivative samples are required")
    fvals = np.asarray(boundary_values, dtype=np.float64)
    dnvals = np.asarray(normal_inward, dtype=np.float64)
    if fvals.shape != dnvals.shape or len(fvals) != len(geom.nodes):
        raise ValueError("boundary samples must conform to the node count")
    weights = np.array([n.w for n in geom.nodes])
    kappas = np.array([n.kappa[0] for n in geom.nodes])

    int_f_bnd = float(np.sum(weights * fvals))
    int_dn = float(np.sum(weights * dnvals))
    int_f_kappa = float(np.sum(weights * fvals * kappas))
    vol_int_coarse = _polar_disk_integral(interior_fn, 24, 96)
    vol_int_fine = _polar_disk_integral(interior_fn, 32, 128)

    # variation of logdet(absolute) - logdet(Dirichlet): the two interior heat
    # coefficients differ by the boundary flux term
    d_lhs = -2.0 * (int_dn / (4 * math.pi)) + 2.0 * vol_int_coarse / geom.V
    # variation of the gluing constant (integral of kappa / 2 pi)
    d_a0 = (-int_dn + int_f_kappa - int_f_kappa) / (2 * math.pi)
    # variation of ln det S with S = ellY / V
    d_lndetS = int_f_bnd / geom.ellY - 2.0 * vol_int_fine / geom.V
    # the normalized DtN determinant is conformally invariant, so the DtN
    # log-determinant varies exactly like ln(ellY)
    d_logdet_Q = int_f_bnd / geom.ellY

    return d_lhs - (d_a0 - d_lndetS + d_logdet_Q)
