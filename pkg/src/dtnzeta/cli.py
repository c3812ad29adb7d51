"""Command-line front end.

Each subcommand runs a derivation or verification pipeline and emits a JSON
report.  A report is a canonical-serialization object with one row per
computed quantity::

    {"quantity": ..., "value": ..., "expression": ..., "citation": ...,
     "status": "PASS" | "FAIL" | "INFO", "error_bound": ...}

The process exit status is nonzero exactly when some row FAILs.  Citations are
stable descriptive identifiers of the derived quantity (e.g.
``a0-density.dim3.q1``), usable as cross-references from external reports.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import mpmath as mp
import sympy as sp

__all__ = ["RunConfig", "run", "main"]

_COMMANDS = (
    "derive-a0",
    "derive-terms",
    "verify-cylinder",
    "verify-zeta-zero",
    "geom-constants",
    "conformal-check",
    "specfun-selftest",
)


@dataclass(frozen=True)
class RunConfig:
    """Validated parameters of one CLI invocation."""

    command: str
    m: int = 3
    q: int = 0
    a: float = 1.0
    L: float = 2 * math.pi
    geometry: str = ""
    file: str = ""
    output: str = ""
    dps: int = 30

    def __post_init__(self):
        if self.command not in _COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.dps < 15:
            raise ValueError("precision must be at least 15 digits")
        if self.m not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        if not 0 <= self.q <= self.m - 1:
            raise ValueError(f"degree {self.q} out of range for dimension {self.m}")
        if self.a <= 0 or self.L <= 0:
            raise ValueError("cylinder parameters must be positive")


def _row(quantity: str, citation: str, *, value=None, expression=None,
         status: str = "INFO", error_bound=None) -> dict:
    return {
        "quantity": quantity,
        "value": value,
        "expression": expression,
        "citation": citation,
        "status": status,
        "error_bound": error_bound,
    }


def render_report(command: str, rows: list[dict]) -> str:
    """Canonical JSON serialization (stable key order, fixed separators)."""
    status = "PASS" if all(r["status"] != "FAIL" for r in rows) else "FAIL"
    payload = {"command": command, "status": status, "rows": rows}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _check(quantity, citation, residual, tol, **extra):
    status = "PASS" if abs(residual) < tol else "FAIL"
    return _row(quantity, citation, value=float(residual), status=status,
                error_bound=tol, **extra)


def _exact_zero(expr) -> bool:
    diff = sp.expand(expr)
    if diff == 0:
        return True
    return sp.simplify(diff) == 0


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------

def _run_derive_a0(cfg: RunConfig) -> list[dict]:
    from .symbolint import a0_density, a0_reference
    computed = a0_density(cfg.m, cfg.q)
    expected = a0_reference(cfg.m, cfg.q)
    ok = _exact_zero(computed - expected)
    return [
        _row("a0-density", f"a0-density.dim{cfg.m}.q{cfg.q}",
             expression=str(computed), status="PASS" if ok else "FAIL"),
        _row("a0-density-reference", f"a0-density.dim{cfg.m}.q{cfg.q}.reference",
             expression=str(expected), status="INFO"),
    ]


def _run_derive_terms(cfg: RunConfig) -> list[dict]:
    from .symbolint import (TERM_LABELS, reference_table_sum, reference_term_table,
                            term_table)
    if cfg.m != 3:
        raise ValueError("the term table is a 3-dimensional derivation")
    computed = term_table(cfg.q)
    expected = reference_term_table(cfg.q)
    rows = []
    for label in TERM_LABELS:
        ok = _exact_zero(computed[label] - expected[label])
        rows.append(_row(f"trace-term-{label}", f"trace-term.dim3.q{cfg.q}.{label}",
                         expression=str(computed[label]),
                         status="PASS" if ok else "FAIL"))
    total = sum(computed[label] for label in TERM_LABELS)
    ok = _exact_zero(total - reference_table_sum(cfg.q))
    rows.append(_row("trace-term-sum", f"trace-term.dim3.q{cfg.q}.sum",
                     expression=str(sp.cancel(sp.together(total))),
                     status="PASS" if ok else "FAIL"))
    return rows


def _run_verify_cylinder(cfg: RunConfig) -> list[dict]:
    from .zetadet import verify_product_gluing
    out = verify_product_gluing(cfg.a, cfg.L, cfg.q, cfg.dps)
    rows = [
        _check("dtn-logdet-identity", "cylinder.dtn-logdet", out["logdet_identity"], 1e-10),
        _check("zeta-difference-s2", "cylinder.zeta-difference",
               out["zeta_diff_s2"], max(1e-10, 10 * out["zeta_diff_s2_bound"])),
        _check("zeta-difference-s3", "cylinder.zeta-difference",
               out["zeta_diff_s3"], max(1e-10, 10 * out["zeta_diff_s3_bound"])),
        _check("dtn-zeta-at-zero", "cylinder.dtn-zeta-at-zero",
               out["zeta_q_at_zero"] - out["zeta_q_at_zero_expected"], 1e-8),
        _check("determinant-gluing", "cylinder.determinant-gluing",
               out["gluing_residual"], 1e-10),
    ]
    return rows


def _run_verify_zeta_zero(cfg: RunConfig) -> list[dict]:
    from .zetadet import zeta_zero_identity_sides
    lhs, rhs = zeta_zero_identity_sides(cfg.a, cfg.L, cfg.q, cfg.dps)
    return [
        _row("zeta-zero-lhs", "cylinder.zeta-zero-identity", value=lhs),
        _row("zeta-zero-rhs", "cylinder.zeta-zero-identity", value=rhs),
        _check("zeta-zero-identity", "cylinder.zeta-zero-identity", lhs - rhs, 1e-10),
    ]


def _load_geometry(cfg: RunConfig):
    from . import geom as G
    if cfg.file:
        if not os.path.exists(cfg.file):
            raise FileNotFoundError(cfg.file)
        with open(cfg.file) as fh:
            return G.GeometrySpec.from_json(fh.read())
    name = cfg.geometry or "unit-disk"
    if name == "unit-disk":
        return G.unit_disk()
    if name == "unit-ball":
        return G.unit_ball()
    if name == "cylinder":
        return G.cylinder_boundary(cfg.a, cfg.L)
    raise ValueError(f"unknown geometry {name!r}")


_GOLDEN_CONSTANTS = {
    # (label, q): (a0, zeta0) closed-form values for the canonical geometries
    ("unit-disk", 0): (sp.Integer(1), sp.Integer(0)),
    ("unit-disk", 1): (1 - 2 * sp.log(2), sp.Integer(-2)),
    ("unit-ball", 0): (sp.Rational(3, 8), sp.Rational(1, 3)),
    ("unit-ball", 1): (sp.Rational(-3, 4), sp.Rational(-1, 3)),
    ("unit-ball", 2): (sp.Rational(7, 8), sp.Rational(4, 3)),
}


def _run_geom_constants(cfg: RunConfig) -> list[dict]:
    from .geom import a0_constant, zeta0_constant
    geom = _load_geometry(cfg)
    a0 = a0_constant(geom, cfg.q)
    z0 = zeta0_constant(geom, cfg.q)
    rows = [
        _row("gluing-constant", f"geometry-constant.a0.q{cfg.q}", value=a0),
        _row("zeta-zero-constant", f"geometry-constant.zeta0.q{cfg.q}", value=z0),
    ]
    golden = _GOLDEN_CONSTANTS.get((geom.label, cfg.q))
    if golden is not None:
        ga, gz = (float(v) for v in golden)
        rows.append(_check("gluing-constant-golden",
                           f"geometry-constant.a0.q{cfg.q}.golden", a0 - ga, 1e-10))
        rows.append(_check("zeta-zero-constant-golden",
                           f"geometry-constant.zeta0.q{cfg.q}.golden", z0 - gz, 1e-10))
    return rows


def _run_conformal_check(cfg: RunConfig) -> list[dict]:
    import numpy as np

    from .geom import conformal_variation_check, unit_disk
    geom = unit_disk()
    n = len(geom.nodes)
    th = np.arange(n) * 2 * math.pi / n
    cases = {
        "constant": (np.ones_like(th), np.zeros_like(th), lambda x, y: 1.0),
        "coordinate": (np.cos(th), -np.cos(th), lambda x, y: x),
        "radial-square": (np.ones_like(th), -2 * np.ones_like(th),
                          lambda x, y: x * x + y * y),
    }
    rows = []
    for name, (bv, nv, fn) in cases.items():
        res = conformal_variation_check(geom, bv, nv, fn)
        rows.append(_check(f"conformal-variation-{name}",
                           f"conformal-variation.disk.{name}", res, 1e-8))
    return rows


def _run_specfun_selftest(cfg: RunConfig) -> list[dict]:
    from .sfunc import S, gamma_ratio_at_zero, riemann_zeta, xi_moment, zeta_deriv_at
    rows = []
    with mp.workdps(cfg.dps + 10):
        for s0, ref in ((2, mp.pi ** 2 / 6), (0, mp.mpf(-1) / 2), (-1, mp.mpf(-1) / 12)):
            res = float(riemann_zeta(s0, cfg.dps + 10) - ref)
            rows.append(_check(f"riemann-zeta-{s0}", "specfun.riemann-zeta",
                               res, float(mp.mpf(10) ** (-cfg.dps))))
        res = float(zeta_deriv_at(0, cfg.dps + 10) + mp.log(2 * mp.pi) / 2)
        rows.append(_check("riemann-zeta-deriv-0", "specfun.riemann-zeta",
                           res, float(mp.mpf(10) ** (-cfg.dps))))
    for k, (v_ref, d_ref) in ((1, (-1, -1)), (sp.Rational(1, 2), (0, -2 * sp.sqrt(sp.pi))),
                              (2, (sp.Rational(1, 2), sp.Rational(3, 4)))):
        v, d = gamma_ratio_at_zero(k)
        ok = sp.simplify(v - v_ref) == 0 and sp.simplify(d - d_ref) == 0
        rows.append(_row(f"gamma-ratio-at-zero-{k}", "specfun.gamma-ratio",
                         expression=f"({v}, {d})", status="PASS" if ok else "FAIL"))
    table = [
        ((0, 0), S / 2, 1 / (2 * sp.pi * (S - 2))),
        ((0, 0), S / 2 + 1, 1 / (2 * sp.pi * S)),
        ((2, 0), S / 2 + 2, 1 / (2 * sp.pi * S * (S + 2))),
        ((2, 2), S / 2 + 3, 1 / (2 * sp.pi * S * (S + 2) * (S + 4))),
        ((4, 0), S / 2 + 3, 3 / (2 * sp.pi * S * (S + 2) * (S + 4))),
    ]
    for exps, p, ref in table:
        got = xi_moment(2, exps, p)
        ok = sp.simplify(sp.gammasimp(got - ref)) == 0
        rows.append(_row(f"momentum-integral-xi{exps[0]}{exps[1]}-p({p})",
                         "specfun.momentum-table", expression=str(sp.cancel(got)),
                         status="PASS" if ok else "FAIL"))
    return rows


_PIPELINES = {
    "derive-a0": _run_derive_a0,
    "derive-terms": _run_derive_terms,
    "verify-cylinder": _run_verify_cylinder,
    "verify-zeta-zero": _run_verify_zeta_zero,
    "geom-constants": _run_geom_constants,
    "conformal-check": _run_conformal_check,
    "specfun-selftest": _run_specfun_selftest,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one pipeline; return (exit status, canonical JSON report)."""
    rows = _PIPELINES[cfg.command](cfg)
    report = render_report(cfg.command, rows)
    status = 0 if all(r["status"] != "FAIL" for r in rows) else 1
    return status, report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtnzeta",
        description="Derive and verify Dirichlet-to-Neumann zeta-determinant "
                    "constants on model geometries.")
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--m", type=int, default=3, help="interior dimension (2 or 3)")
    parser.add_argument("--q", type=int, default=0, help="form degree")
    parser.add_argument("--a", type=float, default=1.0, help="cylinder length")
    parser.add_argument("--L", type=float, default=2 * math.pi,
                        help="cross-section circle length")
    parser.add_argument("--geometry", default="",
                        help="built-in geometry name (unit-disk, unit-ball, cylinder)")
    parser.add_argument("--file", default="", help="geometry JSON file")
    parser.add_argument("--output", default="", help="write the JSON report here")
    parser.add_argument("--dps", type=int,
                        default=int(os.environ.get("DTNZETA_DPS", "30")),
                        help="working precision in decimal digits")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = RunConfig(command=args.command, m=args.m, q=args.q, a=args.a,
                        L=args.L, geometry=args.geometry, file=args.file,
                        output=args.output, dps=args.dps)
    except ValueError as exc:
        print(f"error: invalid-config: {exc}", file=sys.stderr)
        return 2
    try:
        status, report = run(cfg)
    except FileNotFoundError as exc:
        print(f"error: file-not-found: {exc}", file=sys.stderr)
        return 3
    except (KeyError, ValueError) as exc:
        print(f"error: schema-or-range: {exc}", file=sys.stderr)
        return 4
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(report + "\n")
    print(report)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
