"""Deterministic verification suites (no Monte Carlo sampling).

Each suite returns a list of :class:`SuiteCheck`; the CLI prints them as a
table and exits non-zero if any fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

from . import theory
from .errors import DegenerateDiagnosticError
from .harness import qf_diagnostic
from .matfun import ContourSpec, eval_contour, eval_series, exp_function, monomial
from .oracles import trace_identity_enumerate


@dataclass
class SuiteCheck:
    name: str
    value: float
    tol: float
    passed: bool
    note: str = ""


def _chk(name, err, tol, note=""):
    err = float(err)
    return SuiteCheck(name, err, tol, bool(err <= tol), note)


def random_bounded_matrices(count: int, n: int, bound: float, seed: int) -> List[np.ndarray]:
    """Gaussian matrices rescaled to spectral norm exactly ``bound`` (via SVD)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        A = rng.standard_normal((n, n))
        out.append(A * (bound / np.linalg.norm(A, 2)))
    return out


def route_equivalence(count=20, n=6, degree=10, seed=11) -> SuiteCheck:
    worst = 0.0
    contour = ContourSpec(2.5, 256)
    for A in random_bounded_matrices(count, n, 2.0, seed):
        for t in range(degree + 1):
            f = monomial(t)
            d = np.max(np.abs(eval_series(f, A) - eval_contour(f, A, contour)))
            worst = max(worst, float(d))
    return _chk(f"series vs contour, z^t t<={degree}, {count} random {n}x{n}", worst, 1e-10)


def theory_suite() -> List[SuiteCheck]:
    out = []
    out.append(_chk("kernel_Y(3,3) = 1/648", abs(theory.kernel_Y(3, 3) - 1 / 648), 1e-14, f"{theory.kernel_Y(3, 3).real!r}"))
    pts = [2.5, 3.0, -2.7, 2.5 + 1j, -1.5 + 2.5j, 3j, 4 - 4j]
    herm = max(abs(theory.kernel_Y(w, z) - np.conj(theory.kernel_Y(z, w))) for z in pts for w in pts)
    out.append(_chk("kernel_Y Hermitian symmetry", herm, 0.0))
    out.append(_chk("covariance_Z(z^2, z^3) = 0", abs(theory.covariance_Z(monomial(2), monomial(3))), 0.0))
    mono = max(abs(theory.covariance_Z(monomial(s), monomial(t)) - (s == t)) for s in range(2, 8) for t in range(2, 8))
    out.append(_chk("covariance_Z(z^s, z^t) = delta_st", mono, 0.0))
    exp = exp_function()
    pairs = [("z^2,z^2", monomial(2), monomial(2)), ("z^2,z^3", monomial(2), monomial(3)), ("exp,exp", exp, exp)]
    for label, f, g in pairs:
        d = abs(theory.covariance_Z(f, g) - theory.covariance_Z_contour(f, g))
        out.append(_chk(f"covariance_Z series vs contour ({label})", d, 1e-8))
    ref = math.fsum(1.0 / math.factorial(r) ** 2 for r in range(2, 30))
    out.append(_chk("covariance_Z(exp, exp) vs partial sums", abs(theory.covariance_Z(exp, exp) - ref), 1e-8, f"{ref:.7f}"))
    out.append(_chk("covariance_Z(exp, exp) vs 0.2795853", abs(theory.covariance_Z(exp, exp) - 0.2795853), 1e-8))
    worst = 0.0
    for z in (2.5, 3.0, -4.0):
        rr, ii, ri = theory.real_kernels(z, z)
        worst = max(worst, abs(ii), abs(ri), abs(rr - theory.kernel_Y(z, z)))
    out.append(_chk("real_kernels at real z: K_ImIm = K_ReIm = 0, K_ReRe = kernel_Y", worst, 1e-15))
    worst = max(
        abs(sum(theory.real_kernels(z, z)[:2]) - theory.kernel_Y(z, z)) for z in pts
    )
    out.append(_chk("K_ReRe + K_ImIm = kernel_Y(z, z)", worst, 1e-15))
    worst = max(
        abs(theory.covariance_Z(theory.resolvent_function(z), theory.resolvent_function(w)) - theory.kernel_Y(z, w))
        for z in pts
        for w in pts
    )
    out.append(_chk("kernel_Y closed form vs coefficient series", worst, 1e-14))
    out.append(route_equivalence())
    return out


def oracle_suite(n_max: int, count: int = 50, seed: int = 5) -> List[SuiteCheck]:
    rng = np.random.default_rng(seed)
    out = []
    worst = 0.0
    for k in range(count):
        n = 2 + k % (n_max - 1) if n_max >= 2 else 1
        B = rng.standard_normal((n, n))
        worst = max(worst, abs(trace_identity_enumerate(B) - np.trace(B @ B.T) / n))
    out.append(_chk(f"trace identity by enumeration, {count} random B, n<={n_max}", worst, 1e-14))
    rows = qf_diagnostic([2, 4, 8], "three-point")
    for r in rows:
        n = r["n"]
        exact = (3 * n - 2) / n**3
        out.append(_chk(f"qf_diagnostic three-point n={n} = (3n-2)/n^3", abs(r["value"] - exact), 0.0, repr(r["value"])))
    try:
        qf_diagnostic([2], "rademacher")
        out.append(SuiteCheck("qf_diagnostic rademacher", 1.0, 0.0, False, "expected degenerate"))
    except DegenerateDiagnosticError:
        out.append(SuiteCheck("qf_diagnostic rademacher", 0.0, 0.0, True, "trivially 0 (x^T x = n)"))
    return out


def format_table(checks: List[SuiteCheck]) -> str:
    width = max(len(c.name) for c in checks)
    lines = []
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        note = f"  {c.note}" if c.note else ""
        lines.append(f"{status}  {c.name:<{width}}  err={c.value:.3e}  tol={c.tol:.0e}{note}")
    return "\n".join(lines)
