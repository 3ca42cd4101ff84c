"""Closed-form limiting covariances.

In the limit the entry statistics behave like ``sum_{r>=2} c_r xi_r`` for
i.i.d. real standard normals ``xi_r``: a function f contributes its Taylor
coefficients ``c_r = a_r``, and the resolvent entry ``Y(z)`` is the special
case ``f(zeta) = 1/(z - zeta)`` with ``c_r = z^{-(r+1)}``. Summing
``c_r conj(d_r)`` over r gives every covariance below; the closed forms are
that sum in geometric-series form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import PoleError
from .matfun import AnalyticFunction, ContourSpec, geometric_shifted

SERIES_TERM_TOL = 1e-16


@dataclass
class TheoryKernel:
    kind: str  # "entry-kernel" | "Zf-covariance" | "real-kernels"
    parameters: tuple
    value: object


def _k(z: complex, w: complex) -> complex:
    """``1 / (z^2 w^2 (zw - 1))``, the common building block."""
    z, w = complex(z), complex(w)
    # written in terms of u = zw only, so the value is exactly symmetric in (z, w)
    u = z * w
    if u == 0 or u == 1:
        raise PoleError(f"kernel pole at z={z}, w={w}")
    return 1.0 / (u * u * (u - 1.0))


def kernel_Y(z: complex, w: complex) -> complex:
    """``E[Y(z) conj(Y(w))] = 1 / (z^2 conj(w)^2 (z conj(w) - 1))``."""
    return _k(z, complex(w).conjugate())


def pseudo_kernel_Y(z: complex, w: complex) -> complex:
    """``E[Y(z) Y(w)]`` for real matrices, i.e. ``kernel_Y(z, conj(w))``.

    Follows from ``Y(conj w) = conj(Y(w))``.
    """
    return _k(z, w)


def trace_kernel_limit(z: complex, w: complex) -> complex:
    """Limit of ``(1/n) tr(R(z) R(w)^T)``: ``1 / (zw - 1)``."""
    d = complex(z) * complex(w) - 1.0
    if d == 0:
        raise PoleError(f"trace kernel pole at z={z}, w={w}")
    return 1.0 / d


def resolvent_function(z: complex) -> AnalyticFunction:
    """``zeta -> 1/(z - zeta)``; its entry statistic is exactly Y(z)."""
    return geometric_shifted(z)


def covariance_Z(f: AnalyticFunction, g: AnalyticFunction, full_output: bool = False):
    """``E[Z(f) conj(Z(g))] = sum_{r>=2} a_r conj(b_r)``.

    Polynomials are summed exactly. Otherwise terms are accumulated up to the
    point where both tails, measured at radius 1, are below 1e-16; the
    reported tail bound is ``min(tail_f * sum|b|, tail_g * sum|a|)``.
    """
    if f.degree is not None or g.degree is not None:
        K = min(d for d in (f.degree, g.degree) if d is not None)
        tail = 0.0
    else:
        Kf, tf = f.n_terms(1.0, SERIES_TERM_TOL)
        Kg, tg = g.n_terms(1.0, SERIES_TERM_TOL)
        K = max(Kf, Kg)
        sa = float(np.sum(np.abs(f.coefs(K)))) + tf
        sb = float(np.sum(np.abs(g.coefs(K)))) + tg
        tail = min(tf * sb, tg * sa)
    if K < 2:
        val = 0j
    else:
        a = f.coefs(K)[2:]
        b = g.coefs(K)[2:]
        val = complex(np.sum(a * np.conj(b)))
    if full_output:
        return val, tail
    return val


def covariance_Z_contour(f: AnalyticFunction, g: AnalyticFunction, contour: ContourSpec = ContourSpec()) -> complex:
    """Double-contour form ``(1/2pi)^2 \\oint\\oint f(z)/z^2 conj(g(w)/w^2) / (z conj(w) - 1) dz d(conj w)``.

    On the circle ``dz d(conj w) = z conj(w) dtheta dphi``, so the trapezoidal
    rule is ``N^-2 sum_jk f(z_j) conj(g(z_k)) / (u_jk (u_jk - 1))`` with
    ``u_jk = z_j conj(z_k)``.
    """
    if contour.radius >= min(f.radius, g.radius):
        raise ValueError("contour must lie inside both convergence disks")
    if contour.radius <= 1.0:
        raise PoleError("contour radius must exceed 1 to avoid z conj(w) = 1")
    zs = contour.points()
    fz = np.asarray(f(zs), dtype=complex)
    gw = np.conj(np.asarray(g(zs), dtype=complex))
    u = np.outer(zs, np.conj(zs))
    return complex(fz @ (1.0 / (u * (u - 1.0))) @ gw) / contour.nodes**2


def real_kernels(z: complex, w: complex) -> Tuple[complex, complex, complex]:
    """Limiting covariances of real and imaginary parts of Y.

    Returns ``(K_ReRe, K_ImIm, K_ReIm)`` with
    ``K_ReRe = Cov(Re Y(z), Re Y(w))``, ``K_ImIm = Cov(Im Y(z), Im Y(w))``
    and ``K_ReIm = Cov(Re Y(z), Im Y(w))``, each a four-term combination of
    ``k(a, b) = 1/(a^2 b^2 (ab - 1))`` over conjugations of z and w.
    """
    z, w = complex(z), complex(w)
    zc, wc = z.conjugate(), w.conjugate()
    k1, k2, k3, k4 = _k(z, w), _k(z, wc), _k(zc, w), _k(zc, wc)
    rr = 0.25 * (k1 + k2 + k3 + k4)
    ii = -0.25 * (k1 - k2 - k3 + k4)
    ri = (k1 - k2 + k3 - k4) / 4j
    return rr, ii, ri


def covariance_S(z: complex, w: complex, spec_a, spec_b=None) -> complex:
    """``E[S_a(z) conj(S_b(w))]`` assembled from :func:`real_kernels`.

    Distinct entries of Y are independent in the limit, so only matching
    (i, j) pairs contribute.
    """
    spec_b = spec_a if spec_b is None else spec_b
    rr, ii, ri = real_kernels(z, w)
    _, _, ir_t = real_kernels(w, z)  # Cov(Re Y(w), Im Y(z)) = Cov(Im Y(z), Re Y(w))
    aa, ba = spec_a.alphas, spec_a.betas
    ab, bb = np.conj(spec_b.alphas), np.conj(spec_b.betas)
    total = np.sum(aa * ab) * rr + np.sum(aa * bb) * ri + np.sum(ba * ab) * ir_t + np.sum(ba * bb) * ii
    return complex(total)


def entry_variance(f: AnalyticFunction, part: Optional[str] = None) -> float:
    """Limiting variance of the entry statistic of f (real matrices).

    ``part`` selects ``"re"`` / ``"im"`` (sum of squared real / imaginary
    Taylor parts) or None for ``E|Z(f)|^2``.
    """
    total = covariance_Z(f, f).real
    if part is None:
        return total
    fr = AnalyticFunction(lambda k: complex(f.coef(k)).real, f.radius, f.name + ".re")
    fi = AnalyticFunction(lambda k: complex(f.coef(k)).imag, f.radius, f.name + ".im")
    if f.degree is not None:
        fr = AnalyticFunction([complex(c).real for c in f.coefs(f.degree)], f.radius, fr.name)
        fi = AnalyticFunction([complex(c).imag for c in f.coefs(f.degree)], f.radius, fi.name)
    if part == "re":
        return covariance_Z(fr, fr).real
    if part == "im":
        return covariance_Z(fi, fi).real
    raise ValueError(f"part must be 're', 'im' or None, got {part!r}")


def kernel_table(points) -> np.ndarray:
    """Matrix of ``kernel_Y`` over a list of evaluation points (Hermitian)."""
    pts = list(points)
    return np.array([[kernel_Y(a, b) for b in pts] for a in pts])

