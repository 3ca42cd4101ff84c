"""Matrix functions by power series and by Cauchy contour integration.

Both routes need an a-priori bound on the spectral norm: the series
``sum a_k A^k`` converges once ``||A|| < radius``, and the circle used for
the contour route must enclose the spectrum. :func:`spectral_norm` provides
the bound with a plain power iteration on ``A^H A``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.linalg as sla

from .errors import (
    ConvergenceError,
    GuardViolationError,
    InvalidDimensionError,
    SingularNodeError,
    SingularResolventError,
)

SERIES_TAIL_TOL = 1e-12
DEFAULT_KAPPA = 2.25
DEFAULT_RADIUS = 2.5
DEFAULT_NODES = 256

_MAX_TERMS = 20000


@dataclass
class AnalyticFunction:
    """Taylor coefficients ``a_k = f^(k)(0)/k!`` around the origin.

    ``coefficients`` is either a finite sequence (a polynomial) or a callable
    ``k -> a_k``. ``radius`` is a lower bound on the radius of convergence.
    ``func`` optionally evaluates f pointwise; without it the series is summed.
    """

    coefficients: Union[Sequence[complex], Callable[[int], complex]]
    radius: float = math.inf
    name: str = "f"
    func: Optional[Callable] = field(default=None, repr=False)

    @property
    def degree(self) -> Optional[int]:
        """Polynomial degree, or None for an infinite series."""
        if callable(self.coefficients):
            return None
        return len(self.coefficients) - 1

    def coef(self, k: int) -> complex:
        if callable(self.coefficients):
            return self.coefficients(k)
        if k < len(self.coefficients):
            return self.coefficients[k]
        return 0.0

    def coefs(self, K: int) -> np.ndarray:
        """Coefficients a_0..a_K as an array."""
        c = [self.coef(k) for k in range(K + 1)]
        return np.asarray(c, dtype=complex if any(isinstance(x, complex) for x in c) else float)

    @property
    def is_real(self) -> bool:
        K = self.degree if self.degree is not None else 64
        return not np.iscomplexobj(self.coefs(K))

    def n_terms(self, r: float, tol: float = SERIES_TAIL_TOL):
        """Smallest K with ``sum_{k>K} |a_k| r^k <= tol``; returns ``(K, tail)``."""
        if r >= self.radius:
            raise ConvergenceError(f"{self.name}: evaluation radius {r} not inside convergence radius {self.radius}")
        if self.degree is not None:
            terms = np.abs(self.coefs(self.degree)) * r ** np.arange(self.degree + 1)
            tails = np.concatenate([np.cumsum(terms[::-1])[::-1][1:], [0.0]])
            K = int(np.argmax(tails <= tol))
            return K, float(tails[K])
        # rule-generated: tabulate terms until they have decayed far below tol,
        # then bound what is left by a geometric tail using the observed ratio
        terms = []
        k = 0
        while True:
            try:
                terms.append(abs(self.coef(k)) * r**k)
            except OverflowError:
                raise ConvergenceError(f"{self.name}: series terms overflow at r={r}", last=terms[-1]) from None
            k += 1
            if k >= 16 and terms[-1] < tol * 1e-4:
                window = np.array(terms[-8:])
                nz = window[:-1] > 0
                ratios = window[1:][nz] / window[:-1][nz]
                q = float(ratios.max()) if ratios.size else 0.0
                if q < 1.0:
                    extra = terms[-1] * q / (1.0 - q)
                    break
            if k > _MAX_TERMS:
                raise ConvergenceError(f"{self.name}: series terms not decaying at r={r}", last=terms[-1])
        terms = np.array(terms)
        tails = np.cumsum(terms[::-1])[::-1] - terms + extra
        K = int(np.argmax(tails <= tol))
        return K, float(tails[K])

    def __call__(self, z):
        if self.func is not None:
            return self.func(z)
        z = np.asarray(z)
        K, _ = self.n_terms(float(np.max(np.abs(z))) if z.size else 0.0, tol=1e-16)
        return np.polynomial.polynomial.polyval(z, self.coefs(K))


def monomial(t: int) -> AnalyticFunction:
    c = [0.0] * t + [1.0]
    return AnalyticFunction(c, math.inf, f"monomial:{t}", lambda z, t=t: np.asarray(z) ** t)


def poly(coefficients: Sequence[complex]) -> AnalyticFunction:
    c = list(coefficients)
    name = "poly:" + ",".join(repr(x) for x in c)
    return AnalyticFunction(c, math.inf, name, lambda z: np.polynomial.polynomial.polyval(z, np.asarray(c)))


def exp_function() -> AnalyticFunction:
    return AnalyticFunction(lambda k: 1.0 / math.factorial(k), math.inf, "exp", np.exp)


def geometric_shifted(c: complex) -> AnalyticFunction:
    """``f(z) = 1/(c - z)``, coefficients ``c^-(k+1)``, radius ``|c|``."""
    c = complex(c) if complex(c).imag else float(np.real(c))
    return AnalyticFunction(lambda k: c ** (-(k + 1)), abs(c), f"geometric-shifted:{c!r}", lambda z: 1.0 / (c - np.asarray(z)))


def parse_function(spec: str) -> AnalyticFunction:
    """Build a named function: ``monomial:t``, ``exp``, ``poly:a0,a1,...``, ``geometric-shifted:c``."""
    spec = spec.strip()
    head, _, arg = spec.partition(":")
    if head == "exp" and not arg:
        return exp_function()
    if head == "monomial":
        return monomial(int(arg))
    if head == "poly":
        return poly([complex(a) if "j" in a else float(a) for a in arg.split(",") if a.strip()])
    if head == "geometric-shifted":
        return geometric_shifted(complex(arg.replace(" ", "")))
    raise ValueError(f"unknown function spec {spec!r}")


@dataclass(frozen=True)
class ContourSpec:
    radius: float = DEFAULT_RADIUS
    nodes: int = DEFAULT_NODES
    center: complex = 0.0

    def points(self) -> np.ndarray:
        theta = 2.0 * np.pi * np.arange(self.nodes) / self.nodes
        return self.center + self.radius * np.exp(1j * theta)


def _check_square(A):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {A.shape}")
    return A


def spectral_norm(A, tol: float = 1e-10, maxiter: int = 100000) -> float:
    """Largest singular value of A by power iteration on ``A^H A``.

    The start vector is fixed (a seeded Gaussian vector) so the estimate is
    deterministic. Iteration stops when the relative change of the estimate
    drops below ``tol / 10``.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise InvalidDimensionError(f"expected a matrix, got shape {A.shape}")
    if A.size == 0 or not np.any(A):
        return 0.0
    # work with entries of order one so squared norms cannot under/overflow
    scale = float(np.max(np.abs(A)))
    A = A / scale
    AH = A.conj().T
    v = np.random.default_rng(0x5EED).standard_normal(A.shape[1])
    v = v / np.linalg.norm(v)
    sigma = 0.0
    for _ in range(maxiter):
        u = A @ v
        w = AH @ u
        wn = np.linalg.norm(w)
        if wn == 0.0:
            # start vector in the null space; restart on a basis vector
            v = np.zeros(A.shape[1], dtype=A.dtype)
            v[np.argmax(np.linalg.norm(A, axis=0))] = 1.0
            continue
        new = math.sqrt(wn)
        v = w / wn
        if abs(new - sigma) <= 0.1 * tol * new:
            return scale * float(np.linalg.norm(A @ v))
        sigma = new
    raise ConvergenceError(f"power iteration did not reach tol={tol} in {maxiter} steps", last=scale * sigma)


def resolvent(A, z: complex) -> np.ndarray:
    """``(zI - A)^{-1}`` by LU factorization."""
    A = _check_square(A)
    return _solve_shifted(A, z, None)


def resolvent_columns(A, z: complex, cols: Sequence[int]) -> np.ndarray:
    """Selected columns of ``(zI - A)^{-1}``."""
    A = _check_square(A)
    rhs = np.zeros((A.shape[0], len(cols)))
    rhs[list(cols), np.arange(len(cols))] = 1.0
    return _solve_shifted(A, z, rhs)


def _solve_shifted(A, z, rhs):
    z = complex(z)
    if z.imag == 0.0 and not np.iscomplexobj(A):
        z = z.real
    n = A.shape[0]
    B = -A.astype(np.result_type(A, z), copy=True)
    B[np.diag_indices(n)] += z
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularResolventError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(B, check_finite=False)
    d = np.abs(np.diag(lu))
    if not np.all(np.isfinite(d)) or d.min() <= n * np.finfo(float).eps * max(d.max(), 1.0):
        raise SingularResolventError(f"zI - A is numerically singular at z={z}")
    if rhs is None:
        rhs = np.eye(n)
    return sla.lu_solve((lu, piv), rhs, check_finite=False)


def _guard(A, kappa, tol=1e-8):
    norm = spectral_norm(A, tol)
    if norm > kappa:
        raise GuardViolationError(f"spectral norm estimate {norm:.6g} exceeds guard {kappa}", norm=norm, kappa=kappa)
    return norm


@dataclass
class SeriesInfo:
    terms: int
    tail: float
    norm: float


def eval_series(f: AnalyticFunction, A, guard: float = DEFAULT_KAPPA, tol: float = SERIES_TAIL_TOL, full_output: bool = False):
    """``sum_{k<=K} a_k A^k`` with K chosen so the tail bound at ``guard`` is <= tol.

    Raises :class:`GuardViolationError` if the norm of A exceeds ``guard``.
    With ``full_output`` returns ``(F, SeriesInfo)``.
    """
    A = _check_square(A)
    if guard >= f.radius:
        raise GuardViolationError(f"guard {guard} must be below the convergence radius {f.radius}", kappa=guard)
    norm = _guard(A, guard)
    K, tail = f.n_terms(guard, tol)
    a = f.coefs(K)
    n = A.shape[0]
    # Horner: F = a_0 + A(a_1 + A(a_2 + ...))
    F = np.zeros((n, n), dtype=np.result_type(A, a))
    for k in range(K, -1, -1):
        F = A @ F if k < K else F
        F[np.diag_indices(n)] += a[k]
    if full_output:
        return F, SeriesInfo(K, tail, norm)
    return F


def series_row(f: AnalyticFunction, A, i: int, K: int, skip: int = 0) -> np.ndarray:
    """Row i of ``sum_{skip<=k<=K} a_k A^k`` using only vector-matrix products."""
    A = np.asarray(A)
    a = f.coefs(K)
    v = np.zeros(A.shape[0], dtype=A.dtype)
    v[i] = 1.0
    out = np.zeros(A.shape[0], dtype=np.result_type(A, a))
    for k in range(K + 1):
        if k:
            v = v @ A
        if k >= skip and a[k] != 0:
            out += a[k] * v
    return out


def eval_contour(f: AnalyticFunction, A, contour: ContourSpec = ContourSpec(), check_guard: bool = True) -> np.ndarray:
    """Trapezoidal rule for ``(1/2 pi i) \\oint f(z) (zI - A)^{-1} dz`` on a circle.

    With ``z_k = c + r e^{i theta_k}`` the rule is
    ``(1/N) sum_k f(z_k) (z_k - c) (z_k I - A)^{-1}``, summed in node order.
    """
    A = _check_square(A)
    if contour.radius >= f.radius:
        raise GuardViolationError(f"contour radius {contour.radius} not inside convergence radius {f.radius}")
    if check_guard:
        norm = spectral_norm(A, 1e-8)
        if norm >= contour.radius - abs(contour.center):
            raise GuardViolationError(f"norm {norm:.6g} not inside contour radius {contour.radius}", norm=norm)
    zs = contour.points()
    w = f(zs) * (zs - contour.center) / contour.nodes
    n = A.shape[0]
    F = np.zeros((n, n), dtype=complex)
    for zk, wk in zip(zs, w):
        try:
            F += wk * resolvent(A, zk)
        except SingularResolventError as exc:
            raise SingularNodeError(f"singular resolvent at contour node {zk}") from exc
    return F
