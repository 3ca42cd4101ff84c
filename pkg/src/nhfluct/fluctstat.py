"""Normalized fluctuation statistics of a sampled matrix.

All statistics act on the scaled matrix ``A = M / sqrt(n)``:

* resolvent entries ``Y_ij(z) = sqrt(n) [R(z)_ij - delta_ij/z - m_ij/(z^2 sqrt(n))]``
  with ``R(z) = (z - A)^{-1}``,
* function entries ``sqrt(n) [f(A)_ij - f(0) delta_ij - f'(0) m_ij/sqrt(n)]``,
* the real-linear combination ``S = sum alpha Re(Y) + beta Im(Y)``,
* the trace kernel ``(1/n) tr(R(z) R(w)^T)``.

Each sample carries a guard flag: True when the norm of A is at most kappa.
Guarded-out samples are kept but excluded from limit aggregates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidDimensionError, NHFluctError
from .matfun import (
    DEFAULT_KAPPA,
    SERIES_TAIL_TOL,
    AnalyticFunction,
    ContourSpec,
    eval_contour,
    resolvent,
    resolvent_columns,
    series_row,
    spectral_norm,
)

GUARD_NORM_TOL = 1e-4


@dataclass
class FluctuationSample:
    value: object
    z: Optional[complex] = None
    guard_ok: bool = True
    trial_id: int = 0
    n: int = 0


@dataclass
class CombinationSpec:
    alphas: np.ndarray
    betas: np.ndarray

    def __post_init__(self):
        self.alphas = np.atleast_2d(np.asarray(self.alphas, dtype=complex))
        self.betas = np.atleast_2d(np.asarray(self.betas, dtype=complex))
        if self.alphas.shape != self.betas.shape or self.alphas.shape[0] != self.alphas.shape[1]:
            raise InvalidDimensionError(f"alphas {self.alphas.shape} and betas {self.betas.shape} must be equal square arrays")

    @property
    def l(self) -> int:
        return self.alphas.shape[0]


def guard_flag(M, kappa: float = DEFAULT_KAPPA, norm: Optional[float] = None) -> bool:
    n = M.shape[0]
    if norm is None:
        norm = spectral_norm(M / math.sqrt(n), GUARD_NORM_TOL)
    return bool(norm <= kappa)


def _scaled(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidDimensionError(f"expected a square matrix, got shape {M.shape}")
    n = M.shape[0]
    return M / math.sqrt(n), n


def stat_Y(M, z: complex, l: int = 2, kappa: float = DEFAULT_KAPPA, norm: Optional[float] = None):
    """The l x l matrix of normalized resolvent fluctuations; returns ``(Y, guard_ok)``.

    Uses the identity ``R - 1/z - A/z^2 = A^2 R / z^2`` so the two leading
    terms are removed algebraically instead of by subtraction. On a guard
    violation a singular system yields a NaN matrix rather than an error.
    """
    A, n = _scaled(M)
    if not 1 <= l <= n:
        raise InvalidDimensionError(f"l={l} must lie in [1, {n}]")
    ok = guard_flag(M, kappa, norm)
    try:
        cols = resolvent_columns(A, z, range(l))  # n x l
    except NHFluctError:
        if ok:
            raise
        return np.full((l, l), np.nan + 0j), False
    rows = A[:l] @ A  # first l rows of A^2
    Y = math.sqrt(n) * (rows @ cols) / complex(z) ** 2
    return Y, ok


def stat_Y_direct(M, z: complex, l: int = 2) -> np.ndarray:
    """Y computed literally from the definition (reference route)."""
    A, n = _scaled(M)
    R = resolvent(A, z)[:l, :l]
    z = complex(z)
    return math.sqrt(n) * (R - np.eye(l) / z - np.asarray(M)[:l, :l] / (z**2 * math.sqrt(n)))


def stat_f(
    M,
    f: AnalyticFunction,
    i: int,
    j: int,
    kappa: float = DEFAULT_KAPPA,
    norm: Optional[float] = None,
    route: str = "series",
    contour: ContourSpec = ContourSpec(),
):
    """``sqrt(n) [f(A)_ij - f(0) delta_ij - f'(0) m_ij / sqrt(n)]``; returns ``(value, guard_ok)``.

    Indices are 0-based. The constant and linear Taylor terms are dropped
    from the series before summation, so an affine f gives exactly 0.
    ``route="contour"`` evaluates f(A) by contour quadrature instead and
    subtracts the two terms numerically (cross-check only).
    """
    A, n = _scaled(M)
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidDimensionError(f"index ({i}, {j}) out of range for n={n}")
    if f.radius <= kappa:
        raise ValueError(f"{f.name}: convergence radius {f.radius} must exceed kappa={kappa}")
    ok = guard_flag(M, kappa, norm)
    if route == "series":
        if f.degree is not None and f.degree < 2:
            return 0.0, ok
        K, _ = f.n_terms(kappa, SERIES_TAIL_TOL)
        row = series_row(f, A, i, K, skip=2)
        return math.sqrt(n) * row[j], ok
    if route == "contour":
        F = eval_contour(f, A, contour, check_guard=False)
        val = F[i, j] - f.coef(0) * (i == j) - f.coef(1) * A[i, j]
        return math.sqrt(n) * val, ok
    raise ValueError(f"unknown route {route!r}")


def stat_S(Y, spec: CombinationSpec) -> complex:
    """``sum_ij alpha_ij Re(Y_ij) + beta_ij Im(Y_ij)``."""
    Y = np.asarray(Y)
    if Y.shape != spec.alphas.shape:
        raise InvalidDimensionError(f"Y has shape {Y.shape}, combination expects {spec.alphas.shape}")
    return complex(np.sum(spec.alphas * Y.real + spec.betas * Y.imag))


def stat_trace_kernel(M, z: complex, w: complex, kappa: float = DEFAULT_KAPPA, norm: Optional[float] = None):
    """``(1/n) tr(R(z) R(w)^T)``; returns ``(value, guard_ok)``."""
    A, n = _scaled(M)
    ok = guard_flag(M, kappa, norm)
    try:
        Rz = resolvent(A, z)
        Rw = Rz if complex(w) == complex(z) else resolvent(A, w)
    except NHFluctError:
        if ok:
            raise
        return complex(np.nan), False
    # tr(X Y^T) = sum_ij X_ij Y_ij
    return complex(np.sum(Rz * Rw)) / n, ok
