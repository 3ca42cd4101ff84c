"""Brute-force checks of the small identities behind the entry-fluctuation limits.

* ``E|u^T B v|^2 / n = tr(B B^T) / n`` for independent standardized u, v,
  verified by enumerating every Rademacher sign pattern;
* the bilinear-form CLT: ``n^{-1/2} x^T B y`` is asymptotically normal with
  variance ``lim tr(B^T B) / n``, independently across independent (x, y).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ensemble import EnsembleSpec, get_distribution
from .errors import EnumerationTooLargeError, SpecViolationError
from .matfun import spectral_norm

log = logging.getLogger(__name__)

ENUMERATION_MAX_N = 8


def _sign_patterns(n: int) -> np.ndarray:
    """All 2^n vectors in {-1, +1}^n, one per row."""
    bits = (np.arange(2**n)[:, None] >> np.arange(n)) & 1
    return 1.0 - 2.0 * bits


def trace_identity_enumerate(B) -> float:
    """Exact ``E|n^{-1/2} u^T B v|^2`` over Rademacher u, v by full enumeration."""
    B = np.asarray(B, dtype=float)
    n = B.shape[0]
    if B.ndim != 2 or B.shape[1] != n:
        raise ValueError(f"expected a square matrix, got shape {B.shape}")
    if n > ENUMERATION_MAX_N:
        raise EnumerationTooLargeError(f"enumeration over 2^(2n) patterns refused for n={n} > {ENUMERATION_MAX_N}")
    U = _sign_patterns(n)
    Q = U @ B @ U.T  # Q[a, b] = u_a^T B v_b
    return float(np.mean(Q * Q) / n)


def boundedness_onset(distribution, rule=lambda n: n ** (-1.0 / 8.0)) -> Optional[int]:
    """Smallest n with ``max|x| <= eps_n n^{1/4}`` under the default eps_n rule.

    None for unbounded laws. ``eps_n n^{1/4} = n^{1/8}`` is increasing, so
    the first n that works keeps working.
    """
    law = get_distribution(distribution)
    if not math.isfinite(law.max_abs):
        return None
    n = 1
    while law.max_abs > rule(n) * n**0.25 * (1 + 1e-12):
        n += 1
    return n


@dataclass
class QuadraticFormSpec:
    """Deterministic matrices ``B^s`` with ``||B^s|| <= a`` and an entry law for x, y."""

    B_list: Sequence[np.ndarray]
    a: float
    distribution: str = "gaussian"

    def validate(self):
        shapes = {np.shape(B) for B in self.B_list}
        if len(shapes) != 1:
            raise SpecViolationError(f"B matrices must share one square shape, got {shapes}")
        for s, B in enumerate(self.B_list):
            norm = spectral_norm(np.asarray(B, dtype=float), 1e-8)
            if norm > self.a * (1 + 1e-8):
                raise SpecViolationError(f"||B^{s}|| = {norm:.6g} exceeds the bound a = {self.a}")
        n0 = boundedness_onset(self.distribution)
        log.info("%s entries satisfy |x| <= eps_n n^(1/4) from n = %s", self.distribution, n0)
        return self

    @property
    def n(self) -> int:
        return np.shape(self.B_list[0])[0]

    def limit_variances(self) -> np.ndarray:
        """``tr(B^T B) / n`` per component (exact for deterministic B)."""
        return np.array([np.sum(np.asarray(B, dtype=float) ** 2) / self.n for B in self.B_list])


def qf_clt_sample(spec: QuadraticFormSpec, n: Optional[int] = None, seed: int = 0, stream_id: int = 0) -> np.ndarray:
    """One draw of ``Z_n = n^{-1/2} (x_s^T B^s y_s)_s`` with fresh x_s, y_s per component."""
    return qf_clt_samples(spec, 1, n, seed, stream_id)[0]


def qf_clt_samples(spec: QuadraticFormSpec, draws: int, n: Optional[int] = None, seed: int = 0, stream_id: int = 0) -> np.ndarray:
    """``draws`` independent draws of Z_n, shape ``(draws, r)``; batched over draws."""
    spec.validate()
    n = spec.n if n is None else int(n)
    if n != spec.n:
        raise SpecViolationError(f"requested n={n} but B matrices are {spec.n} x {spec.n}")
    law = get_distribution(spec.distribution)
    rng = EnsembleSpec(law.name, n, seed, stream_id).rng()
    r = len(spec.B_list)
    out = np.empty((draws, r))
    batch = max(1, min(draws, 4_000_000 // (2 * n)))
    for start in range(0, draws, batch):
        k = min(batch, draws - start)
        for s, B in enumerate(spec.B_list):
            x = law.sample(rng, (k, n))
            y = law.sample(rng, (k, n))
            out[start : start + k, s] = np.einsum("ij,ij->i", x @ np.asarray(B, dtype=float), y) / math.sqrt(n)
    return out
