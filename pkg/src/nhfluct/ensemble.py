"""Random real matrices with i.i.d. standardized entries.

Four entry laws are built in, addressed by stable string names:

``"gaussian"``     standard normal
``"rademacher"``   +1 / -1 with probability 1/2 each
``"three-point"``  +sqrt(2), -sqrt(2) w.p. 1/4 each, 0 w.p. 1/2
``"uniform"``      uniform on [-sqrt(3), sqrt(3)]

All of them have mean 0, variance 1 and a finite fourth moment, so any
sequence of matrices built from them meets the moment and Lindeberg-type
requirements automatically; those are documented, not checked at runtime.

Randomness is keyed by ``(seed, stream_id)`` through
:class:`numpy.random.SeedSequence` so trial ``k`` draws the same matrix no
matter which worker runs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, stats

from .errors import DegenerateTruncationError, InvalidDimensionError, InvalidSplitError

# spawn_key suffixes for the independent substreams of one trial
_SAMPLE_KEY = 0
_TRUNCATE_KEY = 1


class Distribution:
    """An entry law with mean 0 and variance 1."""

    name: str
    max_abs: float
    discrete: bool

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        raise NotImplementedError

    def moment(self, k: int, cutoff: float = math.inf) -> float:
        """E[x^k ; |x| <= cutoff] (not normalized by the kept mass)."""
        raise NotImplementedError

    def conditional_moments(self, cutoff: float) -> Tuple[float, float, float]:
        """Return ``(mass, mean, variance)`` of the law conditioned on ``|x| <= cutoff``."""
        mass = self.moment(0, cutoff)
        if mass <= 0.0:
            return 0.0, math.nan, 0.0
        mean = self.moment(1, cutoff) / mass
        var = self.moment(2, cutoff) / mass - mean**2
        return mass, mean, max(var, 0.0)

    def sample_conditional(self, rng: np.random.Generator, size: int, cutoff: float) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class DiscreteLaw(Distribution):
    discrete = True

    def __init__(self, name: str, values: Sequence[float], probs: Sequence[Fraction], squares: Sequence[Fraction]):
        self.name = name
        self.values = np.asarray(values, dtype=float)
        self.probs = tuple(Fraction(p) for p in probs)
        # exact x^2 per support point, for rational enumeration
        self.squares = tuple(Fraction(s) for s in squares)
        self.max_abs = float(np.max(np.abs(self.values)))
        self._p = np.array([float(p) for p in self.probs])

    def sample(self, rng, shape):
        return rng.choice(self.values, size=shape, p=self._p)

    def moment(self, k, cutoff=math.inf):
        keep = np.abs(self.values) <= cutoff
        return float(np.sum(self._p[keep] * self.values[keep] ** k))

    def square_law(self) -> Dict[Fraction, Fraction]:
        """Exact law of x^2 as ``{value: probability}``."""
        law: Dict[Fraction, Fraction] = {}
        for s, p in zip(self.squares, self.probs):
            law[s] = law.get(s, Fraction(0)) + p
        return law

    def sample_conditional(self, rng, size, cutoff):
        keep = np.abs(self.values) <= cutoff
        p = self._p[keep] / self._p[keep].sum()
        return rng.choice(self.values[keep], size=size, p=p)


class ContinuousLaw(Distribution):
    discrete = False

    def __init__(self, name: str, frozen, sampler: Callable[[np.random.Generator, tuple], np.ndarray]):
        self.name = name
        self._dist = frozen
        self._sampler = sampler
        lo, hi = frozen.support()
        self.max_abs = float(max(abs(lo), abs(hi)))

    def sample(self, rng, shape):
        return self._sampler(rng, shape)

    def moment(self, k, cutoff=math.inf):
        c = min(cutoff, self.max_abs)
        if c <= 0.0:
            return 0.0
        if k == 0:
            return float(self._dist.cdf(c) - self._dist.cdf(-c))
        if k % 2 == 1:
            return 0.0  # all built-in continuous laws are symmetric
        val, _ = integrate.quad(lambda x: x**k * self._dist.pdf(x), -c, c, epsabs=1e-13, epsrel=1e-12, limit=200)
        return float(val)

    def sample_conditional(self, rng, size, cutoff):
        c = min(cutoff, self.max_abs)
        lo, hi = self._dist.cdf(-c), self._dist.cdf(c)
        u = rng.uniform(lo, hi, size=size)
        return np.clip(self._dist.ppf(u), -c, c)


_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)

DISTRIBUTIONS: Dict[str, Distribution] = {
    "gaussian": ContinuousLaw("gaussian", stats.norm(), lambda rng, shape: rng.standard_normal(shape)),
    "rademacher": DiscreteLaw("rademacher", [-1.0, 1.0], [Fraction(1, 2)] * 2, [1, 1]),
    "three-point": DiscreteLaw(
        "three-point",
        [-_SQRT2, 0.0, _SQRT2],
        [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)],
        [2, 0, 2],
    ),
    "uniform": ContinuousLaw(
        "uniform",
        stats.uniform(loc=-_SQRT3, scale=2 * _SQRT3),
        lambda rng, shape: rng.uniform(-_SQRT3, _SQRT3, size=shape),
    ),
}
_ALIASES = {"standard-gaussian": "gaussian", "normal": "gaussian", "threepoint": "three-point"}


def get_distribution(name) -> Distribution:
    if isinstance(name, Distribution):
        return name
    key = _ALIASES.get(name, name)
    try:
        return DISTRIBUTIONS[key]
    except KeyError:
        raise ValueError(f"unknown distribution {name!r}; choose from {sorted(DISTRIBUTIONS)}") from None


@dataclass(frozen=True)
class EnsembleSpec:
    """Entry law, matrix order and the RNG substream of one draw."""

    distribution: str = "gaussian"
    n: int = 256
    seed: int = 0
    stream_id: int = 0

    @property
    def law(self) -> Distribution:
        return get_distribution(self.distribution)

    def with_stream(self, stream_id: int) -> "EnsembleSpec":
        return EnsembleSpec(self.distribution, self.n, self.seed, stream_id)

    def with_n(self, n: int) -> "EnsembleSpec":
        return EnsembleSpec(self.distribution, n, self.seed, self.stream_id)

    def rng(self, purpose: int = _SAMPLE_KEY) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=int(self.seed) & (2**64 - 1), spawn_key=(int(self.stream_id), purpose))
        return np.random.default_rng(ss)


def sample_matrix(spec: EnsembleSpec) -> np.ndarray:
    """Draw the n x n matrix M with i.i.d. entries from ``spec.distribution``."""
    if int(spec.n) < 1:
        raise InvalidDimensionError(f"matrix order must be >= 1, got {spec.n}")
    return spec.law.sample(spec.rng(), (int(spec.n), int(spec.n)))


@dataclass(frozen=True)
class TruncationPolicy:
    """Thresholds eps_n*sqrt(n) off the tracked band, eps_n*n^(1/4) inside it."""

    l: int = 2
    eps_n: Optional[float] = None
    restandardize: bool = True

    def eps(self, n: int) -> float:
        return float(n) ** (-1.0 / 8.0) if self.eps_n is None else float(self.eps_n)

    def thresholds(self, n: int) -> Tuple[float, float]:
        """``(bulk, band)`` magnitude thresholds at order n."""
        e = self.eps(n)
        return e * math.sqrt(n), e * n**0.25


def band_mask(n: int, l: int) -> np.ndarray:
    """Boolean mask of the first l rows and columns."""
    mask = np.zeros((n, n), dtype=bool)
    mask[:l, :] = True
    mask[:, :l] = True
    return mask


def truncate(M: np.ndarray, spec: EnsembleSpec, policy: TruncationPolicy) -> np.ndarray:
    """Replace the law of each entry by its restriction to ``|x| <= threshold``.

    Entries beyond their threshold are redrawn from the conditional law on a
    substream of ``(spec.seed, spec.stream_id)`` separate from the one used
    by :func:`sample_matrix`. With ``policy.restandardize`` every entry is
    then mapped through ``(x - mean_c) / sd_c`` where ``mean_c``, ``sd_c``
    are the exact moments of the conditional law, so the result has mean 0
    and variance 1. The magnitude bounds refer to the clipped values; the
    rescaling inflates them by ``1/sd_c``, which tends to 1.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.ndim != 2 or M.shape[1] != n:
        raise InvalidDimensionError(f"expected a square matrix, got shape {M.shape}")
    if not 1 <= policy.l <= n:
        raise InvalidSplitError(f"tracked-index count l={policy.l} must lie in [1, {n}]")
    law = spec.law
    bulk_t, band_t = policy.thresholds(n)
    band = band_mask(n, policy.l)
    rng = spec.rng(_TRUNCATE_KEY)
    out = M.copy()
    for region, t in ((~band, bulk_t), (band, band_t)):
        if not region.any():
            continue
        mass, mean, var = law.conditional_moments(t)
        if mass <= 0.0 or var <= 0.0:
            raise DegenerateTruncationError(
                f"{law.name} restricted to |x| <= {t:.6g} is degenerate (mass={mass:.3g}, var={var:.3g})"
            )
        over = region & (np.abs(out) > t)
        k = int(over.sum())
        if k:
            out[over] = law.sample_conditional(rng, k, t)
        if policy.restandardize:
            out[region] = (out[region] - mean) / math.sqrt(var)
    return out


@dataclass
class BlockDecomposition:
    X: np.ndarray
    psi: np.ndarray
    phi: np.ndarray
    M_lower: np.ndarray

    def assemble(self) -> np.ndarray:
        return np.block([[self.X, self.psi], [self.phi, self.M_lower]])


def block_decompose(M: np.ndarray, l: int) -> BlockDecomposition:
    """Split M into ``[[X, psi], [phi, M_lower]]`` with X the leading l x l block."""
    M = np.asarray(M)
    n = M.shape[0]
    if not 1 <= l < n:
        raise InvalidSplitError(f"split index l={l} must satisfy 1 <= l < n={n}")
    return BlockDecomposition(X=M[:l, :l].copy(), psi=M[:l, l:].copy(), phi=M[l:, :l].copy(), M_lower=M[l:, l:].copy())
