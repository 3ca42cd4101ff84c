"""
Entry laws, substreams and truncation
=====================================

Every matrix is keyed by (seed, stream id), so trial t of an experiment can
be regenerated on its own, in any process.
"""

import numpy as np

from nhfluct.ensemble import DISTRIBUTIONS, EnsembleSpec, band_mask, TruncationPolicy, block_decompose, sample_matrix, truncate

# the four built-in laws are standardized exactly
for name, law in DISTRIBUTIONS.items():
    print(f"{name:12s} mean={law.moment(1):+.1e} var={law.moment(2):.12f} m4={law.moment(4):.4f}")

spec = EnsembleSpec("three-point", n=8, seed=42, stream_id=3)
M = sample_matrix(spec)
print(M)
assert np.array_equal(M, sample_matrix(spec))

# a different stream gives an independent draw
print(np.corrcoef(M.ravel(), sample_matrix(spec.with_stream(4)).ravel())[0, 1])

# truncation: entries in the first l rows/columns are bounded by eps_n n^(1/4),
# the rest by eps_n sqrt(n); clipped entries are redrawn from the conditional law
spec = EnsembleSpec("gaussian", n=256, seed=1)
policy = TruncationPolicy(l=2)
bulk, band = policy.thresholds(256)
print(f"thresholds at n=256: bulk {bulk:.3f}, band {band:.3f}")
M = sample_matrix(spec)
T = truncate(M, spec, policy)
mask = band_mask(256, 2)
over = np.count_nonzero(np.abs(M[mask]) > band) + np.count_nonzero(np.abs(M[~mask]) > bulk)
print("entries redrawn:", over, "of", M.size)
print("sample mean/var after restandardizing:", T.mean(), T.var())

# the leading block split used throughout
b = block_decompose(M, 2)
print(b.X.shape, b.psi.shape, b.phi.shape, b.M_lower.shape)
assert np.array_equal(b.assemble(), M)
