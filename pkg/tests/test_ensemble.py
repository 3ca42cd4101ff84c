import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from nhfluct.ensemble import (
    DISTRIBUTIONS,
    EnsembleSpec,
    TruncationPolicy,
    band_mask,
    block_decompose,
    get_distribution,
    sample_matrix,
    truncate,
)
from nhfluct.errors import DegenerateTruncationError, InvalidDimensionError, InvalidSplitError

NAMES = sorted(DISTRIBUTIONS)


@pytest.mark.parametrize("name", NAMES)
def test_law_is_standardized(name):
    law = get_distribution(name)
    assert law.moment(0) == pytest.approx(1.0, abs=1e-10)
    assert abs(law.moment(1)) <= 1e-10
    assert law.moment(2) == pytest.approx(1.0, abs=1e-10)
    assert math.isfinite(law.moment(4))


@pytest.mark.parametrize(
    "name, m4",
    [("gaussian", 3.0), ("rademacher", 1.0), ("three-point", 2.0), ("uniform", 1.8)],
)
def test_fourth_moment(name, m4):
    assert get_distribution(name).moment(4) == pytest.approx(m4, abs=1e-10)


def test_unknown_distribution():
    with pytest.raises(ValueError):
        get_distribution("cauchy")
    assert get_distribution("standard-gaussian") is DISTRIBUTIONS["gaussian"]


def test_zero_order_rejected():
    with pytest.raises(InvalidDimensionError):
        sample_matrix(EnsembleSpec("gaussian", 0))


@pytest.mark.parametrize("n", [1, 5, 64])
def test_rademacher_support(n):
    M = sample_matrix(EnsembleSpec("rademacher", n, seed=n))
    assert set(np.unique(M)) <= {-1.0, 1.0}


def test_gaussian_grand_mean():
    M = sample_matrix(EnsembleSpec("gaussian", 1000, seed=1))
    assert abs(M.mean()) <= 0.004


def test_three_point_fourth_moment_sampled():
    x = get_distribution("three-point").sample(EnsembleSpec(seed=2).rng(), 10**6)
    assert abs(np.mean(x**4) - 2.0) <= 0.02


def test_reproducible_and_streams_differ():
    a = EnsembleSpec("gaussian", 200, seed=9, stream_id=3)
    assert np.array_equal(sample_matrix(a), sample_matrix(a))
    X = sample_matrix(a).ravel()
    Y = sample_matrix(a.with_stream(4)).ravel()
    assert not np.array_equal(X, Y)
    r = np.corrcoef(X, Y)[0, 1]
    assert abs(r) <= 3 / math.sqrt(X.size)


def test_seed_changes_matrix():
    a = EnsembleSpec("uniform", 50, seed=1)
    b = EnsembleSpec("uniform", 50, seed=2)
    assert not np.array_equal(sample_matrix(a), sample_matrix(b))


def test_gaussian_clipped_variance():
    mass, mean, var = get_distribution("gaussian").conditional_moments(3.0)
    num, _ = integrate.quad(lambda x: x * x * stats.norm.pdf(x), -3, 3)
    assert mean == 0.0
    assert var == pytest.approx(num / mass, abs=1e-12)
    assert var == pytest.approx(0.9733, abs=5e-5)


def test_rademacher_degenerate_threshold():
    n = 16
    policy = TruncationPolicy(l=2, eps_n=0.5 / math.sqrt(n))
    M = sample_matrix(EnsembleSpec("rademacher", n))
    with pytest.raises(DegenerateTruncationError):
        truncate(M, EnsembleSpec("rademacher", n), policy)


def test_rademacher_unchanged_by_wide_thresholds():
    n = 64
    spec = EnsembleSpec("rademacher", n, seed=4)
    policy = TruncationPolicy(l=2)
    bulk, band = policy.thresholds(n)
    assert bulk >= 1 and band >= 1
    M = sample_matrix(spec)
    assert np.array_equal(truncate(M, spec, policy), M)


def test_thresholds_respected_without_rescaling():
    n = 256
    spec = EnsembleSpec("gaussian", n, seed=5)
    policy = TruncationPolicy(l=3, restandardize=False)
    bulk, band = policy.thresholds(n)
    T = truncate(sample_matrix(spec), spec, policy)
    mask = band_mask(n, 3)
    assert np.abs(T[mask]).max() <= band
    assert np.abs(T[~mask]).max() <= bulk


def test_truncate_reproducible():
    n = 128
    spec = EnsembleSpec("gaussian", n, seed=6, stream_id=2)
    M = sample_matrix(spec)
    p = TruncationPolicy(l=2)
    assert np.array_equal(truncate(M, spec, p), truncate(M, spec, p))


def test_default_eps_rule_decreases():
    p = TruncationPolicy()
    eps = [p.eps(n) for n in (16, 256, 4096, 2**20)]
    assert all(b < a for a, b in zip(eps, eps[1:]))
    assert p.eps(256) == pytest.approx(0.5)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("cutoff", [1.2, 1.5, 2.0, 3.0])
def test_restandardized_conditional_law(name, cutoff):
    law = get_distribution(name)
    mass, mean, var = law.conditional_moments(cutoff)
    if var == 0.0:
        return
    sd = math.sqrt(var)
    m1 = law.moment(1, cutoff) / mass
    m2 = law.moment(2, cutoff) / mass
    # moments of (x - mean) / sd under the conditional law
    assert abs((m1 - mean) / sd) <= 1e-8
    assert abs((m2 - 2 * mean * m1 + mean**2) / var - 1.0) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(n=st.integers(4, 40), l=st.integers(1, 3), seed=st.integers(0, 2**32), name=st.sampled_from(NAMES))
def test_truncate_idempotent(n, l, seed, name):
    spec = EnsembleSpec(name, n, seed)
    policy = TruncationPolicy(l=l, restandardize=False)
    try:
        once = truncate(sample_matrix(spec), spec, policy)
    except DegenerateTruncationError:
        return
    assert np.array_equal(truncate(once, spec, policy), once)


def test_truncate_rejects_bad_l():
    with pytest.raises(InvalidSplitError):
        truncate(np.eye(3), EnsembleSpec(n=3), TruncationPolicy(l=4))


def test_block_identity():
    b = block_decompose(np.eye(4), 2)
    assert np.array_equal(b.X, np.eye(2))
    assert not b.psi.any() and not b.phi.any()
    assert np.array_equal(b.M_lower, np.eye(2))


def test_block_l1_and_reassembly():
    M = sample_matrix(EnsembleSpec("gaussian", 8, seed=7))
    assert np.array_equal(block_decompose(M, 1).X, M[:1, :1])
    for l in range(1, 8):
        assert np.array_equal(block_decompose(M, l).assemble(), M)


@pytest.mark.parametrize("l", [0, 4, 5])
def test_block_invalid_split(l):
    with pytest.raises(InvalidSplitError):
        block_decompose(np.eye(4), l)
