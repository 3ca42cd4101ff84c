import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nhfluct.errors import (
    ConvergenceError,
    GuardViolationError,
    InvalidDimensionError,
    SingularResolventError,
)
from nhfluct.matfun import (
    AnalyticFunction,
    ContourSpec,
    eval_contour,
    eval_series,
    exp_function,
    geometric_shifted,
    monomial,
    parse_function,
    poly,
    resolvent,
    spectral_norm,
)
from nhfluct.suites import random_bounded_matrices, route_equivalence


def rand(n, seed, scale=1.0):
    return scale * np.random.default_rng(seed).standard_normal((n, n))


def test_constant_series():
    A = random_bounded_matrices(1, 5, 2.0, 0)[0]
    assert np.array_equal(eval_series(poly([3.5]), A), 3.5 * np.eye(5))


def test_nilpotent_square():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert not eval_series(monomial(2), A).any()


def test_exp_diagonal():
    F, info = eval_series(exp_function(), np.diag([1.0, 2.0]), full_output=True)
    assert np.max(np.abs(F - np.diag([math.e, math.exp(2)]))) <= 1e-12
    assert info.tail <= 1e-12
    assert info.norm == pytest.approx(2.0)


def test_series_guard_violation():
    with pytest.raises(GuardViolationError) as exc:
        eval_series(monomial(2), np.diag([3.0, 1.0]))
    assert exc.value.norm == pytest.approx(3.0)


def test_series_rejects_nonsquare():
    with pytest.raises(InvalidDimensionError):
        eval_series(monomial(2), np.zeros((2, 3)))


def test_contour_identity():
    A = random_bounded_matrices(1, 7, 2.0, 1)[0]
    assert np.max(np.abs(eval_contour(poly([1.0]), A) - np.eye(7))) <= 1e-10


def test_contour_scalar_exp():
    F = eval_contour(exp_function(), np.array([[0.5]]))
    assert abs(F[0, 0] - math.exp(0.5)) <= 1e-10
    assert abs(F[0, 0] - 1.648721) <= 1e-6


def test_contour_rejects_large_norm():
    with pytest.raises(GuardViolationError):
        eval_contour(monomial(2), np.diag([2.6, 0.0]))


def test_contour_inside_convergence_radius():
    with pytest.raises(GuardViolationError):
        eval_contour(geometric_shifted(2.0), np.zeros((2, 2)))


def test_route_equivalence_suite():
    chk = route_equivalence()
    assert chk.passed, chk


@settings(max_examples=30, deadline=None)
@given(
    coeffs=st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=11),
    seed=st.integers(0, 2**31),
    n=st.integers(1, 6),
)
def test_route_equivalence_property(coeffs, seed, n):
    A = random_bounded_matrices(1, n, 2.0, seed)[0]
    f = poly(coeffs)
    assert np.max(np.abs(eval_series(f, A) - eval_contour(f, A))) <= 1e-10


def test_resolvent_zero_matrix():
    assert np.allclose(resolvent(np.zeros((3, 3)), 2.5 + 1j), np.eye(3) / (2.5 + 1j), rtol=0, atol=1e-15)


def test_resolvent_scalar():
    assert resolvent(np.array([[1.0]]), 3)[0, 0] == 0.5


def test_resolvent_residual_large():
    A = rand(100, 2) / 10.0
    R = resolvent(A, 3)
    assert np.max(np.abs((3 * np.eye(100) - A) @ R - np.eye(100))) <= 1e-10


def test_resolvent_singular():
    with pytest.raises(SingularResolventError):
        resolvent(np.diag([3.0, 1.0]), 3)


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    n=st.integers(1, 12),
    r=st.floats(2.5, 6.0),
    theta=st.floats(0, 2 * math.pi),
)
def test_resolvent_residual_and_guard_bound(seed, n, r, theta):
    A = random_bounded_matrices(1, n, 2.25, seed)[0]
    z = r * complex(math.cos(theta), math.sin(theta))
    R = resolvent(A, z)
    assert np.max(np.abs((z * np.eye(n) - A) @ R - np.eye(n))) <= 1e-10
    assert np.linalg.norm(R, 2) <= 4.0


def test_spectral_norm_basic():
    assert spectral_norm(np.eye(5)) == pytest.approx(1.0, rel=1e-10)
    assert spectral_norm(np.diag([3.0, -1.0])) == pytest.approx(3.0, rel=1e-10)
    assert spectral_norm(np.zeros((4, 4))) == 0.0


def _svd2(A):
    # largest singular value of a real 2x2 matrix in closed form
    a, b, c, d = A.ravel()
    s = a * a + b * b + c * c + d * d
    det = a * d - b * c
    return math.sqrt((s + math.sqrt(max(s * s - 4 * det * det, 0.0))) / 2)


@pytest.mark.parametrize("seed", range(10))
def test_spectral_norm_2x2_closed_form(seed):
    A = rand(2, seed)
    tol = 1e-10
    assert abs(spectral_norm(A, tol) - _svd2(A)) <= tol * _svd2(A)


def test_spectral_norm_complex_and_rectangular():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))
    assert spectral_norm(A) == pytest.approx(np.linalg.norm(A, 2), rel=1e-8)


def test_spectral_norm_convergence_error():
    with pytest.raises(ConvergenceError) as exc:
        spectral_norm(rand(30, 4), tol=1e-15, maxiter=3)
    assert exc.value.last > 0


@settings(max_examples=30, deadline=None)
@given(
    A=arrays(np.float64, (4, 4), elements=st.floats(-3, 3, allow_nan=False)),
    c=st.floats(-5, 5, allow_nan=False).filter(lambda x: abs(x) > 1e-3),
)
def test_spectral_norm_scaling(A, c):
    base = spectral_norm(A, 1e-12)
    if base < 1e-6:
        return
    assert spectral_norm(c * A, 1e-12) == pytest.approx(abs(c) * base, rel=1e-8)


def test_n_terms_tail():
    K, tail = exp_function().n_terms(2.25)
    assert tail <= 1e-12
    assert sum(2.25**k / math.factorial(k) for k in range(K + 1, K + 60)) <= 1e-12
    K, tail = monomial(3).n_terms(2.25)
    assert (K, tail) == (3, 0.0)


def test_n_terms_outside_radius():
    with pytest.raises(ConvergenceError):
        geometric_shifted(2.0).n_terms(2.25)


def test_divergent_rule():
    f = AnalyticFunction(lambda k: 1.0, radius=10.0, name="bogus")
    with pytest.raises(ConvergenceError):
        f.n_terms(2.0)


def test_parse_function():
    assert parse_function("monomial:3").coefs(3).tolist() == [0, 0, 0, 1]
    assert parse_function("exp").coef(3) == pytest.approx(1 / 6)
    assert parse_function("poly:1,2.5").coefs(1).tolist() == [1.0, 2.5]
    g = parse_function("geometric-shifted:3")
    assert g.radius == 3 and g.coef(1) == pytest.approx(1 / 9)
    assert parse_function("poly:1j,2").coef(0) == 1j
    with pytest.raises(ValueError):
        parse_function("sin")


def test_function_pointwise_matches_series():
    f = AnalyticFunction(lambda k: 1.0 / math.factorial(k), math.inf, "exp-series")
    z = np.array([0.3, -1.2 + 0.4j, 2.0])
    assert np.allclose(f(z), np.exp(z), rtol=0, atol=1e-13)
    assert exp_function().is_real and not poly([1j, 1]).is_real


def test_contour_points():
    pts = ContourSpec(2.5, 8).points()
    assert np.allclose(np.abs(pts), 2.5)
    assert pts[0] == 2.5
