import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhfluct import theory
from nhfluct.errors import PoleError
from nhfluct.fluctstat import CombinationSpec
from nhfluct.matfun import ContourSpec, exp_function, monomial, poly

# admissible evaluation points: |z| >= 2.5
points = st.builds(
    lambda r, t: r * complex(math.cos(t), math.sin(t)),
    st.floats(2.5, 8.0),
    st.floats(0, 2 * math.pi),
)


def test_kernel_at_three():
    assert theory.kernel_Y(3, 3) == pytest.approx(1 / 648, rel=1e-14)
    assert abs(theory.kernel_Y(3, 3).real - 0.00154321) < 5e-9


def test_kernel_decays():
    vals = [abs(theory.kernel_Y(10.0**k, 3)) for k in range(1, 6)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-14


@settings(max_examples=100)
@given(z=points, w=points)
def test_kernel_hermitian(z, w):
    assert theory.kernel_Y(w, z) == np.conj(theory.kernel_Y(z, w))


@settings(max_examples=100)
@given(z=points)
def test_kernel_diagonal_positive(z):
    k = theory.kernel_Y(z, z)
    assert k.imag == 0 and k.real > 0


def test_kernel_pole():
    with pytest.raises(PoleError):
        theory.kernel_Y(1, 1)
    with pytest.raises(PoleError):
        theory.trace_kernel_limit(0.5, 2)


def test_pseudo_kernel():
    z, w = 2.5 + 1j, -3 + 0.5j
    assert theory.pseudo_kernel_Y(z, w) == theory.kernel_Y(z, np.conj(w))


def test_trace_kernel_limit():
    assert theory.trace_kernel_limit(3, 3) == 0.125


@pytest.mark.parametrize("s", range(2, 9))
@pytest.mark.parametrize("t", range(2, 9))
def test_monomial_covariance_exact(s, t):
    assert theory.covariance_Z(monomial(s), monomial(t)) == (1.0 if s == t else 0.0)


def test_low_degree_has_no_fluctuation():
    assert theory.covariance_Z(monomial(1), monomial(1)) == 0
    assert theory.covariance_Z(poly([3, 2]), exp_function()) == 0


def test_exp_covariance_vs_exact_sum():
    exact = sum(Fraction(1, math.factorial(r) ** 2) for r in range(2, 40))
    val, tail = theory.covariance_Z(exp_function(), exp_function(), full_output=True)
    assert abs(val - float(exact)) <= 1e-15
    assert tail <= 1e-15
    assert abs(val - 0.2795853) <= 1e-7


@pytest.mark.parametrize(
    "f, g",
    [
        (monomial(2), monomial(2)),
        (monomial(2), monomial(3)),
        (exp_function(), exp_function()),
        (exp_function(), monomial(4)),
        (poly([0, 0, 1j, 2]), poly([1, 1, 1, 1, 1])),
        (theory.resolvent_function(3), theory.resolvent_function(2.6 + 1j)),
    ],
)
def test_series_vs_contour(f, g):
    d = theory.covariance_Z(f, g) - theory.covariance_Z_contour(f, g)
    assert abs(d) <= 1e-8


def test_contour_needs_radius_above_one():
    with pytest.raises(PoleError):
        theory.covariance_Z_contour(monomial(2), monomial(2), ContourSpec(1.0))


@settings(max_examples=50)
@given(z=points, w=points)
def test_resolvent_function_covariance_is_kernel(z, w):
    f, g = theory.resolvent_function(z), theory.resolvent_function(w)
    assert abs(theory.covariance_Z(f, g) - theory.kernel_Y(z, w)) <= 1e-14


@pytest.mark.parametrize("z", [2.5, 3.0, -4.0, 7.5])
def test_real_kernels_real_arguments(z):
    rr, ii, ri = theory.real_kernels(z, z)
    assert rr == pytest.approx(theory.kernel_Y(z, z), rel=1e-15)
    assert abs(ii) <= 1e-18 and abs(ri) <= 1e-18


def test_real_kernels_three():
    rr, ii, ri = theory.real_kernels(3, 3)
    assert rr == pytest.approx(1 / 648, rel=1e-14)
    assert ii == 0 and ri == 0


@settings(max_examples=100)
@given(z=points, w=points)
def test_real_kernels_are_real(z, w):
    rr, ii, ri = theory.real_kernels(z, w)
    scale = abs(theory.kernel_Y(z, w)) + abs(theory.kernel_Y(z, np.conj(w)))
    for k in (rr, ii, ri):
        assert abs(k.imag) <= 1e-14 * scale


@settings(max_examples=100)
@given(z=points)
def test_imaginary_part_variance_nonnegative(z):
    # K_ImIm(z, z) is Var(Im Y(z)); at w = conj(z) the sign flips because Im Y(conj z) = -Im Y(z)
    _, ii, _ = theory.real_kernels(z, z)
    _, ii_conj, _ = theory.real_kernels(z, np.conj(z))
    assert ii.real >= -1e-18
    assert ii_conj.real == pytest.approx(-ii.real, abs=1e-18)


@settings(max_examples=50)
@given(z=points)
def test_real_and_imaginary_parts_sum_to_kernel(z):
    rr, ii, _ = theory.real_kernels(z, z)
    assert abs(rr + ii - theory.kernel_Y(z, z)) <= 1e-15


def test_real_kernels_by_simulating_the_limit():
    # the limit law of Y(z) is that of the entry statistic of 1/(z - zeta),
    # i.e. sum_r z^-(r+1) g_r with i.i.d. standard normal g_r
    rng = np.random.default_rng(0)
    z, w = 2.6 + 1.1j, -2.5 + 0.7j
    r = np.arange(2, 80)
    G = rng.standard_normal((200_000, r.size))
    Yz = G @ (z ** -(r + 1.0))
    Yw = G @ (w ** -(r + 1.0))
    emp = [
        np.cov(Yz.real, Yw.real)[0, 1],
        np.cov(Yz.imag, Yw.imag)[0, 1],
        np.cov(Yz.real, Yw.imag)[0, 1],
    ]
    for e, k in zip(emp, theory.real_kernels(z, w)):
        assert abs(e - k.real) <= 5e-5


def test_covariance_S_examples():
    z = 2.5 + 1j
    e11 = np.array([[1, 0], [0, 0]])
    zero = np.zeros((2, 2))
    rr, ii, ri = theory.real_kernels(z, z)
    assert theory.covariance_S(z, z, CombinationSpec(e11, zero)) == pytest.approx(rr)
    assert theory.covariance_S(z, z, CombinationSpec(zero, e11)) == pytest.approx(ii)
    both = theory.covariance_S(z, z, CombinationSpec(e11, e11))
    assert both == pytest.approx(rr + ii + 2 * ri.real)


def test_covariance_S_distinct_entries_add():
    z = 3 - 0.5j
    a = CombinationSpec(np.ones((2, 2)), np.zeros((2, 2)))
    rr, _, _ = theory.real_kernels(z, z)
    assert theory.covariance_S(z, z, a) == pytest.approx(4 * rr)


def test_entry_variance_parts():
    f = poly([0, 0, 1 + 2j, 3j])
    assert theory.entry_variance(f) == pytest.approx(1 + 4 + 9)
    assert theory.entry_variance(f, "re") == pytest.approx(1)
    assert theory.entry_variance(f, "im") == pytest.approx(13)
    with pytest.raises(ValueError):
        theory.entry_variance(f, "abs")


def test_kernel_table_hermitian():
    T = theory.kernel_table([2.5, 3j, -2.7 + 1j])
    assert np.array_equal(T, T.conj().T)
