import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from chebtrace.chebyshev import (
    ChebyshevInterpolant,
    EllipseBound,
    evaluate,
    evaluate_recurrence,
    interpolate,
    nodes,
    nonnegativity_check,
    uniform_error_bound,
)
from chebtrace.errors import PreconditionError
from chebtrace.funcs import SpectralFunctionKind, ellipse_bound


def test_nodes_closed_forms():
    np.testing.assert_allclose(nodes(0), [0.0], atol=1e-16)
    np.testing.assert_allclose(nodes(1), [math.sqrt(0.5), -math.sqrt(0.5)], atol=1e-15)
    assert abs(nodes(2)[1]) < 1e-16


@given(st.integers(0, 300))
def test_nodes_strictly_decreasing_inside(n):
    x = nodes(n)
    assert x.size == n + 1
    assert np.all(np.diff(x) < 0)
    assert np.all(np.abs(x) < 1)


@given(st.integers(0, 60), st.floats(-50, 50), st.floats(1e-3, 100))
def test_constant_function(n, a, w):
    p = interpolate(lambda x: np.ones_like(x), n, (a, a + w))
    assert p.degree == n
    assert p.coefficients[0] == pytest.approx(1.0, abs=1e-14)
    assert np.all(np.abs(p.coefficients[1:]) < 1e-13)


@given(st.integers(1, 60))
def test_identity_function(n):
    c = interpolate(lambda x: x, n, (-1.0, 1.0)).coefficients
    assert c[1] == pytest.approx(1.0, abs=1e-14)
    assert np.all(np.abs(np.delete(c, 1)) < 1e-14)


def _mp_coefficients(f, n, a, b):
    """The discrete cosine sums evaluated at 40 digits."""
    with mp.workdps(40):
        N = n + 1
        xs = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / N) for k in range(N)]
        fx = [f((b - a) / 2 * x + (b + a) / 2) for x in xs]
        out = []
        for j in range(N):
            s = mp.fsum(fx[k] * mp.cos(j * mp.acos(xs[k])) for k in range(N))
            out.append(s / N if j == 0 else 2 * s / N)
        return np.array([float(c) for c in out])


def test_log_coefficients_high_precision_reference():
    ref = _mp_coefficients(mp.log, 14, mp.mpf("0.1"), mp.mpf("0.9"))
    got = interpolate(np.log, 14, (0.1, 0.9)).coefficients
    np.testing.assert_allclose(got, ref, rtol=0, atol=1e-14)


def test_large_degree_matches_reference():
    ref = _mp_coefficients(mp.exp, 120, mp.mpf(-3), mp.mpf(3))
    got = interpolate(np.exp, 120, (-3.0, 3.0)).coefficients
    np.testing.assert_allclose(got, ref, rtol=0, atol=1e-13)


def test_interpolation_errors():
    with pytest.raises(PreconditionError):
        interpolate(np.log, 5, (1.0, 1.0))
    with pytest.raises(PreconditionError):
        interpolate(np.log, 5, (-1.0, 1.0))  # log of a negative node
    with pytest.raises(ValueError):
        interpolate(np.log, -1, (1.0, 2.0))


def test_scalar_only_function_is_accepted():
    p = interpolate(lambda x: math.exp(x), 10, (0.0, 1.0))
    assert p(0.5) == pytest.approx(math.exp(0.5), rel=1e-10)


def test_quadratic_exact():
    p = interpolate(lambda x: x * x, 2, (-1.0, 1.0))
    assert evaluate(p, 0.5) == pytest.approx(0.25, abs=1e-15)
    assert isinstance(evaluate(p, 0.5), float)


@given(st.integers(0, 80), st.floats(-5, 5), st.floats(0.01, 10))
def test_interpolation_property_at_nodes(n, a, w):
    b = a + w
    f = np.sin
    p = interpolate(f, n, (a, b))
    xk = (b - a) / 2 * nodes(n) + (b + a) / 2
    assert np.max(np.abs(p(xk) - f(xk))) < 1e-10


@given(st.integers(0, 12), st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(0.1, 5))
def test_polynomials_reproduced(deg, seed, a, w):
    q = np.polynomial.Polynomial(np.random.default_rng(seed).standard_normal(deg + 1))
    b = a + w
    p = interpolate(q, deg + 3, (a, b))
    grid = np.linspace(a, b, 1000)
    ref = q(grid)
    scale = np.max(np.abs(ref)) + 1e-300
    assert np.max(np.abs(p(grid) - ref)) <= 1e-8 * scale


@given(st.integers(0, 200), st.integers(0, 2**32 - 1))
def test_clenshaw_agrees_with_recurrence(n, seed):
    c = np.random.default_rng(seed).standard_normal(n + 1)
    p = ChebyshevInterpolant(c, (0.0, 2.0))
    x = np.linspace(0.0, 2.0, 97)
    clen, rec = evaluate(p, x), evaluate_recurrence(p, x)
    scale = np.sum(np.abs(c))
    assert np.max(np.abs(clen - rec)) <= 1e-10 * scale


def test_log_error_at_half_within_bound():
    bound, iv = ellipse_bound(SpectralFunctionKind.logdet(), (1.0, 9.0))
    assert tuple(iv) == pytest.approx((0.1, 0.9))
    p = interpolate(np.log, 14, iv)
    assert abs(p(0.5) - math.log(0.5)) <= uniform_error_bound(bound, 14)


def test_uniform_error_bound_arithmetic():
    assert uniform_error_bound(EllipseBound(2.0, 1.0), 3) == 0.5
    assert uniform_error_bound(EllipseBound(2.0, 1.0), 4) == 0.25
    assert uniform_error_bound(EllipseBound(1.5, 1.0), 10**6) == 0.0
    with pytest.raises(PreconditionError):
        EllipseBound(1.0, 1.0)
    with pytest.raises(PreconditionError):
        EllipseBound(2.0, 0.0)


def test_nonnegativity_check_arithmetic():
    assert nonnegativity_check(EllipseBound(2.0, 1.0, 1.0), 3)
    assert not nonnegativity_check(EllipseBound(2.0, 1.0, 0.4), 3)
    assert nonnegativity_check(EllipseBound(2.0, 1.0, 0.4), 4)
    with pytest.raises(PreconditionError):
        nonnegativity_check(EllipseBound(2.0, 1.0), 3)


# planner intervals of the four sign-definite functions
BOUND_CASES = [
    ("log", np.log, SpectralFunctionKind.logdet(), (1.0, 9.0)),
    ("inv", lambda x: 1.0 / x, SpectralFunctionKind.trace_inverse(), (0.1, 10.0)),
    ("exp", np.exp, SpectralFunctionKind.estrada(), (-10.0, 10.0)),
    ("sqrt", np.sqrt, SpectralFunctionKind.schatten(1.0), (0.1, 1.0)),
]


@pytest.mark.parametrize("name,f,kind,interval", BOUND_CASES, ids=[c[0] for c in BOUND_CASES])
def test_sup_error_within_bound(name, f, kind, interval):
    bound, iv = ellipse_bound(kind, interval)
    grid = np.linspace(iv.a, iv.b, 10_000)
    exact = f(grid)
    for n in range(2, 41):
        p = interpolate(f, n, iv)
        err = np.max(np.abs(p(grid) - exact))
        assert err <= uniform_error_bound(bound, n), (name, n)
        if nonnegativity_check(bound, n):
            # |f| >= L > 0: the interpolant keeps the sign of f (log is negative here)
            assert np.min(p(grid) * np.sign(exact)) >= 0
