from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsruin.errors import DegenerateRoots, NumericalError
from gsruin.polyalg import (
    Poly,
    adjugate,
    check_separation,
    det,
    divided_difference,
    divided_differences,
    faddeev_leverrier,
    poly_arith,
    poly_roots,
)

finite = st.floats(-5, 5, allow_nan=False)


def test_strips_trailing_zeros_and_degree():
    p = Poly([1.0, 2.0, 0.0, 0.0])
    assert p.degree == 1
    assert p.coeffs == (1.0, 2.0)
    assert Poly([0.0]).is_zero()


def test_arithmetic_matches_numpy():
    a, b = Poly([1, -2, 3]), Poly([0.5, 4])
    P = np.polynomial.Polynomial
    for kind, ref in (("add", P(a.coeffs) + P(b.coeffs)), ("sub", P(a.coeffs) - P(b.coeffs)),
                      ("mul", P(a.coeffs) * P(b.coeffs))):
        got = poly_arith(a, b, kind)
        np.testing.assert_allclose(np.real(got.coeffs), ref.coef)


def test_compose_and_derivative():
    p = Poly([1, 0, 1])  # 1 + s^2
    q = Poly([1, 1])  # 1 + s
    comp = p.compose(q)
    for s in (0.3, -2.0, 1 + 1j):
        assert comp(s) == pytest.approx(p(q(s)))
    assert p.derivative().coeffs == (0, 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False), min_size=1, max_size=6))
def test_roots_recover_from_roots(roots):
    pts = np.array(roots)
    if len(pts) > 1:
        gaps = np.abs(pts[:, None] - pts[None, :]) + np.eye(len(pts)) * 10
        if gaps.min() < 1e-2:
            return
    p = Poly.from_roots(roots)
    found = poly_roots(p)
    for r in roots:
        assert min(abs(r - f) for f in found) < 1e-7 * max(1, abs(r))


def test_zero_polynomial_roots_raise():
    with pytest.raises(NumericalError):
        poly_roots(Poly([0.0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_adjugate_identity(n, seed):
    r = np.random.default_rng(seed)
    a = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n))
    adj = adjugate(a)
    d = det(a)
    np.testing.assert_allclose(a @ adj, d * np.eye(n), atol=1e-9 * max(1, abs(d)) * n)
    assert d == pytest.approx(np.linalg.det(a), rel=1e-9, abs=1e-12)


def test_adjugate_of_singular_and_scalar():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    np.testing.assert_allclose(adjugate(a), [[4, -2], [-2, 1]])
    np.testing.assert_allclose(adjugate(np.array([[7.0]])), [[1.0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_faddeev_leverrier_against_numpy(n, seed):
    a = np.random.default_rng(seed).normal(size=(n, n))
    chi, mats = faddeev_leverrier(a)
    np.testing.assert_allclose(np.real(chi.coeffs[::-1]), np.poly(a), atol=1e-9)
    z = 0.7 + 0.2j
    adj = sum(M * z ** (n - 1 - k) for k, M in enumerate(mats))
    np.testing.assert_allclose(adj, adjugate(z * np.eye(n) - a), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=1, max_size=5), st.integers(0, 10**6))
def test_divided_difference_of_polynomial(coeffs, seed):
    # k-th divided difference of a degree-k polynomial is its leading coefficient
    p = Poly(coeffs)
    k = len(coeffs) - 1
    nodes = np.sort(np.random.default_rng(seed).uniform(-3, 3, k + 1)) + 0.5 * np.arange(k + 1)
    got = divided_difference(p, nodes)
    assert got == pytest.approx(coeffs[-1], abs=1e-7 * max(1, max(map(abs, coeffs))))


def test_divided_difference_table_and_symmetry():
    f = np.exp
    nodes = [0.1, 0.5, 1.3]
    tab = divided_differences(nodes, [f(x) for x in nodes])
    assert tab[1][0] == pytest.approx((f(0.5) - f(0.1)) / 0.4)
    assert divided_difference(f, nodes) == pytest.approx(divided_difference(f, nodes[::-1]))


def test_separation_check():
    with pytest.raises(DegenerateRoots):
        check_separation([1.0, 1.0 + 1e-9])
    check_separation([1.0, 1.1])
