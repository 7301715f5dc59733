from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import coxian_example
from gsruin import RiskModel
from gsruin import claims as C
from gsruin import phase_type as P
from gsruin.lundberg import char_poly, det_L, eval_L, find_roots, lundberg_residual
from gsruin.errors import PoleError
from gsruin.polyalg import det
from modelgen import random_model


def test_matrix_matches_hand_assembly():
    m = coxian_example()
    s = 0.8 + 0.3j
    hand = np.array([[s * s / 2 + s - 1 + 1 / (2 * (s + 1)), 0.5], [4 / (s + 1), s * s / 2 + s - 4]])
    np.testing.assert_allclose(eval_L(m, s), hand, rtol=1e-14)
    with pytest.raises(PoleError):
        eval_L(m, -1.0)


def test_char_poly_degree_and_lead():
    m = coxian_example()
    cp = char_poly(m)
    assert cp.degree == 5
    assert cp.lead == pytest.approx(0.25, rel=1e-12)
    assert cp.coeffs[0] == 0  # zero is a root without discounting


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_char_poly_equals_scaled_determinant(seed):
    rng = np.random.default_rng(seed)
    m = random_model(rng)
    cp = char_poly(m)
    assert cp.degree == m.m + 2 * m.n
    assert cp.lead == pytest.approx(m.half_var**m.n, rel=1e-12)
    for s in rng.uniform(-2, 2, 4) + 1j * rng.uniform(-2, 2, 4):
        ref = m.claims.r_bot(s) * det(eval_L(m, s))
        assert cp(s) == pytest.approx(ref, rel=1e-9, abs=1e-12 * cp.scale())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_determinant_factorisation(seed):
    rng = np.random.default_rng(seed)
    m = random_model(rng)
    ph = m.interclaims
    for s in rng.uniform(0.1, 3, 3) + 1j * rng.uniform(-2, 2, 3):
        a = m.a(s)
        lhs = det_L(m, s)
        rhs = det(a * np.eye(ph.n) + ph.B) * (1 - ph.lt(-a) * m.claims.lt(s))
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_example_roots(example_model):
    r = find_roots(example_model)
    assert r.rhos[0] == 0
    assert r.rhos[1].real == pytest.approx(2.06412, abs=1e-4)
    np.testing.assert_allclose(sorted(z.real for z in r.Rs), [0.0806231, 3.0744, 3.90909], atol=1e-4)
    assert r.all_real
    assert max(r.residuals) < 1e-12
    assert abs(det_L(example_model, r.rhos[1])) < 1e-6


def test_single_phase_discounted_root_count():
    m = RiskModel(1.5, 0.8, 0.1, P.generalized_erlang([1.0]), C.exponential(1.0))
    r = find_roots(m)
    assert len(r.rhos) == 1 and r.rhos[0].real > 0
    assert len(r.Rs) == 2
    cubic = np.roots(np.real(char_poly(m).coeffs[::-1]))
    assert sum(z.real > 0 for z in cubic) == 1


def test_zero_root_is_continuous_in_delta():
    r = find_roots(coxian_example(delta=1e-6))
    assert 0 < r.rhos[0].real < 1e-4
    assert r.rhos[1].real == pytest.approx(find_roots(coxian_example()).rhos[1].real, abs=1e-4)


def test_discounted_roots_have_no_zero():
    r = find_roots(coxian_example(delta=0.2))
    assert len(r.rhos) == 2 and all(z.real > 0 for z in r.rhos)


def test_complex_roots_are_conjugate_closed():
    m = RiskModel(1.5, 1.0, 0.0, P.generalized_erlang([1.0, 1.0]), C.exponential(1.0))
    r = find_roots(m)
    assert not r.all_real
    cplx = [z for z in r.Rs if abs(z.imag) > 1e-9]
    for z in cplx:
        assert min(abs(z.conjugate() - w) for w in r.Rs) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_roots_satisfy_lundberg_equation(seed):
    m = random_model(np.random.default_rng(seed), delta=(0.01, 1.0))
    r = find_roots(m)
    for z in r.rhos:
        assert abs(lundberg_residual(m, z)) < 1e-8
    assert max(r.residuals) < 1e-8


def test_json_schema(example_model):
    doc = find_roots(example_model).to_json()
    assert {"rhos", "Rs", "residuals"} <= set(doc)
    assert len(doc["rhos"]) == 2 and len(doc["Rs"]) == 3
