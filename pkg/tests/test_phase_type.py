from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from gsruin import phase_type as P
from gsruin.errors import NonStochasticAlpha, NotSubIntensity, PoleError, SingularB
from gsruin.phase_type import PhaseType


def test_coxian_example_representation():
    ph = P.coxian([1.0, 4.0], [0.5])
    np.testing.assert_array_equal(ph.B, [[-1.0, 0.5], [0.0, -4.0]])
    np.testing.assert_array_equal(ph.b, [0.5, 4.0])
    assert ph.mean() == pytest.approx(9 / 8)


def test_exit_vector_must_match():
    with pytest.raises(NotSubIntensity):
        PhaseType([1.0, 0.0], [[-1.0, 0.5], [0.0, -4.0]], b=[0.5, 3.0])
    PhaseType([1.0, 0.0], [[-1.0, 0.5], [0.0, -4.0]], b=[0.5, 4.0])


@pytest.mark.parametrize(
    "alpha, B, exc",
    [
        ([0.5, 0.4], [[-1, 0], [0, -1]], NonStochasticAlpha),
        ([1.2, -0.2], [[-1, 0], [0, -1]], NonStochasticAlpha),
        ([1.0], [[-1, 0], [0, -1]], NonStochasticAlpha),
        ([1.0, 0.0], [[-1, -0.5], [0, -1]], NotSubIntensity),
        ([1.0, 0.0], [[-1, 2.0], [0, -1]], NotSubIntensity),
        ([1.0, 0.0], [[0.0, 0.0], [0, -1]], SingularB),
        ([1.0, 0.0], [[-1, 1.0], [1.0, -1]], SingularB),
    ],
)
def test_validation(alpha, B, exc):
    with pytest.raises(exc):
        PhaseType(alpha, B)


def test_arrays_are_read_only():
    ph = P.exponential(2.0)
    with pytest.raises(ValueError):
        ph.B[0, 0] = 1.0


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.3, 5.0), min_size=1, max_size=3), st.floats(0.05, 4.0))
def test_transform_matches_density_integral(rates, s):
    ph = P.generalized_erlang(rates)
    ref, _ = quad(lambda t: np.exp(-s * t) * ph.pdf(t)[0], 0, np.inf, limit=200)
    assert ph.lt(s).real == pytest.approx(ref, rel=1e-7)


def test_rational_form_matches_transform():
    ph = PhaseType([0.3, 0.7, 0.0], [[-2.0, 1.0, 0.5], [0.2, -1.0, 0.3], [0.0, 0.0, -3.0]])
    num, den = ph.rational_form()
    for s in (0.4, 2.0 + 1j, -0.2 + 3j):
        assert num(s) / den(s) == pytest.approx(ph.lt(s), rel=1e-12)
    assert den.degree == 3


def test_transform_pole():
    with pytest.raises(PoleError):
        P.exponential(2.0).lt(-2.0)


def test_moments_and_cdf():
    ph = P.generalized_erlang([1.0, 3.0])
    assert ph.mean() == pytest.approx(1 + 1 / 3)
    assert ph.variance() == pytest.approx(1 + 1 / 9)
    m2, _ = quad(lambda t: t * t * ph.pdf(t)[0], 0, np.inf)
    assert ph.moment(2) == pytest.approx(m2, rel=1e-8)
    assert ph.cdf(0.0)[0] == pytest.approx(0.0)
    assert ph.cdf(50.0)[0] == pytest.approx(1.0)


def test_sampling_mean_and_forced_start(rng):
    ph = P.coxian([1.0, 4.0], [0.5])
    xs = ph.sample_many(rng, 20000)
    se = xs.std() / np.sqrt(len(xs))
    assert abs(xs.mean() - ph.mean()) < 4 * se
    forced = np.array([ph.sample(rng, start=1) for _ in range(5000)])
    assert abs(forced.mean() - 0.25) < 4 * forced.std() / np.sqrt(len(forced))


def test_build_dispatch():
    assert P.build("exponential", rate=2.0).mean() == pytest.approx(0.5)
    assert P.build("matrix", alpha=[1.0], B=[[-3.0]]).mean() == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        P.build("weibull")
