from __future__ import annotations

import math

import pytest

from conftest import coxian_example
from gsruin import RiskModel
from gsruin import claims as C
from gsruin import phase_type as P
from gsruin.errors import ModelError, NonpositiveLoading, ZeroVolatility


def test_example_loading(example_model):
    assert example_model.loading == pytest.approx(0.125)
    assert example_model.validate() == pytest.approx(0.125)
    assert example_model.n == 2 and example_model.m == 1


def test_a_of_s():
    m = coxian_example(delta=0.3)
    s = 1.5 - 0.5j
    assert m.a(s) == pytest.approx(0.5 * s * s + s - 0.3)


def test_nonpositive_loading_message():
    with pytest.raises(NonpositiveLoading, match="positive safety loading violated"):
        coxian_example(c=0.5)
    with pytest.raises(NonpositiveLoading):
        coxian_example(c=8 / 9)  # exactly zero loading


@pytest.mark.parametrize(
    "kw, exc",
    [
        ({"sigma": 0.0}, ZeroVolatility),
        ({"sigma": -1.0}, ModelError),
        ({"delta": -0.1}, ModelError),
        ({"c": math.nan}, ModelError),
        ({"c": -1.0}, ModelError),
    ],
)
def test_invalid_parameters(kw, exc):
    with pytest.raises(exc):
        coxian_example(**kw)


def test_replace_revalidates():
    m = RiskModel(2.0, 1.0, 0.1, P.exponential(1.0), C.exponential(1.0))
    assert m.replace(delta=0.2).delta == 0.2
    with pytest.raises(ModelError):
        m.replace(c=0.5)
