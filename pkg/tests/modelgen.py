"""Random admissible models for property tests."""
from __future__ import annotations

import numpy as np

from gsruin import RiskModel
from gsruin import claims as C
from gsruin import phase_type as P
from gsruin.claims import Penalty
from gsruin.errors import DegenerateRoots, ImaginaryAxisRoot


def damped_cosine_claim(beta: float, w: float) -> C.RationalClaim:
    """Density proportional to exp(-beta x) (1 - cos(w x)): complex poles, nonnegative."""
    top = [beta * (beta * beta + w * w)]
    bot = np.polynomial.polynomial.polyfromroots([-beta, -beta + 1j * w, -beta - 1j * w]).real
    return C.from_polys(top, list(bot))


def random_interclaims(rng: np.random.Generator, n: int) -> P.PhaseType:
    kind = rng.integers(4) if n > 1 else 0
    rates = rng.uniform(0.5, 5.0, n)
    if kind == 0:
        return P.exponential(rates[0]) if n == 1 else P.generalized_erlang(rates)
    if kind == 1:
        return P.generalized_erlang(rates)
    if kind == 2:
        return P.coxian(rates, rng.uniform(0.2, 1.0, n - 1))
    # dense sub-intensity matrix
    B = rng.uniform(0.0, 1.0, (n, n))
    np.fill_diagonal(B, 0.0)
    np.fill_diagonal(B, -(B.sum(axis=1) + rng.uniform(0.3, 3.0, n)))
    alpha = rng.dirichlet(np.ones(n))
    return P.PhaseType(alpha, B)


def random_claims(rng: np.random.Generator, m: int) -> C.RationalClaim:
    if m == 1:
        return C.exponential(rng.uniform(0.5, 3.0))
    kind = rng.integers(3) if m == 3 else rng.integers(2)
    if kind == 0:
        return C.erlang(m, rng.uniform(0.5, 3.0))
    if kind == 1:
        rates = np.sort(rng.uniform(0.3, 4.0, m))
        rates = rates + 0.2 * np.arange(m)
        return C.hyperexponential(rng.dirichlet(np.ones(m)), rates)
    return damped_cosine_claim(rng.uniform(0.5, 3.0), rng.uniform(0.5, 3.0))


def random_penalty(rng: np.random.Generator) -> Penalty:
    k = rng.integers(3)
    w0 = rng.uniform(0.0, 2.0)
    if k == 0:
        return Penalty.unit(w0)
    if k == 1:
        return Penalty.bivariate_exponential(rng.uniform(0, 1), rng.uniform(0, 1), w0)
    return Penalty.deficit_power(int(rng.integers(1, 3)), w0)


def random_model(
    rng: np.random.Generator,
    n_max: int = 3,
    m_max: int = 3,
    delta: tuple[float, float] | None = (0.0, 1.0),
    penalty: bool = True,
) -> RiskModel:
    """Draw until the model has well-separated Lundberg roots.

    ``delta=None`` gives delta = 0; otherwise delta is uniform on the range.
    """
    from gsruin.lundberg import find_roots

    while True:
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        inter = random_interclaims(rng, n)
        claim = random_claims(rng, m)
        theta = rng.uniform(0.05, 1.0)
        c = (1 + theta) * claim.mean() / inter.mean()
        sigma = rng.uniform(0.3, 2.0)
        d = 0.0 if delta is None else float(rng.uniform(*delta))
        pen = random_penalty(rng) if penalty else Penalty()
        model = RiskModel(c, sigma, d, inter, claim, pen)
        try:
            find_roots(model)
        except (DegenerateRoots, ImaginaryAxisRoot):
            continue
        return model


def random_coxian_hyperexp(rng: np.random.Generator, n_max: int = 3, m_max: int = 3,
                           delta: tuple[float, float] = (0.0, 1.0)) -> RiskModel:
    """Coxian interclaims with hyperexponential claims, delta drawn from ``delta``.

    Only draws with coincident roots are rejected; the root-count checks run on
    every such model.
    """
    from gsruin.lundberg import find_roots

    while True:
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        rates = rng.uniform(0.5, 5.0, n)
        inter = P.coxian(rates, rng.uniform(0.2, 1.0, n - 1))
        crates = np.sort(rng.uniform(0.3, 4.0, m)) + 0.2 * np.arange(m)
        claim = C.hyperexponential(rng.dirichlet(np.ones(m)), crates) if m > 1 else C.exponential(crates[0])
        theta = rng.uniform(0.05, 1.0)
        c = (1 + theta) * claim.mean() / inter.mean()
        lo, hi = delta
        d = float(hi - (hi - lo) * rng.random())  # (lo, hi]
        model = RiskModel(c, rng.uniform(0.3, 2.0), d, inter, claim)
        try:
            find_roots(model)
        except DegenerateRoots:
            continue
        return model
