"""Rational-family claim sizes and penalty schemes.

A claim law belongs to the rational family when its density transform is
``r_top(s) / r_bot(s)`` with ``r_bot`` monic of degree m, all roots in the
open left half-plane, and ``r_top`` of degree at most m - 1 with
``r_top(0) == r_bot(0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateRoots, InvalidClaim, InvalidPenalty
from .exppoly import ExpPoly, Term
from .polyalg import Poly, check_separation, poly_roots

__all__ = ["RationalClaim", "Penalty", "omega", "omega_hat", "build_claim"]


@dataclass(frozen=True, eq=False)
class RationalClaim:
    r_top: Poly
    r_bot: Poly
    density: ExpPoly
    label: str = "rational"

    def __post_init__(self):
        self._check()

    @property
    def m(self) -> int:
        return self.r_bot.degree

    def lt(self, s: complex) -> complex:
        return complex(self.r_top(s) / self.r_bot(s))

    def mean(self) -> float:
        # -d/ds (top/bot) at 0
        top, bot = self.r_top, self.r_bot
        d = (top.derivative()(0) * bot(0) - top(0) * bot.derivative()(0)) / bot(0) ** 2
        return float(np.real(-d))

    def moment(self, k: int) -> float:
        return float(np.real(sum(t.coeff * math.factorial(t.power + k) / t.rate ** (t.power + k + 1)
                                 for t in self.density.terms)))

    def tail(self) -> ExpPoly:
        """Survival function ``P(Z > x)``."""
        return self.density.dickson_hipp(0.0)

    def pdf(self, x):
        return np.real(self.density(x))

    def _check(self):
        top, bot = self.r_top, self.r_bot
        if bot.degree < 1:
            raise InvalidClaim("r_bot must have degree >= 1")
        if abs(bot.lead - 1) > 1e-12:
            raise InvalidClaim("r_bot must be monic")
        if not top.is_zero() and top.degree > bot.degree - 1:
            raise InvalidClaim("deg r_top must be <= deg r_bot - 1")
        if abs(top(0) - bot(0)) > 1e-10 * max(1.0, abs(bot(0))):
            raise InvalidClaim(f"r_top(0) = {top(0)} differs from r_bot(0) = {bot(0)}")
        roots = poly_roots(bot)
        if any(r.real >= 0 for r in roots):
            raise InvalidClaim(f"r_bot has a root with nonnegative real part: {roots}")
        mass = self.density.laplace(0.0)
        if abs(mass - 1) > 1e-10:
            raise InvalidClaim(f"density integrates to {mass}, not 1")
        rng = np.random.default_rng(12345)
        for s in rng.uniform(0, 3, 5) + 1j * rng.uniform(-3, 3, 5):
            a, b = self.density.laplace(s), self.lt(s)
            if abs(a - b) > 1e-10 * max(1.0, abs(b)):
                raise InvalidClaim("density transform disagrees with r_top / r_bot")
        slowest = min(t.rate.real for t in self.density.terms)
        xs = np.linspace(0.0, 40.0 / slowest, 400)
        vals = self.density(xs)
        if np.min(vals.real) < -1e-10 * max(1.0, np.max(np.abs(vals))):
            raise InvalidClaim("density takes negative values")


def exponential(beta: float) -> RationalClaim:
    beta = float(beta)
    if not beta > 0:
        raise InvalidClaim(f"beta must be positive, got {beta}")
    return RationalClaim(Poly([beta]), Poly([beta, 1.0]), ExpPoly.exp(beta, beta), "exponential")


def erlang(k: int, beta: float) -> RationalClaim:
    """Gamma(k, beta) with integer shape; the repeated pole is kept as a power term."""
    k = int(k)
    beta = float(beta)
    if k < 1 or not beta > 0:
        raise InvalidClaim("erlang needs k >= 1 and beta > 0")
    dens = ExpPoly.exp(beta, beta**k / math.factorial(k - 1), k - 1)
    return RationalClaim(Poly([beta**k]), Poly([beta, 1.0]) ** k, dens, "erlang")


def hyperexponential(weights: Sequence[float], rates: Sequence[float]) -> RationalClaim:
    weights = [float(w) for w in weights]
    rates = [float(r) for r in rates]
    if len(weights) != len(rates) or not rates:
        raise InvalidClaim("weights and rates must have the same nonzero length")
    if any(w <= 0 for w in weights) or abs(sum(weights) - 1) > 1e-12:
        raise InvalidClaim("weights must be positive and sum to 1")
    if any(not r > 0 for r in rates):
        raise InvalidClaim("rates must be positive")
    try:
        check_separation(rates, what="hyperexponential rates")
    except DegenerateRoots as exc:
        raise InvalidClaim(str(exc)) from exc
    bot = Poly.from_roots([-r for r in rates])
    top = Poly([0.0])
    for i, (w, r) in enumerate(zip(weights, rates)):
        top = top + Poly.from_roots([-q for j, q in enumerate(rates) if j != i], lead=w * r)
    dens = ExpPoly(Term(w * r, r, 0) for w, r in zip(weights, rates))
    return RationalClaim(top, bot, dens, "hyperexponential")


def from_polys(r_top: Sequence[complex] | Poly, r_bot: Sequence[complex] | Poly) -> RationalClaim:
    """Claim law from transform polynomials (ascending coefficients).

    The density comes from the partial-fraction expansion of ``r_top/r_bot``;
    ``r_bot`` must have distinct roots.
    """
    top = r_top if isinstance(r_top, Poly) else Poly(r_top)
    bot = r_bot if isinstance(r_bot, Poly) else Poly(r_bot)
    if bot.degree < 1:
        raise InvalidClaim("r_bot must have degree >= 1")
    if bot.lead != 1:
        raise InvalidClaim("r_bot must be monic")
    roots = poly_roots(bot)
    try:
        check_separation(roots, what="r_bot roots")
    except DegenerateRoots as exc:
        raise InvalidClaim(f"repeated r_bot roots are not supported: {exc}") from exc
    if any(r.real >= 0 for r in roots):
        raise InvalidClaim(f"r_bot has a root with nonnegative real part: {roots}")
    dbot = bot.derivative()
    dens = ExpPoly(Term(top(z) / dbot(z), -z, 0) for z in roots)
    return RationalClaim(top, bot, dens, "rational")


def build_claim(kind: str, **params) -> RationalClaim:
    if kind == "exponential":
        return exponential(params["beta"])
    if kind == "erlang":
        return erlang(params["k"], params["beta"])
    if kind == "hyperexponential":
        return hyperexponential(params["weights"], params["rates"])
    if kind in ("rational", "from_polys"):
        return from_polys(params["r_top"], params["r_bot"])
    raise ValueError(f"unknown claim kind {kind!r}")


@dataclass(frozen=True)
class Penalty:
    """Penalty scheme: ``w(x, y)`` at ruin by a claim, constant ``w0`` at ruin by oscillation.

    ``x`` is the surplus just before ruin and ``y`` the deficit at ruin.

    kinds:
      * ``unit``: ``w = 1``
      * ``bivariate_exponential``: ``w = exp(-s1 x - s2 y)``
      * ``deficit_power``: ``w = y**j``
    """

    kind: str = "unit"
    s1: float = 0.0
    s2: float = 0.0
    j: int = 0
    w0: float = 1.0

    def __post_init__(self):
        if self.kind not in ("unit", "bivariate_exponential", "deficit_power"):
            raise InvalidPenalty(f"unknown penalty kind {self.kind!r}")
        for name in ("s1", "s2", "w0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise InvalidPenalty(f"{name} must be finite and >= 0, got {v}")
        if int(self.j) != self.j or self.j < 0 or self.j > 20:
            raise InvalidPenalty(f"deficit power must be a small nonnegative integer, got {self.j}")
        object.__setattr__(self, "j", int(self.j))

    @classmethod
    def unit(cls, w0: float = 1.0) -> "Penalty":
        return cls("unit", w0=w0)

    @classmethod
    def bivariate_exponential(cls, s1: float, s2: float, w0: float = 1.0) -> "Penalty":
        return cls("bivariate_exponential", s1=s1, s2=s2, w0=w0)

    @classmethod
    def deficit_power(cls, j: int, w0: float = 1.0) -> "Penalty":
        return cls("deficit_power", j=j, w0=w0)

    def w(self, x, y):
        if self.kind == "unit":
            return np.ones_like(np.asarray(y, dtype=float))
        if self.kind == "bivariate_exponential":
            return np.exp(-self.s1 * np.asarray(x) - self.s2 * np.asarray(y))
        return np.asarray(y, dtype=float) ** self.j

    def code(self) -> tuple[int, float, float, int]:
        """Numeric encoding used by the simulation kernels."""
        return {"unit": 0, "bivariate_exponential": 1, "deficit_power": 2}[self.kind], self.s1, self.s2, int(self.j)


def omega(claim: RationalClaim, pen: Penalty) -> ExpPoly:
    """``omega(u) = int_u^inf w(u, x - u) p(x) dx`` as an exponential polynomial."""
    p = claim.density
    if pen.kind == "unit":
        return p.dickson_hipp(0.0)
    if pen.kind == "bivariate_exponential":
        return p.dickson_hipp(pen.s2).shift(pen.s1)
    # int_0^inf y^j p(u + y) dy, term by term
    j = pen.j
    out = []
    for t in p.terms:
        k = t.power
        for i in range(k + 1):
            c = t.coeff * math.comb(k, i) * math.factorial(j + k - i) / t.rate ** (j + k - i + 1)
            out.append(Term(c, t.rate, i))
    return ExpPoly(out)


def omega_hat(claim: RationalClaim, pen: Penalty, s: complex) -> complex:
    return omega(claim, pen).laplace(s)

