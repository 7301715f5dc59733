"""The matrix ``L(s)``, its characteristic polynomial and the Lundberg roots.

``L(s) = a(s) I + B + b^T alpha p(s)`` with ``a(s) = sigma^2/2 s^2 + c s - delta``.
Multiplying ``det L(s)`` by the claim denominator ``r_bot`` yields a
polynomial of degree ``m + 2n``; it is built exactly from

    r_bot(s) det L(s) = r_bot(s) q(a(s)) - (-1)^n n_k(-a(s)) r_top(s)

where ``q(z) = det(z I + B)`` and ``n_k(z) = alpha adj(z I - B) b^T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ImaginaryAxisRoot, PoleError, RootCountMismatch
from .model import RiskModel
from .polyalg import TOL_SEP, Poly, check_separation, det, faddeev_leverrier

__all__ = [
    "LundbergRoots",
    "eval_L",
    "det_L",
    "char_poly",
    "find_roots",
    "lundberg_residual",
    "polish_roots",
    "ZERO_SNAP",
]

ZERO_SNAP = 1e-8
IMAG_AXIS_TOL = 1e-10


def eval_L(model: RiskModel, s: complex) -> np.ndarray:
    bot = model.claims.r_bot(s)
    if bot == 0:
        raise PoleError(f"s={s} is a pole of the claim transform")
    ph = model.interclaims
    p = model.claims.r_top(s) / bot
    return model.a(s) * np.eye(ph.n) + ph.B + np.outer(ph.b, ph.alpha) * p


def det_L(model: RiskModel, s: complex) -> complex:
    return det(eval_L(model, s))


def char_poly(model: RiskModel) -> Poly:
    """Exact coefficients of ``r_bot(s) det L(s)``."""
    ph = model.interclaims
    n = ph.n
    chi, _ = faddeev_leverrier(ph.B)
    num, _ = ph.rational_form()
    # q(z) = det(z I + B) = (-1)^n chi(-z)
    neg = Poly([0.0, -1.0])
    q = chi.compose(neg) * ((-1) ** n)
    a = Poly([-model.delta, model.c, model.half_var])
    nk_neg_a = num.compose(-a)
    return model.claims.r_bot * q.compose(a) - ((-1) ** n) * nk_neg_a * model.claims.r_top


def _factored(model: RiskModel):
    """``F(s) = r_bot(s) chi(z) - r_top(s) num(z)`` with ``z = -a(s)`` and its derivative.

    ``F = (-1)^n r_bot det L``; evaluating it unexpanded avoids the rounding
    of the expanded coefficients, which matters for clustered roots.
    """
    ph = model.interclaims
    chi, _ = faddeev_leverrier(ph.B)
    num, _ = ph.rational_form()
    top, bot = model.claims.r_top, model.claims.r_bot
    dchi, dnum, dtop, dbot = chi.derivative(), num.derivative(), top.derivative(), bot.derivative()

    def f(s):
        z = -model.a(s)
        dz = -(2.0 * model.half_var * s + model.c)
        val = bot(s) * chi(z) - top(s) * num(z)
        der = dbot(s) * chi(z) + bot(s) * dchi(z) * dz - dtop(s) * num(z) - top(s) * dnum(z) * dz
        return val, der

    return f


def polish_roots(model: RiskModel, roots: list[complex], steps: int = 8) -> list[complex]:
    """Newton refinement of each root on the unexpanded characteristic function.

    A refinement is kept only if it reduces ``|F|`` and stays well inside the
    gap to the nearest other root.
    """
    f = _factored(model)
    out = list(roots)
    for k, r0 in enumerate(roots):
        if r0 == 0:
            continue
        others = [abs(r0 - r) for j, r in enumerate(roots) if j != k]
        reach = 0.25 * min(others) if others else abs(r0) + 1.0
        s = r0
        v0 = abs(f(r0)[0])
        for _ in range(steps):
            val, der = f(s)
            if der == 0:
                break
            step = val / der
            s = s - step
            if abs(step) <= 4e-16 * abs(s):
                break
        if abs(s - r0) < reach and abs(f(s)[0]) <= v0:
            if abs(r0.imag) == 0.0:
                s = complex(s.real, 0.0)
            out[k] = s
    return out


@dataclass(frozen=True)
class LundbergRoots:
    """Roots of ``r_bot(s) det L(s)`` split by half-plane.

    ``rhos`` holds the n roots with positive real part (one of them exactly 0
    when delta = 0); ``Rs`` holds the m + n values ``R`` with ``-R`` a root.
    """

    rhos: tuple[complex, ...]
    Rs: tuple[complex, ...]
    char_poly: Poly
    residuals: tuple[float, ...] = field(default=())

    @property
    def all_real(self) -> bool:
        """Whether every root is real (to 1e-9 relative)."""
        return all(abs(z.imag) <= 1e-9 * max(1.0, abs(z)) for z in self.rhos + self.Rs)

    @property
    def R_min(self) -> float:
        """Smallest decay rate; governs the tail of the ruin probability."""
        return min(r.real for r in self.Rs)

    def to_json(self) -> dict:
        def cx(z):
            return [z.real, z.imag]

        return {
            "rhos": [cx(z) for z in self.rhos],
            "Rs": [cx(z) for z in self.Rs],
            "residuals": list(self.residuals),
            "all_real": self.all_real,
            "char_poly": [cx(c) for c in self.char_poly.coeffs],
        }


def _sort_key(z: complex):
    return (round(z.real, 12), z.imag)


def find_roots(model: RiskModel, tol_sep: float = TOL_SEP, check_distinct: bool = True) -> LundbergRoots:
    """Roots of the characteristic polynomial, classified per half-plane."""
    cp = char_poly(model)
    roots = cp.roots()
    n, m = model.n, model.m
    if model.delta == 0:
        k = int(np.argmin([abs(r) for r in roots]))
        if abs(roots[k]) < ZERO_SNAP:
            roots[k] = 0j
    roots = polish_roots(model, roots)
    if model.delta != 0:
        for r in roots:
            if abs(r.real) < IMAG_AXIS_TOL * max(1.0, abs(r)):
                raise ImaginaryAxisRoot(f"root {r} lies on the imaginary axis")
    rhos = [r for r in roots if r.real > 0 or r == 0]
    negs = [r for r in roots if r.real < 0 or (r.real == 0 and r != 0)]
    if len(rhos) != n or len(negs) != m + n:
        raise RootCountMismatch(
            f"expected {n} roots with Re >= 0 and {m + n} with Re < 0, got {len(rhos)} and {len(negs)}: {roots}"
        )
    rhos = sorted(rhos, key=_sort_key)
    Rs = sorted((-r for r in negs), key=_sort_key)
    if check_distinct:
        check_separation(rhos, tol_sep, "Lundberg roots rho")
        check_separation(Rs, tol_sep, "Lundberg roots R")
    scale = cp.scale()
    residuals = tuple(
        float(abs(cp(z)) / (scale * max(1.0, abs(z)) ** cp.degree)) for z in list(rhos) + [-r for r in Rs]
    )
    return LundbergRoots(tuple(rhos), tuple(Rs), cp, residuals)


def lundberg_residual(model: RiskModel, s: complex) -> complex:
    """``k(delta - c s - sigma^2 s^2 / 2) p(s) - 1``; zero at every Lundberg root."""
    return model.interclaims.lt(-model.a(s)) * model.claims.lt(s) - 1.0
