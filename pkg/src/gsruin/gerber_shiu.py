"""Closed-form Gerber-Shiu functions for rational-family claims.

Pipeline: Lundberg roots -> derivatives at zero from divided differences of
the adjugate ``L*`` -> partial-fraction coefficients over the roots ``-R_i``
-> exponential-polynomial solutions, one per initial phase.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .claims import omega as omega_of
from .errors import ConsistencyFailure, ModelNotInSpecialForm, SingularDividedDifference
from .exppoly import ExpPoly, lin_comb
from .lundberg import LundbergRoots, eval_L, find_roots
from .model import RiskModel
from .polyalg import TOL_SEP, adjugate, check_separation, det

__all__ = [
    "GerberShiuSolution",
    "DividedDifferences",
    "q_w",
    "q_d",
    "derivatives_at_zero",
    "partial_fraction_coeffs",
    "solve",
    "laplace_solution",
    "laplace_paths",
    "ruin_prob_special",
    "integro_differential_residuals",
    "erlang_residuals",
]


class DividedDifferences:
    """Memoized divided differences ``f[x_0, ..., x_k]`` of a callable.

    The value type of ``f`` (scalar or matrix) is preserved.
    """

    def __init__(self, f: Callable, tol_sep: float = TOL_SEP):
        self.f = f
        self.tol_sep = tol_sep
        self._memo: dict[tuple, object] = {}

    def __call__(self, nodes: Sequence[complex]):
        nodes = tuple(complex(x) for x in nodes)
        if not nodes:
            raise ValueError("divided difference over an empty node set")
        check_separation(nodes, self.tol_sep)
        return self._dd(nodes)

    def _dd(self, nodes: tuple):
        hit = self._memo.get(nodes)
        if hit is not None:
            return hit
        if len(nodes) == 1:
            val = self.f(nodes[0])
        else:
            val = (self._dd(nodes[1:]) - self._dd(nodes[:-1])) / (nodes[-1] - nodes[0])
        self._memo[nodes] = val
        return val


def _adjugate_dd(model: RiskModel) -> DividedDifferences:
    return DividedDifferences(lambda s: adjugate(eval_L(model, s)))


@dataclass(frozen=True, eq=False)
class GerberShiuSolution:
    """Per-phase closed forms ``phi_w[i](u)``, ``phi_d[i](u)`` and the scalar
    ``phi(u) = alpha (phi_w + w0 phi_d)``.

    With delta = 0 and the unit penalty, ``psi_w`` and ``psi_d`` are the ruin
    probabilities caused by a claim and by oscillation.
    """

    model: RiskModel
    roots: LundbergRoots
    omega: ExpPoly
    phi_w: tuple[ExpPoly, ...]
    phi_d: tuple[ExpPoly, ...]
    phi: ExpPoly
    phi_w_prime0: np.ndarray
    phi_d_prime0: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def psi_w(self) -> ExpPoly:
        return lin_comb(self.model.interclaims.alpha, self.phi_w)

    @property
    def psi_d(self) -> ExpPoly:
        return lin_comb(self.model.interclaims.alpha, self.phi_d)

    def evaluate(self, u) -> dict[str, np.ndarray]:
        """Real parts of the scalar functions on ``u``."""
        return {
            "phi_w": self.psi_w.real(u),
            "phi_d": self.psi_d.real(u),
            "phi": self.phi.real(u),
        }

    def per_phase(self, u) -> dict[str, np.ndarray]:
        return {
            "phi_w": np.array([f.real(u) for f in self.phi_w]),
            "phi_d": np.array([f.real(u) for f in self.phi_d]),
        }

    def to_json(self) -> dict:
        return {
            "phi_w": self.psi_w.to_json(),
            "phi_d": self.psi_d.to_json(),
            "phi": self.phi.to_json(),
            "phi_w_phases": [f.to_json() for f in self.phi_w],
            "phi_d_phases": [f.to_json() for f in self.phi_d],
        }


def q_w(model: RiskModel, s: complex, phi_w_prime0: np.ndarray, omega: Optional[ExpPoly] = None) -> np.ndarray:
    """``sigma^2/2 phi_w'(0) - omega_hat(s) b``."""
    om = omega_of(model.claims, model.penalty) if omega is None else omega
    return model.half_var * np.asarray(phi_w_prime0) - om.laplace(s) * model.interclaims.b


def q_d(model: RiskModel, s: complex, phi_d_prime0: np.ndarray) -> np.ndarray:
    """``sigma^2/2 phi_d'(0) + (sigma^2/2 s + c) e``."""
    return model.half_var * np.asarray(phi_d_prime0) + (model.half_var * s + model.c)


def derivatives_at_zero(
    model: RiskModel,
    roots: LundbergRoots,
    omega: Optional[ExpPoly] = None,
    lstar: Optional[DividedDifferences] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """``(phi_w'(0), phi_d'(0))`` from the order-n divided difference of ``L*``."""
    om = omega_of(model.claims, model.penalty) if omega is None else omega
    Ls = lstar or _adjugate_dd(model)
    oh = DividedDifferences(om.laplace)
    rho = roots.rhos
    n = len(rho)
    hv = model.half_var
    b = model.interclaims.b
    e = np.ones(n)

    top = Ls(rho)
    if not np.all(np.isfinite(top)) or np.linalg.cond(top) > 1e13:
        raise SingularDividedDifference(f"L*[rho_1..rho_n] is singular (cond {np.linalg.cond(top):.3g})")
    acc = sum(Ls(rho[: i + 1]) * oh(rho[i:]) for i in range(n))
    dw = np.linalg.solve(top, acc @ b) / hv
    rhs = top @ e * (hv * rho[-1] + model.c)
    if n > 1:
        rhs = rhs + hv * (Ls(rho[:-1]) @ e)
    dd = -np.linalg.solve(top, rhs) / hv
    return dw, dd


def partial_fraction_coeffs(
    model: RiskModel, roots: LundbergRoots, lstar: Optional[DividedDifferences] = None
) -> tuple[list[np.ndarray], list[np.ndarray], list[complex]]:
    """``(M^(n), M^(n-1), G)``: residues of ``r_bot(s) L*[rho_1..rho_j, s] / prod(s + R_i)``
    for j = n, n-1, and of ``r_bot(s) / prod(s + R_i)``."""
    Ls = lstar or _adjugate_dd(model)
    rho, R = roots.rhos, roots.Rs
    check_separation(R, what="roots R")
    bot = model.claims.r_bot
    Mn, Mn1, G = [], [], []
    for i, Ri in enumerate(R):
        prod = np.prod([R[l] - Ri for l in range(len(R)) if l != i])
        g = bot(-Ri) / prod
        G.append(complex(g))
        Mn.append(g * Ls(rho + (-Ri,)))
        Mn1.append(g * Ls(rho[:-1] + (-Ri,)))
    return Mn, Mn1, G


def solve(model: RiskModel, roots: Optional[LundbergRoots] = None, prune: float = 1e-13) -> GerberShiuSolution:
    """Closed-form ``phi_w``, ``phi_d`` and ``phi`` for ``model``."""
    roots = roots or find_roots(model)
    ph = model.interclaims
    n = ph.n
    hv = model.half_var
    b, e = ph.b, np.ones(n)
    rho, R = roots.rhos, roots.Rs
    om = omega_of(model.claims, model.penalty)
    Ls = _adjugate_dd(model)

    dw, dd = derivatives_at_zero(model, roots, om, Ls)
    Qw = q_w(model, rho[-1], dw, om)
    Qd = q_d(model, rho[-1], dd)
    Mn, Mn1, G = partial_fraction_coeffs(model, roots, Ls)

    # T_{rho_l} ... T_{rho_n} omega, for l = 1..n
    chains: list[ExpPoly] = [ExpPoly()] * n
    acc = om
    for l in range(n - 1, -1, -1):
        acc = acc.dickson_hipp(rho[l])
        chains[l] = acc
    lb = [Ls(rho[: l + 1]) @ b for l in range(n - 1)]  # L*[rho_1..rho_l] b, l = 1..n-1

    scale = hv**-n
    phi_w = []
    phi_d = []
    for k in range(n):
        terms = []
        dterms = []
        for i, Ri in enumerate(R):
            direct = (Mn[i] @ Qw)[k]
            bracket = (Mn1[i] @ b)[k] * chains[n - 1]
            for l in range(n - 1):
                # l is zero-based here, so (-1)^(n - (l+1))
                bracket = bracket + G[i] * (-1) ** (n - l - 1) * lb[l][k] * chains[l]
            terms.append(ExpPoly.exp(Ri, direct))
            terms.append(ExpPoly.exp(Ri).convolve(bracket))
            dterms.append(ExpPoly.exp(Ri, (Mn[i] @ Qd)[k] + hv * (Mn1[i] @ e)[k]))
        fw = (sum(terms, ExpPoly()) * scale).pruned(prune)
        fd = (sum(dterms, ExpPoly()) * scale).pruned(prune)
        phi_w.append(fw)
        phi_d.append(fd)

    alpha = ph.alpha
    phi = (lin_comb(alpha, phi_w) + lin_comb(alpha, phi_d) * model.penalty.w0).pruned(prune)
    diag = {
        "Q_w": Qw,
        "Q_d": Qd,
        "M_n": Mn,
        "M_n1": Mn1,
        "G": G,
        "boundary_w": max(abs(f.evaluate(0.0)) for f in phi_w),
        "boundary_d": max(abs(f.evaluate(0.0) - 1.0) for f in phi_d),
        "roots_real": roots.all_real,
    }
    return GerberShiuSolution(model, roots, om, tuple(phi_w), tuple(phi_d), phi, dw, dd, diag)


def laplace_paths(model: RiskModel, sol: GerberShiuSolution, s: complex) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """``(phi_w_hat(s), phi_d_hat(s))`` by three independent routes.

    ``raw``: ``L*(s) Q(s) / det L(s)``; ``divided``: the divided-difference
    form with the factor ``prod(s - rho_i)`` pulled out; ``closed``: termwise
    transform of the closed-form solution.
    """
    ph = model.interclaims
    n = ph.n
    hv = model.half_var
    b, e = ph.b, np.ones(n)
    rho = sol.roots.rhos
    om = sol.omega
    Ls = _adjugate_dd(model)
    oh = DividedDifferences(om.laplace)

    Lm = eval_L(model, s)
    dL = det(Lm)
    La = adjugate(Lm)
    raw_w = La @ q_w(model, s, sol.phi_w_prime0, om) / dL
    raw_d = La @ q_d(model, s, sol.phi_d_prime0) / dL

    pref = np.prod([s - r for r in rho]) / dL
    Qw = q_w(model, rho[-1], sol.phi_w_prime0, om)
    Qd = q_d(model, rho[-1], sol.phi_d_prime0)
    top = Ls(rho + (s,))
    sub = Ls(rho[:-1] + (s,))
    inner_w = top @ Qw - (sub @ b) * oh((rho[-1], s))
    for i in range(n - 1):
        inner_w = inner_w - (Ls(rho[: i + 1]) @ b) * oh(rho[i:] + (s,))
    dd_w = pref * inner_w
    dd_d = pref * (top @ Qd + hv * (sub @ e))

    cl_w = np.array([f.laplace(s) for f in sol.phi_w])
    cl_d = np.array([f.laplace(s) for f in sol.phi_d])
    return {"raw": (raw_w, raw_d), "divided": (dd_w, dd_d), "closed": (cl_w, cl_d)}


def _rel_gap(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)


def laplace_solution(
    model: RiskModel, sol: GerberShiuSolution, s: complex, rtol: float = 1e-7, check: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Transforms of ``phi_w`` and ``phi_d`` at ``s``; the three routes of
    :func:`laplace_paths` must agree to ``rtol`` or ``ConsistencyFailure`` is raised."""
    paths = laplace_paths(model, sol, s)
    raw = paths["raw"]
    if check:
        for name in ("divided", "closed"):
            for k, label in ((0, "phi_w"), (1, "phi_d")):
                gap = _rel_gap(raw[k], paths[name][k])
                if gap > rtol:
                    raise ConsistencyFailure(f"{label}: raw and {name} transforms differ by {gap:.3g} at s={s}")
    return raw


def _special_params(model: RiskModel) -> tuple[float, float, float]:
    ph = model.interclaims
    B = ph.B
    ok = (
        model.delta == 0
        and model.penalty.kind == "unit"
        and model.penalty.w0 == 1
        and model.claims.m == 1
        and ph.n == 2
        and np.array_equal(ph.alpha, [1.0, 0.0])
        and B[1, 0] == 0
        and B[0, 1] == -B[0, 0]
    )
    if not ok:
        raise ModelNotInSpecialForm(
            "needs delta=0, unit penalty with w0=1, exponential claims and generalized Erlang(2) interclaims"
        )
    beta = float(np.real(model.claims.r_bot.coeffs[0]))
    return -B[0, 0], -B[1, 1], beta


def ruin_prob_special(model: RiskModel, roots: Optional[LundbergRoots] = None) -> tuple[ExpPoly, ExpPoly]:
    """Ruin probabilities ``(psi_w, psi_d)`` for exponential claims and
    generalized Erlang(2) interclaim times, directly from the roots."""
    l1, l2, beta = _special_params(model)
    roots = roots or find_roots(model)
    rho2 = roots.rhos[1]
    R = roots.Rs
    hv, c = model.half_var, model.c
    psi_w, psi_d = [], []
    for i, Ri in enumerate(R):
        prod = np.prod([R[l] - Ri for l in range(len(R)) if l != i])
        k = l1 * l2 / (beta * (beta + rho2) * prod) / hv**2
        psi_w.append(ExpPoly.exp(Ri, k * (1 + hv * (beta - Ri) / (hv * rho2 + c))))
        psi_w.append(ExpPoly.exp(beta, -k))
        coef = (beta - Ri) / prod * ((l1 + l2) / (hv * rho2 + c) - Ri + 2 * c / model.sigma**2)
        psi_d.append(ExpPoly.exp(Ri, coef))
    return sum(psi_w, ExpPoly()), sum(psi_d, ExpPoly())


def _rows(sol: GerberShiuSolution, which: str) -> tuple[ExpPoly, ...]:
    return sol.phi_w if which == "w" else sol.phi_d


def integro_differential_residuals(sol: GerberShiuSolution, us: Sequence[float], which: str = "w") -> np.ndarray:
    """Scaled residuals of the integro-differential system at each ``u``.

    For ``which="w"`` the system is
    ``s2 f'' + c f' + (B - delta I) f + [(alpha f) * p + omega] b = 0``;
    for ``"d"`` the ``omega`` term is absent. Each residual is divided by
    ``1 + max |individual contribution|``.
    """
    model = sol.model
    ph = model.interclaims
    f = _rows(sol, which)
    n = ph.n
    us = np.asarray(us, dtype=float)
    conv = lin_comb(ph.alpha, f).convolve(model.claims.density)
    forcing = conv + sol.omega if which == "w" else conv
    val = np.array([g.evaluate(us) for g in f])
    d1 = np.array([g.derivative(1).evaluate(us) for g in f])
    d2 = np.array([g.derivative(2).evaluate(us) for g in f])
    force = forcing.evaluate(us)
    A = ph.B - model.delta * np.eye(n)
    parts = [model.half_var * d2, model.c * d1, A @ val, np.outer(ph.b, force)]
    res = sum(parts)
    mag = 1.0 + np.max(np.abs(np.array(parts)), axis=(0, 1))
    return np.max(np.abs(res), axis=0) / mag


def erlang_residuals(sol: GerberShiuSolution, us: Sequence[float]) -> np.ndarray:
    """Residuals of the scalar chain equations for generalized Erlang interclaims:

    ``lam_i f_{i+1} = (lam_i + delta) f_i - c f_i' - s2 f_i''`` for i < n and
    ``(lam_n + delta) f_n - c f_n' - s2 f_n'' = lam_n [(f_1 * p)(u) + omega(u)]``.
    Returns the largest scaled residual per ``u``.
    """
    model = sol.model
    ph = model.interclaims
    n = ph.n
    lam = -np.diag(ph.B)
    expected = np.diag(lam[:-1], 1) - np.diag(lam)
    if not (np.allclose(ph.B, expected) and ph.alpha[0] == 1.0):
        raise ModelNotInSpecialForm("interclaim times are not generalized Erlang")
    us = np.asarray(us, dtype=float)
    f = sol.phi_w
    hv, c, dl = model.half_var, model.c, model.delta
    out = np.zeros(len(us))
    for i in range(n):
        v = f[i].evaluate(us)
        d1 = f[i].derivative(1).evaluate(us)
        d2 = f[i].derivative(2).evaluate(us)
        right = (lam[i] + dl) * v - c * d1 - hv * d2
        if i < n - 1:
            left = lam[i] * f[i + 1].evaluate(us)
        else:
            left = lam[i] * (f[0].convolve(model.claims.density) + sol.omega).evaluate(us)
        mag = 1.0 + np.maximum.reduce([np.abs(left), np.abs((lam[i] + dl) * v), np.abs(c * d1), np.abs(hv * d2)])
        out = np.maximum(out, np.abs(left - right) / mag)
    return out
