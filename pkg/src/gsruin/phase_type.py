"""Phase-type interclaim distributions with representation (alpha, B, b)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import NonStochasticAlpha, NotSubIntensity, PoleError, SingularB
from .polyalg import Poly, faddeev_leverrier

__all__ = ["PhaseType", "exponential", "generalized_erlang", "coxian", "build"]

_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class PhaseType:
    """Absorption time of a terminating Markov chain.

    ``alpha`` is the initial distribution over the n transient phases, ``B``
    the sub-intensity matrix; the exit vector ``b = -B e`` is derived. A
    user-supplied ``b`` is accepted only if it agrees with ``-B e``.
    """

    alpha: np.ndarray
    B: np.ndarray
    b: Optional[np.ndarray] = None

    def __post_init__(self):
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        B = np.atleast_2d(np.asarray(self.B, dtype=float))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "B", B)
        derived = -B.sum(axis=1) if B.ndim == 2 else None
        if self.b is not None and derived is not None:
            given = np.atleast_1d(np.asarray(self.b, dtype=float))
            if given.shape != derived.shape or np.max(np.abs(given - derived)) > _ATOL:
                raise NotSubIntensity(f"exit vector b={given} differs from -B e = {derived}")
        object.__setattr__(self, "b", derived)
        self.validate()
        alpha.setflags(write=False)
        B.setflags(write=False)
        self.b.setflags(write=False)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def validate(self) -> None:
        alpha, B = self.alpha, self.B
        if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] < 1:
            raise NotSubIntensity(f"B must be a non-empty square matrix, got shape {B.shape}")
        if alpha.shape != (B.shape[0],):
            raise NonStochasticAlpha(f"alpha has length {alpha.size}, B is {B.shape[0]}x{B.shape[0]}")
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(B))):
            raise NotSubIntensity("non-finite entries")
        if np.any(alpha < 0) or abs(alpha.sum() - 1.0) > _ATOL:
            raise NonStochasticAlpha(f"alpha must be a probability vector, got {alpha} (sum {alpha.sum():g})")
        off = B - np.diag(np.diag(B))
        if np.any(off < 0):
            raise NotSubIntensity("off-diagonal entries of B must be nonnegative")
        if np.any(self.b < -_ATOL):
            raise NotSubIntensity(f"row sums of B must be <= 0 (b = {self.b})")
        if np.any(np.diag(B) >= 0):
            if np.all(np.abs(B) == 0) or np.any(np.all(B == 0, axis=1)):
                raise SingularB("B has a zero row: a phase is never left")
            raise NotSubIntensity("diagonal entries of B must be negative")
        eig = np.linalg.eigvals(B)
        if np.any(eig.real >= -1e-12):
            raise SingularB(f"B must have all eigenvalues in the open left half-plane, got {eig}")

    # -- transforms ---------------------------------------------------------
    def lt(self, s: complex) -> complex:
        """Laplace transform ``alpha (s I - B)^{-1} b`` of the density."""
        M = s * np.eye(self.n) - self.B
        try:
            x = np.linalg.solve(M, self.b.astype(complex))
        except np.linalg.LinAlgError as exc:
            raise PoleError(f"s={s} is an eigenvalue of B") from exc
        if np.linalg.cond(M) > 1e14:
            raise PoleError(f"s={s} is an eigenvalue of B")
        return complex(self.alpha @ x)

    def rational_form(self) -> tuple[Poly, Poly]:
        """``(num, den)`` with ``lt(s) = num(s) / den(s)`` and ``den(s) = det(s I - B)``."""
        chi, mats = faddeev_leverrier(self.B)
        n = self.n
        num = Poly([self.alpha @ mats[k] @ self.b for k in range(n)][::-1])
        # mats[k] multiplies z^(n-1-k); reversing gives ascending order
        return num, chi

    def mean(self) -> float:
        return float(self.alpha @ np.linalg.solve(-self.B, np.ones(self.n)))

    def moment(self, k: int) -> float:
        """``E[V^k] = k! alpha (-B)^{-k} e``."""
        v = np.ones(self.n)
        Binv = np.linalg.inv(-self.B)
        for _ in range(k):
            v = Binv @ v
        return float(np.prod(np.arange(1, k + 1)) * (self.alpha @ v))

    def variance(self) -> float:
        return self.moment(2) - self.mean() ** 2

    def cdf(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        e = np.ones(self.n)
        out = np.array([1.0 - self.alpha @ scipy.linalg.expm(x * self.B) @ e for x in t])
        return out

    def pdf(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.array([self.alpha @ scipy.linalg.expm(x * self.B) @ self.b for x in t])

    # -- sampling -----------------------------------------------------------
    def jump_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Holding rates and cumulative jump probabilities (last column = exit)."""
        n = self.n
        rates = -np.diag(self.B)
        probs = np.zeros((n, n + 1))
        for i in range(n):
            row = self.B[i].copy()
            row[i] = 0.0
            probs[i, :n] = row / rates[i]
            probs[i, n] = self.b[i] / rates[i]
        cum = np.cumsum(probs, axis=1)
        cum[:, -1] = 1.0
        return rates, cum

    def sample(self, rng: np.random.Generator, start: Optional[int] = None) -> float:
        """One absorption time, simulating the chain phase by phase."""
        rates, cum = self.jump_table()
        n = self.n
        i = int(rng.choice(n, p=self.alpha)) if start is None else int(start)
        t = 0.0
        while True:
            t += rng.exponential(1.0 / rates[i])
            j = int(np.searchsorted(cum[i], rng.random(), side="right"))
            if j >= n:
                return t
            i = j

    def sample_many(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.array([self.sample(rng) for _ in range(size)])


def exponential(rate: float) -> PhaseType:
    if not rate > 0:
        raise NotSubIntensity(f"rate must be positive, got {rate}")
    return PhaseType([1.0], [[-float(rate)]])


def generalized_erlang(rates: Sequence[float]) -> PhaseType:
    """Chain of exponential stages ``1 -> 2 -> ... -> n -> exit``."""
    rates = [float(r) for r in rates]
    if not rates or any(not r > 0 for r in rates):
        raise NotSubIntensity(f"all stage rates must be positive, got {rates}")
    n = len(rates)
    B = np.zeros((n, n))
    for i, r in enumerate(rates):
        B[i, i] = -r
        if i + 1 < n:
            B[i, i + 1] = r
    alpha = np.zeros(n)
    alpha[0] = 1.0
    return PhaseType(alpha, B)


def coxian(rates: Sequence[float], probs: Sequence[float]) -> PhaseType:
    """Coxian chain: from stage i continue to i+1 with probability ``probs[i]``, else exit."""
    rates = [float(r) for r in rates]
    probs = [float(p) for p in probs]
    if not rates or any(not r > 0 for r in rates):
        raise NotSubIntensity(f"all stage rates must be positive, got {rates}")
    if len(probs) != len(rates) - 1 or any(not 0 <= p <= 1 for p in probs):
        raise NotSubIntensity("coxian needs n-1 continuation probabilities in [0, 1]")
    n = len(rates)
    B = np.zeros((n, n))
    for i, r in enumerate(rates):
        B[i, i] = -r
        if i + 1 < n:
            B[i, i + 1] = probs[i] * r
    alpha = np.zeros(n)
    alpha[0] = 1.0
    return PhaseType(alpha, B)


def build(kind: str, **params) -> PhaseType:
    if kind == "exponential":
        return exponential(params["rate"])
    if kind == "generalized_erlang":
        return generalized_erlang(params["rates"])
    if kind == "coxian":
        return coxian(params["rates"], params["probs"])
    if kind == "matrix":
        return PhaseType(params["alpha"], params["B"])
    raise ValueError(f"unknown phase-type kind {kind!r}")
