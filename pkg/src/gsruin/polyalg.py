"""Complex polynomials, root finding, adjugates and divided differences."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DegenerateRoots, NumericalError

__all__ = [
    "Poly",
    "poly_arith",
    "poly_roots",
    "adjugate",
    "det",
    "faddeev_leverrier",
    "check_separation",
    "divided_differences",
    "divided_difference",
    "TOL_SEP",
]

TOL_SEP = 1e-6


def _strip(coeffs: Iterable[complex]) -> tuple[complex, ...]:
    c = [complex(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    if not c:
        c = [0j]
    return tuple(c)


@dataclass(frozen=True)
class Poly:
    """Polynomial with complex coefficients in ascending degree order.

    ``Poly([1, 0, 2])`` is ``1 + 2 s**2``. Trailing exact zeros are removed
    on construction, so ``degree`` is ``len(coeffs) - 1`` and the zero
    polynomial is ``Poly([0])`` (degree 0 by this convention).
    """

    coeffs: tuple[complex, ...]

    def __init__(self, coeffs: Iterable[complex]):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "Poly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    @classmethod
    def monomial(cls, k: int, coeff: complex = 1.0) -> "Poly":
        return cls([0.0] * k + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0

    def __call__(self, s):
        # Horner; works for scalars and numpy arrays
        acc = 0j * np.asarray(s) if isinstance(s, np.ndarray) else 0j
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Poly(x * other for x in self.coeffs)
        other = _as_poly(other)
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1.0])
        for _ in range(k):
            out = out * self
        return out

    def compose(self, inner: "Poly") -> "Poly":
        """``self(inner(s))`` by Horner's scheme on polynomials."""
        acc = Poly([0.0])
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def derivative(self) -> "Poly":
        if self.degree == 0:
            return Poly([0.0])
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def roots(self) -> list[complex]:
        return poly_roots(self)

    def scale(self) -> float:
        return max(abs(c) for c in self.coeffs)

    def __repr__(self):
        return f"Poly({[complex(c) for c in self.coeffs]!r})"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([x])


def poly_arith(a: Poly, b: Poly, kind: str) -> Poly:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "compose":
        return a.compose(b)
    raise ValueError(f"unknown polynomial operation {kind!r}")


def poly_roots(p: Poly, polish_steps: int = 6) -> list[complex]:
    """All complex roots of ``p``, repeated according to multiplicity.

    Eigenvalues of the companion matrix are refined by a few Newton steps;
    a Newton step is kept only when it does not increase ``|p(root)|``.
    """
    if p.is_zero():
        raise NumericalError("the zero polynomial has no well-defined roots")
    n = p.degree
    if n == 0:
        return []
    c = np.asarray(p.coeffs, dtype=complex)
    monic = c[:-1] / c[-1]
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -monic
    roots = np.linalg.eigvals(comp)

    dp = p.derivative()
    out = []
    for r in roots:
        r = complex(r)
        best = abs(p(r))
        for _ in range(polish_steps):
            d = dp(r)
            if d == 0 or best == 0:
                break
            cand = r - p(r) / d
            val = abs(p(cand))
            if val > best:
                break
            r, best = cand, val
        out.append(r)
    return out


def det(m: np.ndarray) -> complex:
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    if n == 2:
        return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if n == 3:
        return (
            m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
        )
    return complex(np.linalg.det(m))


def _cofactor_adjugate(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    out = np.empty((n, n), dtype=complex)
    idx = np.arange(n)
    for i in range(n):
        rows = idx[idx != i]
        for j in range(n):
            cols = idx[idx != j]
            out[j, i] = (-1) ** (i + j) * det(m[np.ix_(rows, cols)])
    return out


def adjugate(m: np.ndarray) -> np.ndarray:
    """Adjugate (classical adjoint) ``adj(m)`` with ``m @ adj(m) == det(m) I``.

    Defined for singular matrices too. Cofactor expansion for n <= 4;
    larger well-conditioned matrices use ``det * inv``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError("adjugate needs a square matrix")
    n = m.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    if n <= 4:
        return _cofactor_adjugate(m)
    if np.linalg.cond(m) < 1e8:
        return np.linalg.det(m) * np.linalg.inv(m)
    return _cofactor_adjugate(m)


def faddeev_leverrier(a: np.ndarray) -> tuple[Poly, list[np.ndarray]]:
    """Characteristic polynomial and adjugate expansion of ``z I - a``.

    Returns ``(chi, mats)`` with ``chi(z) = det(z I - a)`` and
    ``adj(z I - a) = sum(mats[k] * z**(n-1-k))``.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    coeffs = [0j] * (n + 1)
    coeffs[n] = 1.0
    mats = []
    mk = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        mats.append(mk)
        amk = a @ mk
        ck = -np.trace(amk) / k
        coeffs[n - k] = ck
        mk = amk + ck * np.eye(n)
    return Poly(coeffs), mats


def check_separation(nodes: Sequence[complex], tol_sep: float = TOL_SEP, what: str = "nodes") -> None:
    if len(nodes) < 2:
        return
    scale = max(1.0, max(abs(x) for x in nodes))
    for x, y in itertools.combinations(nodes, 2):
        if abs(x - y) <= tol_sep * scale:
            raise DegenerateRoots(f"{what} {x} and {y} are not distinct (tolerance {tol_sep:g})")


def divided_differences(nodes: Sequence[complex], values: Sequence, tol_sep: float = TOL_SEP) -> list[list]:
    """Full divided-difference table.

    ``table[k][i]`` is ``f[x_i, ..., x_{i+k}]``; in particular ``table[k][0]``
    runs over the prefixes ``f[x_0..x_k]``. Values may be scalars or arrays.
    """
    if len(nodes) != len(values):
        raise ValueError("nodes and values differ in length")
    check_separation(nodes, tol_sep)
    table = [list(values)]
    for k in range(1, len(nodes)):
        prev = table[-1]
        table.append([(prev[i + 1] - prev[i]) / (nodes[i + k] - nodes[i]) for i in range(len(nodes) - k)])
    return table


def divided_difference(f: Callable, nodes: Sequence[complex], tol_sep: float = TOL_SEP):
    """``f[x_0, ..., x_k]`` for a callable ``f``."""
    nodes = list(nodes)
    if not nodes:
        raise ValueError("at least one node required")
    table = divided_differences(nodes, [f(x) for x in nodes], tol_sep)
    return table[-1][0]
