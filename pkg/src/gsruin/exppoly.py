"""Exponential polynomials ``sum c * x**k * exp(-rate * x)`` on ``[0, inf)``.

The class is closed under addition, scaling, convolution, differentiation
and the Dickson-Hipp operator, which is everything the closed-form
solutions need.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DivergentTail, PoleError

__all__ = ["ExpPoly", "Term", "RATE_TOL", "lin_comb"]

RATE_TOL = 1e-9


@dataclass(frozen=True)
class Term:
    coeff: complex
    rate: complex
    power: int

    def __call__(self, x):
        return self.coeff * x**self.power * np.exp(-self.rate * x)


def _same_rate(a: complex, b: complex) -> bool:
    return abs(a - b) <= RATE_TOL * max(1.0, abs(a), abs(b))


def _normalize(terms: Iterable[Term]) -> tuple[Term, ...]:
    merged: list[list] = []  # [coeff, rate, power]
    for t in terms:
        if t.coeff == 0:
            continue
        for m in merged:
            if m[2] == t.power and _same_rate(m[1], t.rate):
                m[0] += t.coeff
                break
        else:
            merged.append([complex(t.coeff), complex(t.rate), int(t.power)])
    out = [Term(c, r, k) for c, r, k in merged if c != 0]
    out.sort(key=lambda t: (t.rate.real, t.rate.imag, t.power))
    return tuple(out)


class ExpPoly:
    """Immutable exponential polynomial.

    Terms with the same (rate, power) are merged, using a relative tolerance of
    ``RATE_TOL`` on the rate, and exact zero coefficients are dropped.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Term | tuple] = ()):
        ts = (t if isinstance(t, Term) else Term(complex(t[0]), complex(t[1]), int(t[2])) for t in terms)
        object.__setattr__(self, "terms", _normalize(ts))

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    @classmethod
    def exp(cls, rate: complex, coeff: complex = 1.0, power: int = 0) -> "ExpPoly":
        return cls([Term(coeff, rate, power)])

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls()

    # -- evaluation ---------------------------------------------------------
    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise ValueError("exponential polynomials are evaluated on x >= 0")
        out = np.zeros(x.shape, dtype=complex)
        for t in self.terms:
            out = out + t(x)
        return out[()] if out.ndim == 0 else out

    def real(self, x):
        return np.real(self.evaluate(x))

    # -- linear structure ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, float)) and other == 0:
            return self
        return ExpPoly(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly(Term(-t.coeff, t.rate, t.power) for t in self.terms)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = complex(k)
        return ExpPoly(Term(t.coeff * k, t.rate, t.power) for t in self.terms)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1.0 / complex(k))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __repr__(self):
        inner = " + ".join(f"({t.coeff:.6g})x^{t.power}e^(-({t.rate:.6g})x)" for t in self.terms)
        return f"ExpPoly[{inner or '0'}]"

    def shift(self, r: complex) -> "ExpPoly":
        """Multiply by ``exp(-r x)``."""
        return ExpPoly(Term(t.coeff, t.rate + r, t.power) for t in self.terms)

    def rates(self) -> list[complex]:
        return sorted({t.rate for t in self.terms}, key=lambda z: (z.real, z.imag))

    def coefficient(self, rate: complex, power: int = 0) -> complex:
        return sum((t.coeff for t in self.terms if t.power == power and _same_rate(t.rate, rate)), 0j)

    def scale(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    def pruned(self, rtol: float = 1e-12) -> "ExpPoly":
        """Drop terms whose coefficient is negligible relative to the largest one."""
        s = self.scale()
        return ExpPoly(t for t in self.terms if abs(t.coeff) > rtol * s)

    def conj(self) -> "ExpPoly":
        return ExpPoly(Term(t.coeff.conjugate(), t.rate.conjugate(), t.power) for t in self.terms)

    # -- calculus -----------------------------------------------------------
    def derivative(self, order: int = 1) -> "ExpPoly":
        f = self
        for _ in range(order):
            out = []
            for t in f.terms:
                out.append(Term(-t.rate * t.coeff, t.rate, t.power))
                if t.power > 0:
                    out.append(Term(t.power * t.coeff, t.rate, t.power - 1))
            f = ExpPoly(out)
        return f

    def laplace(self, s: complex) -> complex:
        """``int_0^inf exp(-s x) f(x) dx``."""
        total = 0j
        for t in self.terms:
            z = complex(s + t.rate)
            if z.real <= 0:
                raise PoleError(f"Laplace transform diverges at s={s} (Re(s + rate) <= 0)")
            total += t.coeff * math.factorial(t.power) / z ** (t.power + 1)
        return total

    def dickson_hipp(self, r: complex) -> "ExpPoly":
        """``T_r f(x) = int_x^inf exp(-r (y - x)) f(y) dy``."""
        out = []
        for t in self.terms:
            g = complex(r) + t.rate
            if g.real <= 0:
                raise DivergentTail(f"T_r diverges: Re(r + rate) = {g.real:g} <= 0")
            k = t.power
            # int_x^inf y^k e^{-g y} dy = e^{-g x} sum_i k!/i! x^i / g^{k-i+1}
            for i in range(k + 1):
                c = t.coeff * math.factorial(k) / math.factorial(i) / g ** (k - i + 1)
                out.append(Term(c, t.rate, i))
        return ExpPoly(out)

    def convolve(self, other: "ExpPoly") -> "ExpPoly":
        """``(f * g)(u) = int_0^u f(u - x) g(x) dx`` in closed form."""
        out: list[Term] = []
        for a in self.terms:
            for b in other.terms:
                out.extend(_convolve_terms(a, b))
        return ExpPoly(out)

    __matmul__ = convolve

    # -- serialization ------------------------------------------------------
    def to_json(self) -> list[dict]:
        return [
            {"coeff": [t.coeff.real, t.coeff.imag], "rate": [t.rate.real, t.rate.imag], "power": t.power}
            for t in self.terms
        ]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "ExpPoly":
        return cls(Term(complex(*d["coeff"]), complex(*d["rate"]), int(d["power"])) for d in data)


def _convolve_terms(a: Term, b: Term) -> list[Term]:
    j, k = a.power, b.power
    c = a.coeff * b.coeff
    if _same_rate(a.rate, b.rate):
        # e^{-l u} int_0^u (u-x)^j x^k dx = e^{-l u} u^{j+k+1} j! k! / (j+k+1)!
        coef = c * math.factorial(j) * math.factorial(k) / math.factorial(j + k + 1)
        return [Term(coef, a.rate, j + k + 1)]
    # Laplace side: c j! k! / ((s+l)^J (s+m)^K), J = j+1, K = k+1, split by partial fractions
    lam, mu = a.rate, b.rate
    J, K = j + 1, k + 1
    pref = c * math.factorial(j) * math.factorial(k)
    out = []
    d = mu - lam
    for i in range(1, J + 1):
        coef = pref * math.comb(J + K - i - 1, J - i) * (-1) ** (J - i) / d ** (J + K - i)
        out.append(Term(coef / math.factorial(i - 1), lam, i - 1))
    for i in range(1, K + 1):
        coef = pref * math.comb(J + K - i - 1, K - i) * (-1) ** (K - i) / (-d) ** (J + K - i)
        out.append(Term(coef / math.factorial(i - 1), mu, i - 1))
    return out


def lin_comb(weights: Sequence[complex], polys: Sequence[ExpPoly]) -> ExpPoly:
    """``sum(w * f)`` over matching sequences."""
    terms: list[Term] = []
    for w, f in zip(weights, polys):
        if w == 0:
            continue
        terms.extend(Term(t.coeff * w, t.rate, t.power) for t in f.terms)
    return ExpPoly(terms)
