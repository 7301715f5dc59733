"""The perturbed renewal risk process ``U(t) = u + c t - S(t) + sigma B(t)``."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .claims import Penalty, RationalClaim
from .errors import ModelError, NonpositiveLoading, ZeroVolatility
from .phase_type import PhaseType

__all__ = ["RiskModel", "a_of_s"]


@dataclass(frozen=True, eq=False)
class RiskModel:
    """Premium rate ``c``, volatility ``sigma``, discount force ``delta`` and the
    interclaim / claim-size / penalty components.

    The initial capital is not part of the model; solvers take it as a query
    argument. Construction validates the model, so every instance is admissible.
    """

    c: float
    sigma: float
    delta: float
    interclaims: PhaseType
    claims: RationalClaim
    penalty: Penalty = Penalty()

    def __post_init__(self):
        for name in ("c", "sigma", "delta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        self.validate()

    def validate(self) -> float:
        """Check admissibility and return the safety loading ``c E[V] / E[Z] - 1``."""
        for name in ("c", "sigma", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise ModelError(f"{name} must be finite")
        if not self.c > 0:
            raise ModelError(f"premium rate must be positive, got c={self.c}")
        if self.sigma == 0:
            raise ZeroVolatility("sigma = 0: the model must be perturbed by diffusion")
        if self.sigma < 0:
            raise ModelError(f"sigma must be positive, got {self.sigma}")
        if self.delta < 0:
            raise ModelError(f"delta must be >= 0, got {self.delta}")
        theta = self.loading
        if not theta > 0:
            raise NonpositiveLoading(
                f"positive safety loading violated: c E[V] = {self.c * self.interclaims.mean():.6g}"
                f" <= E[Z] = {self.claims.mean():.6g}"
            )
        return theta

    @property
    def n(self) -> int:
        return self.interclaims.n

    @property
    def m(self) -> int:
        return self.claims.m

    @property
    def half_var(self) -> float:
        return 0.5 * self.sigma**2

    @property
    def loading(self) -> float:
        return self.c * self.interclaims.mean() / self.claims.mean() - 1.0

    def a(self, s: complex) -> complex:
        """``sigma^2/2 s^2 + c s - delta``."""
        return self.half_var * s * s + self.c * s - self.delta

    def replace(self, **changes) -> "RiskModel":
        return dataclasses.replace(self, **changes)


def a_of_s(model: RiskModel, s: complex) -> complex:
    return model.a(s)
