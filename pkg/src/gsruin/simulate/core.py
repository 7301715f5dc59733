"""Monte Carlo estimates of ruin probabilities and discounted penalties.

Between claims the surplus is a drifted Brownian motion. It is advanced
exactly in segments; a zero crossing inside a segment is detected from the
segment endpoints with the bridge crossing probability, and the crossing
time is then drawn exactly from the conditioned bridge.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..model import RiskModel
from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

__all__ = [
    "SimConfig",
    "SimEstimate",
    "PathOutcome",
    "sample_path",
    "estimate",
    "suggest_level_cap",
    "kernel_params",
    "available_kernels",
    "default_kernel",
    "run_paths",
]

SURVIVED, RUIN_CLAIM, RUIN_OSC = 0, 1, 2


def available_kernels() -> list[str]:
    return (["c"] if _ckernel is not None else []) + ["python"]


def default_kernel() -> str:
    """``GSRUIN_KERNEL=python`` forces the fallback; otherwise the compiled kernel if built."""
    env = os.environ.get("GSRUIN_KERNEL", "").strip().lower()
    if env in ("python", "py"):
        return "python"
    if env == "c" and _ckernel is None:
        raise ImportError("GSRUIN_KERNEL=c but the compiled kernel is not built")
    return "c" if _ckernel is not None else "python"


def _kernel(name: str):
    if name == "auto":
        name = default_kernel()
    if name == "c":
        if _ckernel is None:
            raise ImportError("compiled kernel not available")
        return _ckernel
    if name == "python":
        return _pykernel
    raise ValueError(f"unknown kernel {name!r}")


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``grid_step=None`` advances the diffusion one interclaim interval at a
    time, which is exact; a positive value splits intervals into segments of
    at most that length. A path stops as survived once it passes
    ``level_cap`` or the horizon ``t_max``; when both are left at their
    defaults :func:`estimate` picks a cap from :func:`suggest_level_cap`.
    """

    n_paths: int = 100_000
    t_max: float = math.inf
    grid_step: Optional[float] = None
    seed: int = 0
    level_cap: Optional[float] = None
    block_size: int = 10_000
    kernel: str = "auto"
    start_phase: Optional[int] = None
    cap_tol: float = 1e-4

    def __post_init__(self):
        if int(self.n_paths) < 1:
            raise ValueError("n_paths must be >= 1")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if self.grid_step is not None and not self.grid_step > 0:
            raise ValueError("grid_step must be positive")
        if int(self.block_size) < 1:
            raise ValueError("block_size must be >= 1")


@dataclass(frozen=True)
class PathOutcome:
    kind: str  # "survived" | "ruin_claim" | "ruin_osc"
    T: float
    surplus_before: float = 0.0
    deficit: float = 0.0


@dataclass(frozen=True)
class SimEstimate:
    """Sample means over paths.

    ``psi_*`` are ruin probabilities by cause, ``phi_*`` the discounted
    counterparts ``E[exp(-delta T) w; claim]`` and ``E[exp(-delta T); oscillation]``,
    ``penalty_hat = phi_w_hat + w0 phi_d_hat``.
    """

    psi_w_hat: float
    psi_d_hat: float
    phi_w_hat: float
    phi_d_hat: float
    penalty_hat: float
    std_errors: dict
    n_ruin_claim: int
    n_ruin_osc: int
    n_paths: int
    level_cap: float
    kernel: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def psi_hat(self) -> float:
        return self.psi_w_hat + self.psi_d_hat

    def to_json(self) -> dict:
        return {
            "psi_w": self.psi_w_hat,
            "psi_d": self.psi_d_hat,
            "phi_w": self.phi_w_hat,
            "phi_d": self.phi_d_hat,
            "penalty": self.penalty_hat,
            "std_errors": dict(self.std_errors),
            "n_ruin_claim": self.n_ruin_claim,
            "n_ruin_osc": self.n_ruin_osc,
            "n_paths": self.n_paths,
            "level_cap": self.level_cap,
        }


def _claim_sampler(model: RiskModel, n_table: int = 4096) -> dict:
    dens = model.claims.density
    weights, rates, shapes = [], [], []
    mixture = True
    for t in dens.terms:
        rate = complex(t.rate)
        coeff = complex(t.coeff)
        if abs(rate.imag) > 0 or abs(coeff.imag) > 0:
            mixture = False
            break
        w = coeff.real * math.factorial(t.power) / rate.real ** (t.power + 1)
        if w <= 0:
            mixture = False
            break
        weights.append(w)
        rates.append(rate.real)
        shapes.append(t.power + 1)
    empty = np.zeros(1)
    if mixture:
        cum = np.cumsum(weights) / np.sum(weights)
        cum[-1] = 1.0
        return {
            "claim_mode": 0,
            "mix_cum": cum,
            "mix_rate": np.array(rates, dtype=float),
            "mix_shape": np.array(shapes, dtype=np.int64),
            "tab_x": empty,
            "tab_cdf": empty,
        }
    # inverse-CDF table on a grid that resolves the bulk and the tail
    tail = model.claims.tail()
    slow = min(t.rate.real for t in dens.terms)
    hi = 5.0 / slow
    while tail.real(hi) > 1e-13:
        hi *= 1.5
    xs = np.linspace(0.0, hi, n_table)
    cdf = np.clip(1.0 - tail.real(xs), 0.0, 1.0)
    cdf = np.maximum.accumulate(cdf)
    cdf[0] = 0.0
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    return {
        "claim_mode": 1,
        "mix_cum": empty,
        "mix_rate": np.ones(1),
        "mix_shape": np.ones(1, dtype=np.int64),
        "tab_x": np.ascontiguousarray(xs[keep]),
        "tab_cdf": np.ascontiguousarray(cdf[keep]),
    }


def kernel_params(model: RiskModel, config: SimConfig, level_cap: float) -> dict:
    ph = model.interclaims
    rates, jump = ph.jump_table()
    acum = np.cumsum(ph.alpha)
    acum[-1] = 1.0
    start = -1 if config.start_phase is None else int(config.start_phase)
    if not -1 <= start < ph.n:
        raise ValueError(f"start_phase must be in [0, {ph.n - 1}]")
    p = {
        "c": model.c,
        "sigma": model.sigma,
        "t_max": float(config.t_max),
        "level_cap": float(level_cap),
        "grid_step": 0.0 if config.grid_step is None else float(config.grid_step),
        "start_phase": start,
        "alpha_cum": np.ascontiguousarray(acum, dtype=float),
        "rates": np.ascontiguousarray(rates, dtype=float),
        "jump_cum": np.ascontiguousarray(jump, dtype=float),
    }
    p.update(_claim_sampler(model))
    return p


def suggest_level_cap(model: RiskModel, u: float, tol: float = 1e-4) -> float:
    """Level above which the remaining ruin probability is below ``tol``.

    Uses the slowest exponential decay rate of the ruin probability; with
    discounting the cap can be infinite because the horizon does the work.
    """
    from ..lundberg import find_roots

    rmin = find_roots(model.replace(delta=0.0)).R_min
    return float(u + math.log(1.0 / tol) / rmin)



def run_paths(model: RiskModel, u: float, config: SimConfig, level_cap: Optional[float] = None):
    """Raw per-path outcomes ``(code, T, surplus_before, deficit)``.

    Paths are split into blocks of ``block_size``; block ``k`` uses the k-th
    child of ``SeedSequence(seed)``, so results do not depend on the kernel.
    """
    cap = _resolve_cap(model, u, config) if level_cap is None else level_cap
    p = kernel_params(model, config, cap)
    kern = _kernel(config.kernel)
    n = int(config.n_paths)
    code = np.zeros(n, dtype=np.int8)
    T = np.zeros(n)
    xb = np.zeros(n)
    yd = np.zeros(n)
    nblocks = -(-n // int(config.block_size))
    children = np.random.SeedSequence(config.seed).spawn(nblocks)
    for bi, child in enumerate(children):
        lo = bi * config.block_size
        hi = min(n, lo + config.block_size)
        rng = np.random.Generator(np.random.PCG64(child))
        kern.run_block(rng, hi - lo, float(u), p, code[lo:hi], T[lo:hi], xb[lo:hi], yd[lo:hi])
    return code, T, xb, yd


def _resolve_cap(model: RiskModel, u: float, config: SimConfig) -> float:
    if config.level_cap is not None:
        return float(config.level_cap)
    if math.isfinite(config.t_max):
        return math.inf
    if model.delta > 0:
        return math.inf
    return suggest_level_cap(model, u, config.cap_tol)


def _mean_se(vals: np.ndarray) -> tuple[float, float]:
    n = len(vals)
    mean = math.fsum(vals) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((vals - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def estimate(model: RiskModel, u: float, config: SimConfig = SimConfig()) -> SimEstimate:
    """Sample-mean estimates with standard errors; reproducible given the seed."""
    cfg = config
    if model.delta > 0 and not math.isfinite(cfg.t_max) and cfg.level_cap is None:
        # discounting makes late ruin negligible: exp(-delta t) < cap_tol
        cfg = _replace(cfg, t_max=math.log(1.0 / cfg.cap_tol) / model.delta)
    cap = _resolve_cap(model, u, cfg)
    code, T, xb, yd = run_paths(model, u, cfg, cap)
    claim = code == RUIN_CLAIM
    osc = code == RUIN_OSC
    disc = np.exp(-model.delta * T)
    pen = model.penalty
    w = np.where(claim, pen.w(xb, yd), 0.0)
    fw = np.where(claim, disc * w, 0.0)
    fd = np.where(osc, disc, 0.0)
    total = fw + pen.w0 * fd
    out = {}
    se = {}
    for name, vals in (
        ("psi_w", claim.astype(float)),
        ("psi_d", osc.astype(float)),
        ("phi_w", fw),
        ("phi_d", fd),
        ("penalty", total),
        ("psi", (claim | osc).astype(float)),
    ):
        out[name], se[name] = _mean_se(vals)
    return SimEstimate(
        psi_w_hat=out["psi_w"],
        psi_d_hat=out["psi_d"],
        phi_w_hat=out["phi_w"],
        phi_d_hat=out["phi_d"],
        penalty_hat=out["penalty"],
        std_errors=se,
        n_ruin_claim=int(claim.sum()),
        n_ruin_osc=int(osc.sum()),
        n_paths=int(cfg.n_paths),
        level_cap=cap,
        kernel=cfg.kernel if cfg.kernel != "auto" else default_kernel(),
        extra={"t_max": cfg.t_max, "n_survived": int((code == SURVIVED).sum())},
    )


def _replace(cfg: SimConfig, **changes) -> SimConfig:
    import dataclasses

    return dataclasses.replace(cfg, **changes)


def sample_path(model: RiskModel, u: float, config: SimConfig, rng: np.random.Generator) -> PathOutcome:
    """One path with the pure-Python kernel, drawing from ``rng``."""
    cap = _resolve_cap(model, u, config)
    p = kernel_params(model, config, cap)
    code = np.zeros(1, dtype=np.int8)
    T, xb, yd = np.zeros(1), np.zeros(1), np.zeros(1)
    _pykernel.run_block(rng, 1, float(u), p, code, T, xb, yd)
    kind = {SURVIVED: "survived", RUIN_CLAIM: "ruin_claim", RUIN_OSC: "ruin_osc"}[int(code[0])]
    return PathOutcome(kind, float(T[0]), float(xb[0]), float(yd[0]))
