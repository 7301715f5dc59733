"""Model files: INI-style sections describing one :class:`RiskModel`.

Example::

    [process]
    c = 1
    sigma = 1
    delta = 0

    [interclaims]
    kind = coxian
    rates = 1, 4
    probs = 0.5

    [claims]
    kind = exponential
    beta = 1

    [penalty]
    kind = unit
    w0 = 1

Interclaim kinds: ``exponential`` (rate), ``generalized_erlang`` (rates),
``coxian`` (rates, probs), ``matrix`` (alpha, B with rows separated by ``;``).
Claim kinds: ``exponential`` (beta), ``erlang`` (k, beta),
``hyperexponential`` (weights, rates), ``rational`` (r_top, r_bot as
ascending coefficients). Penalty kinds: ``unit``,
``bivariate_exponential`` (s1, s2), ``deficit_power`` (j); all take ``w0``.
"""
from __future__ import annotations

import configparser
import math
from pathlib import Path
from typing import Union

import numpy as np

from . import claims as _claims
from . import phase_type as _ph
from .claims import Penalty
from .errors import SpecFileError
from .model import RiskModel

__all__ = ["parse_model", "load_model", "dump_model"]

_SECTIONS = {
    "process": {"c", "sigma", "delta"},
    "interclaims": {"kind", "rate", "rates", "probs", "alpha", "b"},
    "claims": {"kind", "beta", "k", "weights", "rates", "r_top", "r_bot"},
    "penalty": {"kind", "s1", "s2", "j", "w0"},
}
_REQUIRED = {
    ("interclaims", "exponential"): {"rate"},
    ("interclaims", "generalized_erlang"): {"rates"},
    ("interclaims", "coxian"): {"rates", "probs"},
    ("interclaims", "matrix"): {"alpha", "b"},
    ("claims", "exponential"): {"beta"},
    ("claims", "erlang"): {"k", "beta"},
    ("claims", "hyperexponential"): {"weights", "rates"},
    ("claims", "rational"): {"r_top", "r_bot"},
    ("penalty", "unit"): set(),
    ("penalty", "bivariate_exponential"): {"s1", "s2"},
    ("penalty", "deficit_power"): {"j"},
}
_OPTIONAL = {"penalty": {"w0"}}


def _number(text: str, where: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise SpecFileError(f"{where}: {text!r} is not a number") from None
    if not math.isfinite(v):
        raise SpecFileError(f"{where}: {text!r} is not finite")
    return v


def _vector(text: str, where: str) -> list[float]:
    text = text.strip()
    if not text:
        raise SpecFileError(f"{where}: empty list")
    parts = [p.strip() for p in text.split(",")] if "," in text else text.split()
    if not all(parts):
        raise SpecFileError(f"{where}: empty entry in {text!r}")
    return [_number(p, where) for p in parts]


def _matrix(text: str, where: str) -> np.ndarray:
    rows = [_vector(r, where) for r in text.split(";") if r.strip()]
    if not rows or len({len(r) for r in rows}) != 1:
        raise SpecFileError(f"{where}: rows must be non-empty and of equal length")
    return np.array(rows)


def _integer(text: str, where: str) -> int:
    v = _number(text, where)
    if v != int(v):
        raise SpecFileError(f"{where}: {text!r} is not an integer")
    return int(v)


def _section(cp: configparser.ConfigParser, name: str, kinded: bool) -> tuple[str, dict]:
    sec = dict(cp[name])
    unknown = set(sec) - _SECTIONS[name]
    if unknown:
        raise SpecFileError(f"[{name}]: unknown keys {sorted(unknown)}")
    if not kinded:
        return "", sec
    kind = sec.pop("kind", None)
    if kind is None:
        raise SpecFileError(f"[{name}]: missing 'kind'")
    req = _REQUIRED.get((name, kind))
    if req is None:
        raise SpecFileError(f"[{name}]: unknown kind {kind!r}")
    allowed = req | _OPTIONAL.get(name, set())
    missing = req - set(sec)
    if missing:
        raise SpecFileError(f"[{name}] kind={kind}: missing {sorted(missing)}")
    extra = set(sec) - allowed
    if extra:
        raise SpecFileError(f"[{name}] kind={kind}: unknown keys {sorted(extra)}")
    return kind, sec


def parse_model(text: str) -> RiskModel:
    """Parse model-file text. Syntax and schema problems raise ``SpecFileError``;
    admissibility problems raise the matching ``ModelError``."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";;"), interpolation=None)
    cp.optionxform = str.lower
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise SpecFileError(f"malformed model file: {exc}") from None
    extra = set(cp.sections()) - set(_SECTIONS)
    if extra:
        raise SpecFileError(f"unknown sections {sorted(extra)}")
    for need in ("process", "interclaims", "claims"):
        if need not in cp:
            raise SpecFileError(f"missing section [{need}]")

    _, proc = _section(cp, "process", kinded=False)
    for key in ("c", "sigma"):
        if key not in proc:
            raise SpecFileError(f"[process]: missing {key!r}")
    c = _number(proc["c"], "process.c")
    sigma = _number(proc["sigma"], "process.sigma")
    delta = _number(proc.get("delta", "0"), "process.delta")

    kind, sec = _section(cp, "interclaims", kinded=True)
    if kind == "exponential":
        inter = _ph.exponential(_number(sec["rate"], "interclaims.rate"))
    elif kind == "generalized_erlang":
        inter = _ph.generalized_erlang(_vector(sec["rates"], "interclaims.rates"))
    elif kind == "coxian":
        inter = _ph.coxian(_vector(sec["rates"], "interclaims.rates"), _vector(sec["probs"], "interclaims.probs"))
    else:
        inter = _ph.PhaseType(_vector(sec["alpha"], "interclaims.alpha"), _matrix(sec["b"], "interclaims.B"))

    kind, sec = _section(cp, "claims", kinded=True)
    if kind == "exponential":
        claim = _claims.exponential(_number(sec["beta"], "claims.beta"))
    elif kind == "erlang":
        claim = _claims.erlang(_integer(sec["k"], "claims.k"), _number(sec["beta"], "claims.beta"))
    elif kind == "hyperexponential":
        claim = _claims.hyperexponential(_vector(sec["weights"], "claims.weights"), _vector(sec["rates"], "claims.rates"))
    else:
        claim = _claims.from_polys(_vector(sec["r_top"], "claims.r_top"), _vector(sec["r_bot"], "claims.r_bot"))

    pen = Penalty()
    if "penalty" in cp:
        kind, sec = _section(cp, "penalty", kinded=True)
        w0 = _number(sec.get("w0", "1"), "penalty.w0")
        if kind == "unit":
            pen = Penalty.unit(w0)
        elif kind == "bivariate_exponential":
            pen = Penalty.bivariate_exponential(_number(sec["s1"], "penalty.s1"), _number(sec["s2"], "penalty.s2"), w0)
        else:
            pen = Penalty.deficit_power(_integer(sec["j"], "penalty.j"), w0)

    return RiskModel(c, sigma, delta, inter, claim, pen)


def load_model(path: Union[str, Path]) -> RiskModel:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from None
    return parse_model(text)


def _fmt(xs) -> str:
    return ", ".join(repr(float(x)) for x in xs)


def dump_model(model: RiskModel) -> str:
    """Model-file text for ``model`` (interclaims as a raw matrix, claims as polynomials)."""
    ph, cl, pen = model.interclaims, model.claims, model.penalty
    rows = "; ".join(_fmt(r) for r in ph.B)
    lines = [
        "[process]",
        f"c = {model.c!r}",
        f"sigma = {model.sigma!r}",
        f"delta = {model.delta!r}",
        "",
        "[interclaims]",
        "kind = matrix",
        f"alpha = {_fmt(ph.alpha)}",
        f"B = {rows}",
        "",
        "[claims]",
        "kind = rational",
        f"r_top = {_fmt(np.real(cl.r_top.coeffs))}",
        f"r_bot = {_fmt(np.real(cl.r_bot.coeffs))}",
        "",
        "[penalty]",
        f"kind = {pen.kind}",
        f"w0 = {pen.w0!r}",
    ]
    if pen.kind == "bivariate_exponential":
        lines += [f"s1 = {pen.s1!r}", f"s2 = {pen.s2!r}"]
    elif pen.kind == "deficit_power":
        lines.append(f"j = {pen.j}")
    return "\n".join(lines) + "\n"
