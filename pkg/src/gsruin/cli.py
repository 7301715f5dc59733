"""``gsruin`` command line.

Exit codes: 0 ok, 2 invalid model, 3 unreadable or malformed input,
4 numerical failure, 5 analytic and simulated values disagree.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .claims import Penalty
from .errors import ModelError, NumericalError, SpecFileError
from .gerber_shiu import solve
from .lundberg import find_roots
from .simulate import SimConfig, available_kernels, estimate
from .specfile import load_model

EXIT_OK, EXIT_MODEL, EXIT_PARSE, EXIT_NUMERIC, EXIT_COMPARE = 0, 2, 3, 4, 5
Z_LIMIT = 4.0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _g(x) -> str:
    z = complex(x)
    if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}j"


def _cx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (stop included when hit) or a comma list."""
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if not step > 0 or stop < start:
                raise ValueError
            k = int(math.floor((stop - start) / step + 1e-9))
            grid = start + step * np.arange(k + 1)
        else:
            grid = np.array([float(p) for p in text.split(",") if p.strip()])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use start:stop:step or a,b,c") from None
    if grid.size == 0 or np.any(grid < 0) or not np.all(np.isfinite(grid)):
        raise argparse.ArgumentTypeError("grid values must be finite and >= 0")
    return grid


def parse_list(text: str) -> list[float]:
    try:
        vals = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("list values must be finite")
    return vals


def _emit_table(out, header: Sequence[str], rows: Sequence[Sequence], fmt: str) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\r\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
        return
    cells = [[h for h in header]] + [[_g(x) if not isinstance(x, str) else x for x in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    for row in cells:
        out.write("  ".join(c.rjust(w) for c, w in zip(row, widths)) + "\n")


# -- commands ---------------------------------------------------------------


def cmd_validate(args, out) -> int:
    model = load_model(args.file)
    ph, cl = model.interclaims, model.claims
    info = {
        "c": model.c,
        "sigma": model.sigma,
        "delta": model.delta,
        "phases": ph.n,
        "claim_degree": cl.m,
        "claim_kind": cl.label,
        "penalty": model.penalty.kind,
        "w0": model.penalty.w0,
        "mean_interclaim": ph.mean(),
        "mean_claim": cl.mean(),
        "loading": model.loading,
    }
    if args.format == "json":
        json.dump({"valid": True, **info}, out, indent=2)
        out.write("\n")
        return EXIT_OK
    out.write("model ok\n")
    out.write(f"  c = {_g(model.c)}, sigma = {_g(model.sigma)}, delta = {_g(model.delta)}\n")
    out.write(f"  interclaims: {ph.n} phases, alpha = {np.array2string(ph.alpha)}\n")
    out.write(f"  claims: {cl.label}, degree {cl.m}\n")
    out.write(f"  penalty: {model.penalty.kind}, w0 = {_g(model.penalty.w0)}\n")
    out.write(f"E[V] = {_g(info['mean_interclaim'])}\n")
    out.write(f"E[Z] = {_g(info['mean_claim'])}\n")
    out.write(f"loading = {_g(info['loading'])}\n")
    return EXIT_OK


def cmd_roots(args, out) -> int:
    model = load_model(args.file)
    roots = find_roots(model)
    if args.format == "json":
        json.dump(roots.to_json(), out, indent=2)
        out.write("\n")
        return EXIT_OK
    rows = []
    k = len(roots.rhos)
    for i, r in enumerate(roots.rhos):
        rows.append([f"rho_{i + 1}", r, roots.residuals[i]])
    for i, r in enumerate(roots.Rs):
        rows.append([f"R_{i + 1}", r, roots.residuals[k + i]])
    _emit_table(out, ["root", "value", "residual"], rows, "text")
    return EXIT_OK


def _explain(sol) -> dict:
    d = sol.diagnostics
    return {
        "rhos": [_cx(z) for z in sol.roots.rhos],
        "Rs": [_cx(z) for z in sol.roots.Rs],
        "phi_w_prime0": [_cx(z) for z in sol.phi_w_prime0],
        "phi_d_prime0": [_cx(z) for z in sol.phi_d_prime0],
        "Q_w": [_cx(z) for z in d["Q_w"]],
        "Q_d": [_cx(z) for z in d["Q_d"]],
        "M_n": [[[_cx(z) for z in row] for row in M] for M in d["M_n"]],
        "M_n1": [[[_cx(z) for z in row] for row in M] for M in d["M_n1"]],
        "G": [_cx(z) for z in d["G"]],
    }


def _write_explain(sol, out) -> None:
    d = sol.diagnostics
    out.write("# roots rho: " + ", ".join(_g(z) for z in sol.roots.rhos) + "\n")
    out.write("# roots R:   " + ", ".join(_g(z) for z in sol.roots.Rs) + "\n")
    out.write("# phi_w'(0): " + ", ".join(_g(z) for z in sol.phi_w_prime0) + "\n")
    out.write("# phi_d'(0): " + ", ".join(_g(z) for z in sol.phi_d_prime0) + "\n")
    out.write("# Q_w(rho_n): " + ", ".join(_g(z) for z in d["Q_w"]) + "\n")
    out.write("# Q_d(rho_n): " + ", ".join(_g(z) for z in d["Q_d"]) + "\n")
    for i, (Mn, Mn1, G) in enumerate(zip(d["M_n"], d["M_n1"], d["G"])):
        out.write(f"# R_{i + 1}: G = {_g(G)}\n")
        out.write("#   M^(n)   = " + "; ".join(", ".join(_g(z) for z in row) for row in Mn) + "\n")
        out.write("#   M^(n-1) = " + "; ".join(", ".join(_g(z) for z in row) for row in Mn1) + "\n")
    for name, f in (("phi_w", sol.psi_w), ("phi_d", sol.psi_d), ("phi", sol.phi)):
        terms = " ".join(f"{'+' if complex(t.coeff).real >= 0 else '-'} {_g(abs(complex(t.coeff).real) if abs(complex(t.coeff).imag) < 1e-12 else t.coeff)}"
                         f"{'*u^%d' % t.power if t.power else ''}*exp(-{_g(t.rate)} u)" for t in f.terms)
        out.write(f"# {name}(u) = {terms}\n")


def cmd_solve(args, out) -> int:
    model = load_model(args.file)
    sol = solve(model)
    us = args.u_grid
    vals = sol.evaluate(us)
    header = ["u", "phi_w", "phi_d", "phi"]
    cols = [us, vals["phi_w"], vals["phi_d"], vals["phi"]]
    if args.phases:
        per = sol.per_phase(us)
        for i in range(model.n):
            header += [f"phi_w_{i + 1}", f"phi_d_{i + 1}"]
            cols += [per["phi_w"][i], per["phi_d"][i]]
    rows = [list(r) for r in zip(*cols)]
    if args.format == "json":
        doc = {
            "closed_form": sol.to_json(),
            "columns": header,
            "rows": [[float(x) for x in r] for r in rows],
        }
        if args.explain:
            doc["explain"] = _explain(sol)
        json.dump(doc, out, indent=2)
        out.write("\n")
        return EXIT_OK
    if args.explain and args.format == "text":
        _write_explain(sol, out)
    _emit_table(out, header, rows, args.format)
    return EXIT_OK


def laplace_curves(model, deltas: Sequence[float], us: np.ndarray) -> dict[float, np.ndarray]:
    """``E[exp(-delta T); T < inf]`` on ``us`` for each ``delta``."""
    curves = {}
    for d in deltas:
        if not d > 0:
            raise ModelError(f"each delta must be positive, got {d}")
        m = model.replace(delta=d, penalty=Penalty.unit(1.0))
        curves[d] = solve(m).evaluate(us)["phi"]
    return curves


def cmd_laplace(args, out) -> int:
    model = load_model(args.file)
    us = args.u_grid
    curves = laplace_curves(model, args.delta_list, us)
    header = ["u"] + [f"delta={d:g}" for d in curves]
    rows = [[u] + [curves[d][k] for d in curves] for k, u in enumerate(us)]
    if args.format == "json":
        doc = {"u": [float(u) for u in us], "curves": {f"{d:g}": [float(v) for v in c] for d, c in curves.items()}}
        json.dump(doc, out, indent=2)
        out.write("\n")
        return EXIT_OK
    _emit_table(out, header, rows, args.format)
    return EXIT_OK


def _z(sim: float, ana: float, se: float) -> float:
    if se > 0:
        return (sim - ana) / se
    return 0.0 if abs(sim - ana) <= 1e-12 else math.copysign(math.inf, sim - ana)


def cmd_compare(args, out) -> int:
    model = load_model(args.file)
    sol = solve(model)
    start = None if args.start_phase is None else args.start_phase - 1
    if start is not None and not 0 <= start < model.n:
        raise ModelError(f"--start-phase must be in 1..{model.n}")
    cfg = SimConfig(
        n_paths=args.paths,
        seed=args.seed,
        grid_step=args.grid_step,
        kernel=args.kernel,
        start_phase=start,
        t_max=args.t_max if args.t_max is not None else math.inf,
    )
    rows = []
    worst = 0.0
    for u in args.u_list:
        if start is None:
            ana = sol.evaluate(u)
            aw, ad = float(ana["phi_w"]), float(ana["phi_d"])
        else:
            aw = float(sol.phi_w[start].real(u))
            ad = float(sol.phi_d[start].real(u))
        aw += args.corrupt_analytic
        est = estimate(model, u, cfg)
        zw = _z(est.phi_w_hat, aw, est.std_errors["phi_w"])
        zd = _z(est.phi_d_hat, ad, est.std_errors["phi_d"])
        worst = max(worst, abs(zw), abs(zd))
        rows.append({
            "u": float(u),
            "phi_w": aw,
            "phi_w_sim": est.phi_w_hat,
            "se_w": est.std_errors["phi_w"],
            "z_w": zw,
            "phi_d": ad,
            "phi_d_sim": est.phi_d_hat,
            "se_d": est.std_errors["phi_d"],
            "z_d": zd,
        })
    ok = worst <= Z_LIMIT
    if args.format == "json":
        json.dump({"rows": rows, "max_abs_z": worst, "ok": ok, "paths": args.paths, "seed": args.seed}, out, indent=2)
        out.write("\n")
    else:
        header = list(rows[0])
        _emit_table(out, header, [[r[h] for h in header] for r in rows], args.format)
        if args.format == "text":
            out.write(f"max |z| = {_g(worst)} ({'ok' if ok else 'FAIL'}, limit {Z_LIMIT:g})\n")
    return EXIT_OK if ok else EXIT_COMPARE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gsruin", description="Gerber-Shiu functions for perturbed renewal risk models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, fmts=("text", "json")):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", help="model file")
        sp.add_argument("--format", choices=fmts, default="text")
        return sp

    add("validate", "check a model file and report its safety loading")
    add("roots", "roots of the Lundberg equation")
    sp = add("solve", "closed-form phi_w, phi_d, phi on a grid of initial capitals", ("text", "csv", "json"))
    sp.add_argument("--u-grid", type=parse_grid, default=parse_grid("0:10:1"), metavar="START:STOP:STEP")
    sp.add_argument("--phases", action="store_true", help="add per-initial-phase columns")
    sp.add_argument("--explain", action="store_true", help="dump roots, derivatives at zero and coefficients")
    sp = add("laplace", "Laplace transform of the ruin time for several discount rates", ("text", "csv", "json"))
    sp.add_argument("--delta-list", type=parse_list, default=[0.1, 0.2], metavar="D1,D2,...")
    sp.add_argument("--u-grid", type=parse_grid, default=parse_grid("0:10:1"), metavar="START:STOP:STEP")
    sp = add("compare", "analytic values against Monte Carlo estimates", ("text", "csv", "json"))
    sp.add_argument("--u-list", type=parse_list, default=[0.5, 2.0, 5.0], metavar="U1,U2,...")
    sp.add_argument("--paths", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--grid-step", type=float, default=None)
    sp.add_argument("--t-max", type=float, default=None)
    sp.add_argument("--start-phase", type=int, default=None, help="force the first interclaim phase (1-based)")
    sp.add_argument("--kernel", choices=["auto"] + available_kernels(), default="auto")
    sp.add_argument("--corrupt-analytic", type=float, default=0.0, help=argparse.SUPPRESS)
    return p


COMMANDS = {
    "validate": cmd_validate,
    "roots": cmd_roots,
    "solve": cmd_solve,
    "laplace": cmd_laplace,
    "compare": cmd_compare,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.command == "compare" and args.paths < 1:
        sys.stderr.write("error: --paths must be >= 1\n")
        return EXIT_PARSE
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except SpecFileError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except ModelError as exc:
        sys.stderr.write(f"invalid model: {exc}\n")
        return EXIT_MODEL
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
