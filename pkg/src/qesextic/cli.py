"""Command line front end: ``qes {construct,verify,partner,scatter,scan,reduce}``.

Exit status is the machine contract: 0 success, 1 failed verification,
2 bad input.  Complex values are written ``re,im``; ``i1.5`` is shorthand
for ``0,1.5`` and a bare number is real.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .construct import (AnsatzParams, construct_constant, construct_linear, construct_quadratic,
                        turbiner_reduce)
from .errors import QESError, RealAxisPole
from .poly import cfmt
from .serialize import (SCHEMA, dumps, load_solutions, rational_to_dict, scatter_to_dict,
                        solutions_document)
from .susy import partner_potential, zero_mode
from .verify import (ShootOptions, grid_diagonalize, residual_coefficients, scattering_coefficients,
                     shoot_eigenvalue)

SHOOT_AGREEMENT = 1e-6
GRID_AGREEMENT = 1e-4


class BadInput(Exception):
    pass


def default_tol() -> float:
    raw = os.environ.get("QES_DEFAULT_TOL")
    if raw is None:
        return 1e-10
    try:
        tol = float(raw)
    except ValueError:
        raise BadInput(f"QES_DEFAULT_TOL={raw!r} is not a number")
    if not tol > 0:
        raise BadInput("QES_DEFAULT_TOL must be positive")
    return tol


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    try:
        if s.startswith(("i", "-i", "+i")):
            sign = -1.0 if s.startswith("-") else 1.0
            return complex(0.0, sign * float(s.lstrip("+-")[1:]))
        if "," in s:
            re, im = s.split(",")
            return complex(float(re), float(im))
        return complex(float(s), 0.0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse complex value {text!r}")


def parse_range(text: str) -> tuple[list[float], bool]:
    """``a:b:h`` (real) or ``i:a:b:h`` (imaginary); endpoints inclusive."""
    parts = text.split(":")
    imag = parts[0] == "i"
    if imag:
        parts = parts[1:]
    try:
        if len(parts) == 1:
            return [float(parts[0])], imag
        a, b, h = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a:b:h or i:a:b:h")
    if h <= 0 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; need a <= b and h > 0")
    n = int(math.floor((b - a) / h + 1e-9)) + 1
    return [a + i * h for i in range(n)], imag


def _load(path: str):
    try:
        with open(path) as fh:
            return load_solutions(json.load(fh))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise BadInput(f"cannot read {path}: {exc}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return dumps(rows)
    buf = io.StringIO()
    cols = list(rows[0]) if rows else []
    if fmt == "csv":
        w = csv.writer(buf)
        w.writerow(cols)
        for r in rows:
            w.writerow([r[c] for c in cols])
        return buf.getvalue()
    widths = {c: max(len(c), *(len(_cell(r[c])) for r in rows)) for c in cols}
    buf.write("  ".join(c.rjust(widths[c]) for c in cols) + "\n")
    for r in rows:
        buf.write("  ".join(_cell(r[c]).rjust(widths[c]) for c in cols) + "\n")
    return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, list) and len(v) == 2:
        return f"{v[0]:.10g}{v[1]:+.10g}i"
    return str(v)


# -- subcommands ----------------------------------------------------------

def cmd_construct(args) -> int:
    if args.case == "quad":
        if args.b1 is not None and args.b1 != 0:
            raise BadInput("b1 is determined by b2 and b3 in the quadratic case")
        sols = [construct_quadratic(args.b2, args.b3)]
    else:
        params = AnsatzParams(args.b1 or 0j, args.b2, args.b3)
        sols = [construct_constant(params)] if args.case == "const" else construct_linear(params)
    if args.format == "json":
        _emit(dumps(solutions_document(sols)), args.out)
    else:
        rows = []
        for i, s in enumerate(sols):
            for j, ep in enumerate(s.eigenpairs):
                rows.append({"solution": i, "pair": j, "E": cfmt(ep.energy),
                             "potential_pt": s.symmetry.potential_pt,
                             "parity": s.symmetry.state_pt_parity[j],
                             "broken": s.symmetry.explicitly_broken})
        _emit(_table(rows, args.format), args.out)
    return 0


def _verify_one(sol, method: str, tol: float, opts: ShootOptions, grid_N: int) -> tuple[dict, bool]:
    ok = True
    p = sol.params
    report: dict = {"schema": SCHEMA,
                    "instance": {"case": sol.case, "b1": cfmt(p.b1), "b2": cfmt(p.b2), "b3": cfmt(p.b3)},
                    "scatter": []}
    if method in ("residual", "all"):
        res = max(residual_coefficients(sol.potential, ep.energy, ep.state)[0] for ep in sol.eigenpairs)
        report["residual_max"] = res
        ok &= res <= tol
    if method in ("shoot", "all"):
        shots = []
        for ep in sol.eigenpairs:
            try:
                r = shoot_eigenvalue(sol.potential, ep.energy, opts)
                dev = abs(r.energy - ep.energy)
                shots.append({"E": cfmt(r.energy), "mismatch": r.mismatch, "analytic": cfmt(ep.energy),
                              "deviation": dev, "step_error": r.step_error})
                ok &= dev <= SHOOT_AGREEMENT
            except QESError as exc:
                shots.append({"error": str(exc), "analytic": cfmt(ep.energy)})
                ok = False
        report["shooting"] = shots
    if method in ("grid", "all"):
        g = grid_diagonalize(sol.potential, opts.L, grid_N, count=6)
        eigs = np.array(g.extrapolated)
        devs = [float(np.min(np.abs(eigs - ep.energy))) for ep in sol.eigenpairs]
        report["grid"] = {"eigs": [cfmt(e) for e in g.eigenvalues], "richardson": list(g.richardson),
                          "extrapolated": [cfmt(e) for e in g.extrapolated], "deviation": devs}
        ok &= all(d <= GRID_AGREEMENT for d in devs)
    report["pass"] = bool(ok)
    return report, bool(ok)


def cmd_verify(args) -> int:
    sols = _load(args.input)
    tol = args.tol if args.tol is not None else default_tol()
    opts = ShootOptions(L=args.L, step=args.step, tol=tol)
    reports, ok = [], True
    for sol in sols:
        rep, good = _verify_one(sol, args.method, tol, opts, args.N)
        reports.append(rep)
        ok &= good
    doc = reports[0] if len(reports) == 1 else {"schema": SCHEMA, "reports": reports}
    _emit(dumps(doc), args.out)
    if not ok:
        print("verification failed", file=sys.stderr)
    return 0 if ok else 1


def cmd_partner(args) -> int:
    sols = _load(args.input)
    if not 0 <= args.solution < len(sols):
        raise BadInput(f"--solution {args.solution} out of range (0..{len(sols) - 1})")
    sol = sols[args.solution]
    if not 0 <= args.pair < len(sol.eigenpairs):
        raise BadInput(f"--pair {args.pair} out of range (0..{len(sol.eigenpairs) - 1})")
    U = partner_potential(sol.potential, sol.eigenpairs[args.pair].state)
    _emit(dumps(rational_to_dict(U)), args.out)
    return 0


def cmd_scatter(args) -> int:
    zm = zero_mode(args.pole, args.l)
    rows = []
    for k in args.k:
        res = scattering_coefficients(zm.potential, k, args.L, args.step)
        row = scatter_to_dict(res)
        row.update({"absR": abs(res.R), "absT": abs(res.T)})
        rows.append(row)
    _emit(_table(rows, args.format), args.out)
    return 0


def _scan_point(b2, b3):
    sol = construct_quadratic(b2, b3)
    up, lo = sol.eigenpairs
    return sol, up.energy, lo.energy


def cmd_scan(args) -> int:
    if args.case != "quad":
        raise BadInput("scan currently supports --case quad only")
    b2s, b2_imag = args.b2
    b3s, b3_imag = args.b3
    if b2_imag:
        raise BadInput("b2 must be real")
    grid = [(b2, complex(0, b3) if b3_imag else complex(b3)) for b2 in b2s for b3 in b3s]
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(lambda gb: _scan_point(*gb), grid))
    b3col = "Im(b3)" if b3_imag else "Re(b3)"
    rows = []
    for (b2, b3), (sol, Ep, Em) in zip(grid, results):
        rows.append({"b2": b2, b3col: b3.imag if b3_imag else b3.real,
                     "Re(E+)": Ep.real, "Im(E+)": Ep.imag, "Re(E-)": Em.real, "Im(E-)": Em.imag,
                     "pt_flag": int(sol.symmetry.potential_pt)})
    _emit(_table(rows, args.format or "csv"), args.out)
    return 0


def cmd_reduce(args) -> int:
    sols = _load(args.input)
    out = []
    for sol in sols:
        t = turbiner_reduce(sol)
        if t is None:
            out.append({"reducible": False, "message": "not reducible"})
        else:
            out.append({"reducible": True, "gamma": cfmt(t.gamma), "mu": cfmt(t.mu), "n": t.n, "r": t.r})
    _emit(dumps(out[0] if len(out) == 1 else out), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qes", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--format", choices=("json", "csv", "table"), default=fmt_default)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("construct", help="build a quasi-exactly-solvable sextic")
    p.add_argument("--case", choices=("const", "linear", "quad"), required=True)
    p.add_argument("--b1", type=parse_complex, default=None)
    p.add_argument("--b2", type=parse_complex, default=0j)
    p.add_argument("--b3", type=parse_complex, default=0j)
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a stored solution against the numerical oracles")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--method", choices=("residual", "shoot", "grid", "all"), default="all")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--L", type=float, default=ShootOptions.L)
    p.add_argument("--step", type=float, default=ShootOptions.step)
    p.add_argument("--N", type=int, default=1600)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("partner", help="SUSY partner of a stored solution")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pair", type=int, default=0)
    p.add_argument("--solution", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_partner)

    p = sub.add_parser("scatter", help="R and T for l(l+1)/2 (x - r)^-2")
    p.add_argument("--pole", type=parse_complex, required=True)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--k", type=lambda s: [float(v) for v in s.split(",")], required=True)
    p.add_argument("--L", type=float, default=50.0)
    p.add_argument("--step", type=float, default=5e-3)
    common(p)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("scan", help="sweep the two-level family over a parameter grid")
    p.add_argument("--case", choices=("quad",), default="quad")
    p.add_argument("--b2", type=parse_range, required=True)
    p.add_argument("--b3", type=parse_range, required=True)
    p.add_argument("--workers", type=int, default=None)
    common(p, fmt_default="csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("reduce", help="even-power normal form of a stored solution")
    p.add_argument("--in", dest="input", required=True)
    common(p)
    p.set_defaults(func=cmd_reduce)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (BadInput, RealAxisPole, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QESError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
