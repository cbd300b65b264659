"""JSON documents for solutions, partner potentials and verification reports.

Complex numbers are written as ``[re, im]``.  Floats go through ``repr``
(shortest round-trip form), so reading a document back reproduces every
parameter bit for bit.
"""
from __future__ import annotations

import json
from typing import Any

from .construct import (AnsatzParams, Eigenpair, PolyExpState, QESSolution, SexticPotential,
                        SymmetryReport)
from .poly import ComplexPoly, PoleTerm, cfmt, cparse
from .susy import RationalPotential

SCHEMA = "qes/1"


def _poly_out(p: ComplexPoly) -> list[list[float]]:
    return [cfmt(c) for c in p.coeffs]


def _poly_in(rows) -> ComplexPoly:
    return ComplexPoly([cparse(r) for r in rows])


def _jsonable(v):
    if isinstance(v, complex):
        return cfmt(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def solution_to_dict(sol: QESSolution) -> dict[str, Any]:
    p = sol.params
    return {
        "schema": SCHEMA,
        "case": sol.case,
        "params": {"b1": cfmt(p.b1), "b2": cfmt(p.b2), "b3": cfmt(p.b3)},
        "potential": {"c": [cfmt(c) for c in sol.potential.c]},
        "eigenpairs": [
            {"E": cfmt(ep.energy), "f": _poly_out(ep.state.f), "g": _poly_out(ep.state.g)}
            for ep in sol.eigenpairs
        ],
        "symmetry": {
            "potential_pt": sol.symmetry.potential_pt,
            "parities": list(sol.symmetry.state_pt_parity),
            "broken": sol.symmetry.explicitly_broken,
        },
        "provenance": {k: _jsonable(v) for k, v in sol.provenance.items()},
    }


def solution_from_dict(d: dict[str, Any]) -> QESSolution:
    """Rebuild a solution exactly as stored; no residual check is applied here."""
    _check_schema(d)
    params = AnsatzParams(*(cparse(d["params"][k]) for k in ("b1", "b2", "b3")))
    V = SexticPotential(*(cparse(c) for c in d["potential"]["c"]))
    pairs = tuple(
        Eigenpair(cparse(e["E"]), PolyExpState(_poly_in(e["f"]), _poly_in(e["g"])))
        for e in d["eigenpairs"]
    )
    sym = d.get("symmetry", {})
    report = SymmetryReport(bool(sym.get("potential_pt", False)),
                            tuple(sym.get("parities", ())), bool(sym.get("broken", False)))
    return QESSolution(d["case"], params, V, pairs, report, dict(d.get("provenance", {})))


def solutions_document(solutions) -> dict[str, Any]:
    return {"schema": SCHEMA, "solutions": [solution_to_dict(s) for s in solutions]}


def load_solutions(d: dict[str, Any]) -> list[QESSolution]:
    """Accept a single solution object or a ``{"solutions": [...]}`` document."""
    _check_schema(d)
    if "solutions" in d:
        return [solution_from_dict(s) for s in d["solutions"]]
    return [solution_from_dict(d)]


def rational_to_dict(U: RationalPotential) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "poly": _poly_out(U.poly),
        "poles": [{"r": cfmt(p.location), "s": cfmt(p.strength), "order": p.order} for p in U.poles],
    }


def rational_from_dict(d: dict[str, Any]) -> RationalPotential:
    _check_schema(d)
    poles = tuple(PoleTerm(cparse(p["r"]), cparse(p["s"]), int(p["order"])) for p in d["poles"])
    return RationalPotential(_poly_in(d["poly"]), poles)


def scatter_to_dict(res) -> dict[str, Any]:
    return {"k": res.k, "R": cfmt(res.R), "T": cfmt(res.T), "oracle_error": res.oracle_error}


def _check_schema(d) -> None:
    if not isinstance(d, dict):
        raise ValueError("expected a JSON object")
    schema = d.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ValueError(f"unsupported schema {schema!r}, expected {SCHEMA!r}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True)
