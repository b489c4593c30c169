"""Structured reports for the command line tool.

Every report is a plain dict with a fixed key order, so ``json.dumps`` of
the same input is byte-identical between runs.  Coefficients are written as
strings in the input grammar and read back exactly by :func:`series_from_report`.
"""
from __future__ import annotations

import json

from . import __version__
from .equivalence import EquivalenceCertificate
from .normalform import check_normal_form
from .parse import format_holo, format_series, parse_polynomial
from .scalars import format_rational
from .series import HoloMapPair, WeightedSeries
from .surface import Hypersurface, anchor_index, kappa_invariant
from .symmetry import SymmetryGroup

SCHEMA = "crsym-report/1"


def new_report(command: str, truncation) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "provenance": {"truncation": truncation, "crsym": __version__},
    }


def terms(s: WeightedSeries) -> list:
    return [{"index": list(idx), "coeff": str(v)} for idx, v in s.items()]


def series_block(s: WeightedSeries) -> dict:
    return {"expression": format_series(s) or "0", "k": s.k, "truncation": s.W, "terms": terms(s)}


def series_from_report(block: dict) -> WeightedSeries:
    coeffs = parse_polynomial(block["expression"])
    return WeightedSeries(coeffs, block["k"], block["truncation"])


def invariants(M: Hypersurface) -> dict:
    info = M.info
    out = {
        "k": M.k,
        "l": info.l,
        "kappa": None if info.circular else kappa_invariant(info),
        "circular": info.circular,
        "model": format_series(M.model_part()),
        "is_model": M.is_model(),
    }
    if M.is_model():
        out["anchor"] = None
        out["p"] = None
    else:
        a = anchor_index(M)
        out["anchor"] = list(a.index)
        out["p"] = a.p
    out["normal_form"] = check_normal_form(M) if info.circular else None
    return out


def map_block(m: HoloMapPair) -> dict:
    return {"f": format_holo(m.f, m.k), "g": format_holo(m.g, m.k)}


def symmetry_block(G: SymmetryGroup) -> dict:
    return {
        "tag": G.tag,
        "label": str(G),
        "order": G.order,
        "generators": [str(g) for g in G.generators],
        "side_swap": G.side_swap,
    }


def certificate_block(c: EquivalenceCertificate) -> dict:
    out = {"verdict": c.verdict, "scope": c.scope}
    w = c.witness
    out["witness"] = None if w is None else {
        "sign": w.sign,
        "phase": None if w.phase is None else str(w.phase),
        "phase_power": w.phase_power,
        "phase_target_sq": str(w.phase_target_sq),
        "moduli": [str(r) for r in w.moduli],
        "lam_abs": None if w.lam_abs is None else format_rational(w.lam_abs),
        "c_abs": None if w.c_abs is None else format_rational(w.c_abs),
        "verified_by": w.verified_by,
    }
    r = c.refutation
    out["refutation"] = None if r is None else {
        "kind": r.kind,
        "detail": r.detail,
        "kernel_vector": list(r.kernel_vector),
        "indices": [list(i) for i in r.indices],
    }
    out["modulus_freedom"] = c.modulus_freedom
    out["phase_solutions"] = c.phase_solutions
    return out


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=True) + "\n"


def _text_lines(value, prefix: str, out: list):
    if isinstance(value, dict):
        for key, v in value.items():
            _text_lines(v, f"{prefix}.{key}" if prefix else key, out)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for n, v in enumerate(value):
            _text_lines(v, f"{prefix}[{n}]", out)
    else:
        if isinstance(value, list):
            text = "[" + ", ".join(str(v) for v in value) + "]"
        elif value is None:
            text = "-"
        else:
            text = str(value).lower() if isinstance(value, bool) else str(value)
        out.append(f"{prefix}: {text}")


def to_text(report: dict) -> str:
    lines: list = []
    # the term lists duplicate the expressions; leave them to the json form
    slim = json.loads(json.dumps(report), object_hook=lambda d: {k: v for k, v in d.items() if k != "terms"})
    _text_lines(slim, "", lines)
    return "\n".join(lines) + "\n"
