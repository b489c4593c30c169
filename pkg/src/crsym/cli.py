"""Command line entry point.

Exit codes: 0 success, 1 unexpected library error, 2 usage error, and for
the documented failures 3 parse error, 4 non-real input, 5 not prepared,
6 not of finite type, 7 noncircular model, 8 out of scope, 9 model surface,
10 not (special) normalized, 11 singular or non-normalized map,
12 truncation too low, 13 rank defect, 14 non-affine mu condition.
"""
from __future__ import annotations

import argparse
import sys

from . import report as rp
from .equivalence import equivalent
from .errors import CRSymError, NormalizationViolation
from .normalform import normalize, prepare
from .parse import parse_map, parse_surface
from .surface import validate_surface
from .symmetry import classify
from .transform import compose, is_automorphism, pushforward


def _surfaces(args) -> list:
    texts = list(args.surface or [])
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            texts += [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    return texts


def _parse(text: str, args):
    spec, F = parse_surface(text, truncation=args.truncation, declared_k=args.k)
    return spec, F


def cmd_analyze(args, texts) -> dict:
    out = rp.new_report("analyze", args.truncation)
    out["surfaces"] = []
    for text in texts:
        spec, F = _parse(text, args)
        M, _ = prepare(F)
        out["surfaces"].append({
            "input": spec.expression,
            "truncation": spec.truncation,
            "prepared": rp.series_block(M.F),
            "invariants": rp.invariants(M),
        })
    return out


def cmd_normalize(args, texts) -> dict:
    out = rp.new_report("normalize", args.truncation)
    out["surfaces"] = []
    for text in texts:
        spec, F = _parse(text, args)
        M, stages = prepare(F)
        res = normalize(M)
        stages = stages + [res.map]
        try:
            total = stages[0]
            for m in stages[1:]:
                total = compose(total, m)
            total_block = rp.map_block(total)
        except NormalizationViolation:
            # harmonic terms below weight k: the stages do not compose on truncated series
            total_block = None
        out["surfaces"].append({
            "input": spec.expression,
            "truncation": spec.truncation,
            "invariants": rp.invariants(res.nf),
            "normal_form": rp.series_block(res.nf.F),
            "map": total_block,
            "stages": [{"step": name, **rp.map_block(m)}
                       for name, m in zip(("rescale", "harmonic", "normalize"), stages)],
        })
    return out


def cmd_classify(args, texts) -> dict:
    out = rp.new_report("classify", args.truncation)
    out["surfaces"] = []
    for text in texts:
        spec, F = _parse(text, args)
        G = classify(F, side_swap=args.side_swap, assume_normal=args.assume_normal)
        out["surfaces"].append({
            "input": spec.expression,
            "truncation": spec.truncation,
            "symmetry": rp.symmetry_block(G),
        })
    return out


def cmd_equiv(args, texts) -> dict:
    if len(texts) != 2:
        raise _Usage("equiv needs exactly two surfaces")
    (sa, A), (sb, B) = _parse(texts[0], args), _parse(texts[1], args)
    out = rp.new_report("equiv", args.truncation)
    out["surfaces"] = [{"input": s.expression, "truncation": s.truncation} for s in (sa, sb)]
    out["certificate"] = rp.certificate_block(equivalent(A, B, side_swap=args.side_swap))
    return out


def cmd_verify_map(args, texts) -> dict:
    if len(texts) != 1:
        raise _Usage("verify-map needs exactly one surface")
    spec, F = _parse(texts[0], args)
    M = validate_surface(F)
    m = parse_map(args.f, args.g, M.k, M.W)
    image = pushforward(M, m)
    out = rp.new_report("verify-map", args.truncation)
    out["surfaces"] = [{"input": spec.expression, "truncation": spec.truncation}]
    out["map"] = rp.map_block(m)
    out["pushforward"] = rp.series_block(image.F)
    out["is_automorphism"] = is_automorphism(M, m)
    return out


COMMANDS = {
    "analyze": cmd_analyze,
    "normalize": cmd_normalize,
    "classify": cmd_classify,
    "equiv": cmd_equiv,
    "verify-map": cmd_verify_map,
}


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crsym", description="Normal forms and symmetries of real hypersurfaces in C^2.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--surface", action="append", help="defining function in z, zb, u (repeatable)")
        s.add_argument("--file", help="file with one defining function per line")
        s.add_argument("--truncation", type=int, default=None, help="weight truncation (default 4k)")
        s.add_argument("--k", type=int, default=None, help="declared type instead of the detected one")
        s.add_argument("--format", choices=("text", "json"), default="text")
        if name in ("classify", "equiv"):
            s.add_argument("--side-swap", action="store_true",
                           help="also admit w -> lam w with lam < 0 for even k")
        if name == "classify":
            s.add_argument("--assume-normal", action="store_true",
                           help="treat a noncircular non-model input as already normal")
        if name == "verify-map":
            s.add_argument("--f", required=True, help="z-component of the map, in z and w")
            s.add_argument("--g", required=True, help="w-component of the map, in z and w")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for attr in ("side_swap", "assume_normal"):
        if not hasattr(args, attr):
            setattr(args, attr, False)
    texts = _surfaces(args)
    if not texts:
        parser.error("no surface given (use --surface or --file)")
    try:
        report = COMMANDS[args.command](args, texts)
    except _Usage as exc:
        parser.error(str(exc))
    except CRSymError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    sys.stdout.write(rp.to_json(report) if args.format == "json" else rp.to_text(report))
    return 0


__all__ = ["main", "build_parser"]
