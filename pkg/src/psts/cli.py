"""Command line front end: ``psts <command> ...``.

Structures are read from a file (JSON or text blocks), from stdin with
``-``, or named directly from the catalog (``veblen``, ``ag(2)``, ...).
Exit codes: 0 ok / property holds, 1 property fails / not found / not
isomorphic, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io
from .constructions import (
    ConstructionError,
    bose,
    catalog,
    convolve,
    linear_completion,
    poly_triangle,
    quotient_by_base,
    weave,
    weave_eps,
)
from .core import (
    IncidenceStructure,
    InvalidStructure,
    connected_components,
    params,
    triangles,
)
from .detect import Pattern, check_property, find_subconfig, veblen_occurrences
from .groups import AbelianGroup, GroupError
from .morphisms import MorphismError, automorphism_group, embedding, isomorphism
from .suite import CHECKS, run_suite

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def resolve(src: str | None, default: str | None = None) -> IncidenceStructure:
    """A path, ``-`` for stdin, or a catalog name."""
    src = src or default
    if src is None:
        raise UsageError("no input structure (give a path, '-', a catalog name, or --input)")
    if src == "-" or os.path.exists(src):
        return io.load(src)
    try:
        return catalog(src)
    except ConstructionError as e:
        raise UsageError(f"{src!r} is neither a readable file nor a catalog structure ({e})")


def emit(args, data, structure: bool = False):
    """Write a structure (in --format) or a JSON document to --output."""
    if structure:
        text = io.dumps(data, args.format)
    else:
        text = json.dumps(data, indent=2) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _labels(s, pts):
    return [s.points[p] for p in pts]


def _witness(s, w):
    # turn point indices inside a witness into labels
    if w is None:
        return None
    if isinstance(w, dict):
        return {k: (_witness(s, v) if isinstance(v, (tuple, list)) else s.points[v] if isinstance(v, int) else v)
                for k, v in w.items()}
    if isinstance(w, (tuple, list)):
        return [s.points[p] if isinstance(p, int) else p for p in w]
    return w


# -- commands -------------------------------------------------------------------------------


def cmd_build(args):
    kind = args.kind
    a = args.args
    try:
        if kind == "weave":
            if len(a) != 2:
                raise UsageError("build weave M BASE")
            m, base = int(a[0]), resolve(a[1], args.input)
            s = weave(m, base) if args.eps in (None, 1) else weave_eps(m, args.eps, base)
        elif kind == "convolve":
            if len(a) not in (2, 3):
                raise UsageError("build convolve BASE GROUP [EPS]")
            base, G = resolve(a[0], args.input), AbelianGroup.parse(a[1])
            eps = G.parse_elem(a[2]) if len(a) == 3 else G.zero()
            s = convolve(base, G, eps)
        elif kind == "poly":
            if len(a) != 2:
                raise UsageError("build poly M GAMMA")
            s = poly_triangle(int(a[0]), a[1])
        elif kind == "quotient":
            s = quotient_by_base(resolve(a[0] if a else None, args.input))
        elif kind == "complete":
            s = linear_completion(resolve(a[0] if a else None, args.input))
        elif kind == "bose":
            if len(a) != 1:
                raise UsageError("build bose N")
            s = bose(int(a[0]))
        else:  # catalog
            if not a:
                raise UsageError("build catalog NAME [PARAMS...]")
            s = catalog(a[0], *(int(x) for x in a[1:]))
    except ValueError as e:
        if isinstance(e, (ConstructionError, InvalidStructure, GroupError, io.FormatError)):
            raise
        raise UsageError(str(e))
    emit(args, s, structure=True)
    return EXIT_OK


def cmd_analyze(args):
    s = resolve(args.src, args.input)
    p = params(s)
    comps = connected_components(s)
    doc = {
        "name": s.name,
        "label_kind": s.label_kind,
        "v": p.v,
        "b": p.b,
        "r": p.r,
        "regular": p.regular,
        "degrees": {str(d): s.degrees.count(d) for d in sorted(set(s.degrees))},
        "components": len(comps),
        "triangles": len(triangles(s)),
        "pasch": len(veblen_occurrences(s)),
    }
    for prop in ("moufangian", "anti-fano", "miter-free"):
        doc[prop] = check_property(s, prop).holds
    emit(args, doc)
    return EXIT_OK


def cmd_detect(args):
    s = resolve(args.src, args.input)
    pat = Pattern.parse(args.pattern)
    hits = find_subconfig(s, pat, limit=args.limit, workers=args.workers)
    emit(args, {
        "pattern": pat.label,
        "host": s.name,
        "count": len(hits),
        "complete": args.limit is None or len(hits) < args.limit,
        "hits": [{"points": _labels(s, h.points), "lines": [_labels(s, L) for L in h.lines]} for h in hits],
    })
    return EXIT_OK if hits else EXIT_NO


def cmd_check(args):
    s = resolve(args.src, args.input)
    res = check_property(s, args.property, args.m)
    emit(args, {"property": args.property, "host": s.name, "holds": res.holds, "witness": _witness(s, res.witness)})
    return EXIT_OK if res.holds else EXIT_NO


def cmd_iso(args):
    a, b = resolve(args.a), resolve(args.b)
    f = isomorphism(a, b)
    emit(args, {"a": a.name, "b": b.name, "isomorphic": f is not None, "map": f.labelled(a, b) if f else None})
    return EXIT_OK if f else EXIT_NO


def cmd_embed(args):
    a, b = resolve(args.a), resolve(args.b)
    f = embedding(a, b)
    emit(args, {"a": a.name, "b": b.name, "embeds": f is not None, "map": f.labelled(a, b) if f else None})
    return EXIT_OK if f else EXIT_NO


def cmd_aut(args):
    s = resolve(args.src, args.input)
    g = automorphism_group(s)
    emit(args, {
        "name": s.name,
        "order": g.order,
        "base": _labels(s, g.base),
        "generators": [{s.points[i]: s.points[x] for i, x in enumerate(h.map) if i != x} for h in g.generators],
    })
    return EXIT_OK


def cmd_verify(args):
    scope = args.only or "all"
    quiet = args.output not in (None, "-") or args.junit == "-"

    def show(r):
        if not quiet:
            print(f"{r.status.upper():4} {r.id:32} {r.elapsed:7.2f}s  {r.details.splitlines()[0] if r.details else ''}", flush=True)

    try:
        report = run_suite(scope, progress=show)
    except KeyError as e:
        raise UsageError(e.args[0])
    if args.junit:
        xml = report.junit()
        if args.junit == "-":
            sys.stdout.write(xml)
        else:
            with open(args.junit, "w") as fh:
                fh.write(xml)
    if args.output not in (None, "-"):
        emit(args, [r.__dict__ for r in report.results])
    if not quiet:
        bad = [r.id for r in report.results if r.status == "fail"]
        print(f"{len(report.results) - len(bad)}/{len(report.results)} checks passed" + (f"; failed: {', '.join(bad)}" if bad else ""))
    return report.exit_code


def cmd_export(args):
    s = resolve(args.src, args.input)
    text = io.export_dot(s, args.mode)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    # SUPPRESS so that a flag given before the subcommand is not reset by the subparser
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--input", "-i", default=S, help="input structure (path, '-', or catalog name)")
    p.add_argument("--output", "-o", default=S, help="output path or '-' (default stdout)")
    p.add_argument("--format", choices=("json", "text"), default=S, help="structure output format (default json)")
    p.add_argument("--workers", type=int, default=S, help="worker processes for pattern searches")
    p.add_argument("--limit", type=int, default=S, help="stop after K occurrences")
    p.add_argument("--seedless", action="store_true", default=S, help="accepted for compatibility; every command is deterministic")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="psts", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="construct a structure")
    p.add_argument("kind", choices=("weave", "convolve", "poly", "quotient", "complete", "bose", "catalog"))
    p.add_argument("args", nargs="*", help="weave M BASE | convolve BASE GROUP [EPS] | poly M GAMMA | "
                   "quotient [BASE] | complete [BASE] | bose N | catalog NAME [N]")
    p.add_argument("--eps", type=int, default=None, help="weave: weight shift epsilon (default 1)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", parents=[common], help="parameters and basic properties")
    p.add_argument("src", nargs="?")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("detect", parents=[common], help="find subconfigurations")
    p.add_argument("pattern", help="veblen|pasch|fano|desargues|miter|pappus|k4closure|poly(M,GAMMA)|catalog name")
    p.add_argument("src", nargs="?")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("check", parents=[common], help="test a property")
    p.add_argument("property", help="pasch-free|moufangian|anti-fano|anti-desargues|miter-free|pappus-diagonals|anti-M-polypappian")
    p.add_argument("src", nargs="?")
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_check)

    for name, fn, what in (("iso", cmd_iso, "isomorphism"), ("embed", cmd_embed, "embedding of A into B")):
        p = sub.add_parser(name, parents=[common], help=f"find an {what}")
        p.add_argument("a")
        p.add_argument("b")
        p.set_defaults(func=fn)

    p = sub.add_parser("aut", parents=[common], help="automorphism group order and generators")
    p.add_argument("src", nargs="?")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("only", nargs="*", metavar="CHECK", help=f"check ids (default all): {', '.join(CHECKS)}")
    p.add_argument("--junit", metavar="PATH", help="write a JUnit XML report ('-' for stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", parents=[common], help="export for drawing")
    p.add_argument("target", choices=("dot",))
    p.add_argument("src", nargs="?")
    p.add_argument("--mode", choices=("clique", "line-node"), default="clique")
    p.set_defaults(func=cmd_export)
    return parser


_DEFAULTS = {"input": None, "output": None, "format": "json", "workers": 1, "limit": None, "seedless": False}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.workers < 1 or (args.limit is not None and args.limit < 1):
        parser.error("--workers and --limit must be positive")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"psts: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (io.FormatError, InvalidStructure, ConstructionError, GroupError, MorphismError, OSError) as e:
        print(f"psts: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:  # bad pattern / property names and similar
        print(f"psts: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
