"""Command-line front end.

Exit codes: 0 success, 1 a verification verdict failed, 2 malformed input
or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import io
from ._util import ValidationError, VerificationError
from .complexes import (
    FiniteQuotientHom,
    PresentationData,
    TwoComplex,
    abelianization,
    cover_complex,
    presentation_complex,
)
from .constructions import (
    DEFAULT_MAX_N,
    artin_presentation,
    double_cover_gog,
    rewritten_presentation,
    theta_family,
    verify_paper_report,
)
from .gog import GraphOfGraphs, classify_cleanliness, cover_gog, pi1_presentation
from .stallings import INFINITE, NotAFreeBasis, subgroup_graph, subgroup_index
from .words import Word


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def cmd_verify(args) -> int:
    rep = verify_paper_report(args.n, max_n=args.max_n, conservative=args.conservative_free_factor)
    sys.stdout.write(rep.to_table())
    if args.output:
        _emit(rep.to_json(), args.output)
    return 0 if rep.passed else 1


def cmd_build(args) -> int:
    if args.what == "presentation":
        obj = rewritten_presentation(args.n, args.max_n) if args.rewritten else artin_presentation(args.n, args.max_n)
    elif args.what == "double-cover":
        obj = double_cover_gog(args.n, args.max_n)
    else:
        obj = theta_family(args.n, args.max_n)
    _emit(io.dumps(obj), args.output)
    return 0


def _load_gog(path: str) -> GraphOfGraphs:
    obj = io.load(path)
    if not isinstance(obj, GraphOfGraphs):
        raise ValidationError(f"{path} does not contain a graph of graphs")
    return obj


def cmd_check_clean(args) -> int:
    rep = classify_cleanliness(_load_gog(args.file), conservative=args.conservative_free_factor)
    _emit(_json(rep.to_dict()), args.output)
    return 0


def cmd_cover(args) -> int:
    obj = io.load(args.file)
    h = io.load(args.hom)
    if not isinstance(h, FiniteQuotientHom):
        raise ValidationError(f"{args.hom} does not contain a homomorphism")
    if isinstance(obj, GraphOfGraphs):
        out, _ = cover_gog(obj, h)
    elif isinstance(obj, TwoComplex):
        out = cover_complex(obj, h).complex
    elif isinstance(obj, PresentationData):
        out = cover_complex(presentation_complex(obj), h).complex
    else:
        raise ValidationError("cover needs a complex, a presentation or a graph of graphs")
    _emit(io.dumps(out), args.output)
    return 0


def cmd_pi1(args) -> int:
    pres = pi1_presentation(_load_gog(args.file))
    data = io.presentation_to_data(pres)
    betti, torsion = abelianization(pres)
    data["abelianization"] = {"free_rank": betti, "torsion": torsion}
    _emit(_json(data), args.output)
    return 0


def cmd_subgroup(args) -> int:
    if args.rank < 0:
        raise ValidationError("rank must be nonnegative")
    words = [Word.parse(w) for w in args.words]
    sg = subgroup_graph(words, args.rank)
    index = subgroup_index(sg)
    data = {
        "basis": list(sg.basis),
        "rank": sg.rank,
        "index": "infinite" if index == INFINITE else index,
        "vertices": len(sg.graph.vertices),
        "edges": len(sg.graph.edges),
        "graph": io.stallings_to_data(sg),
    }
    _emit(_json(data), args.output)
    return 0


def cmd_export(args) -> int:
    obj = io.load(args.file)
    if args.format == "dot":
        if isinstance(obj, PresentationData):
            obj = presentation_complex(obj)
        try:
            text = io.export_dot(obj)
        except TypeError as exc:
            raise ValidationError(str(exc)) from exc
    else:
        text = io.dumps(obj)
    _emit(text, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--conservative-free-factor", action="store_true",
                        help="report 'unknown' instead of 'no' for free-factor verdicts")
    common.add_argument("-o", "--output", help="write the main artifact here instead of stdout")

    parser = argparse.ArgumentParser(prog="gogkit", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the A(2,n,inf) pipeline report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("build", parents=[common], help="build a fixture in native format")
    p.add_argument("what", choices=["presentation", "double-cover", "family"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--rewritten", action="store_true", help="presentation in the generators a, b, x")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check-clean", parents=[common], help="classify cleanliness of a graph of graphs")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_clean)

    p = sub.add_parser("cover", parents=[common], help="cyclic cover of a complex or graph of graphs")
    p.add_argument("file")
    p.add_argument("--hom", required=True)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("pi1", parents=[common], help="presentation of the fundamental group")
    p.add_argument("file")
    p.set_defaults(func=cmd_pi1)

    p = sub.add_parser("subgroup", parents=[common], help="Stallings graph of a subgroup")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_subgroup)

    p = sub.add_parser("export", parents=[common], help="re-emit a file as DOT or native JSON")
    p.add_argument("--format", choices=["dot", "native"], required=True)
    p.add_argument("file")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, NotAFreeBasis, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
