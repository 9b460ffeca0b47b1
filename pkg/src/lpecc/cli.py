"""``lpecc`` command line: verify, bound, build designs, construct codes, solve, tabulate.

Every subcommand is a thin adapter over the library.  Output is JSON by
default (``--format text`` gives aligned tables).  Exit status: 0 on
success, 1 on a domain failure, 2 on usage or parse errors, 3 when a scale
guard trips.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from . import bounds, constructions, designs, solver
from .core import LPECC, MODES, LpeccCode, dumps_canonical, load_code, save_code, verify_code
from .errors import LpeccError, ParameterError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit 2 as well; keep it explicit
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(doc: Any, fmt: str, text: Optional[Callable[[Any], str]] = None) -> None:
    if fmt == "text" and text is not None:
        print(text(doc))
    else:
        print(json.dumps(doc, indent=2))


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(map(str, header))] + [["-" if c is None else str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(wd) for c, wd in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * wd for wd in widths))
    return "\n".join(lines)


def _write(doc_text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(doc_text)
    else:
        with open(path, "w") as fh:
            fh.write(doc_text)


def _add_params(p: argparse.ArgumentParser, mode: bool = True) -> None:
    p.add_argument("--q", type=int, default=2, help="alphabet size (default 2)")
    p.add_argument("--n", type=int, required=True, help="number of wires")
    p.add_argument("--t", type=int, required=True, help="number of hot wires to avoid")
    p.add_argument("--w", type=int, required=True, help="maximum codeword weight")
    p.add_argument("--e", type=int, required=True, help="errors corrected")
    if mode:
        p.add_argument("--mode", choices=MODES, default=LPECC)


# ---------------------------------------------------------------- verify


def _report_text(doc: dict[str, Any]) -> str:
    lines = [f"{prop:<14} {'pass' if ok else 'FAIL'}" for prop, ok in doc["passed"].items()]
    for v in doc["violations"]:
        lines.append(f"  {v['property']} {v['clause']} codesets={v['codesets']} witness={v['witness']}")
    for k, v in doc["stats"].items():
        lines.append(f"{k}: {v}")
    lines.append("OK" if doc["ok"] else "FAILED")
    return "\n".join(lines)


def cmd_verify(args: argparse.Namespace) -> int:
    code = load_code(args.file)
    if args.mode:
        code = code.with_mode(args.mode)
    report = verify_code(code, characterization=args.characterization)
    doc = report.to_dict()
    doc["b"] = code.b
    _emit(doc, args.format, _report_text)
    return EXIT_OK if report.ok else EXIT_FAIL


# ---------------------------------------------------------------- bounds


def cmd_bounds(args: argparse.Namespace) -> int:
    rep = bounds.bounds_summary(args.q, args.n, args.t, args.w, args.e, args.mode)
    doc = rep.to_dict()
    doc["best_lower"] = rep.best_lower()
    doc["best_upper"] = rep.best_upper()

    def text(d: dict[str, Any]) -> str:
        rows = [(e["name"], e["kind"], e["value"], e["floor"], "yes" if e["applicable"] else "no",
                 e["clause"]) for e in d["entries"]]
        body = _table(("bound", "kind", "value", "floor", "applies", "clause"), rows)
        return f"{body}\nbest lower: {d['best_lower']}  best upper: {d['best_upper']}"

    _emit(doc, args.format, text)
    return EXIT_OK


# ---------------------------------------------------------------- design


def _design_summary(design: Any) -> dict[str, Any]:
    doc = design.to_dict()
    summary = {k: v for k, v in doc.items() if not isinstance(v, list)}
    if isinstance(design, designs.Packing):
        summary["blocks"] = len(design.blocks)
        check = designs.verify_packing(design)
        summary["steiner"] = check.steiner
    elif isinstance(design, designs.Frame):
        summary["classes"] = len(design.classes)
        summary["blocks"] = len(design.blocks)
    else:
        summary["words"] = len(design.words)
    return summary


def cmd_design(args: argparse.Namespace) -> int:
    kind = args.kind
    extra: dict[str, Any] = {}
    if kind == "packing":
        size, design = designs.brute_max_packing(args.n, args.k, args.r)
        extra["size"] = size
    elif kind == "bibd-ds":
        base, design = designs.planar_difference_set(args.s)
        extra["base_block"] = list(base)
    elif kind == "affine":
        design = designs.affine_plane(args.p)
    elif kind == "frame":
        design = designs.search_frame(args.k, args.g, args.m)
    else:
        size, design = designs.brute_max_cwc(args.q, args.n, args.d, args.w)
        extra["size"] = size
    text = dumps_canonical(design.to_dict())
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        _write(text, args.output)
        summary = _design_summary(design) | extra | {"output": args.output}
        _emit(summary, args.format, lambda d: "\n".join(f"{k}: {v}" for k, v in d.items()))
    return EXIT_OK


# ---------------------------------------------------------------- construct


def _code_summary(code: LpeccCode, output: Optional[str]) -> dict[str, Any]:
    p = code.params
    doc: dict[str, Any] = {"q": p.q, "n": p.n, "t": p.t, "w": p.w, "e": p.e, "mode": p.mode,
                           "b": code.b, "verified": bool(verify_code(code))}
    if code.provenance:
        doc["source"] = code.provenance.get("source")
        doc["discarded"] = len(code.provenance.get("discarded", []))
    if output:
        doc["output"] = output
    return doc


def cmd_construct(args: argparse.Namespace) -> int:
    design = designs.load_design(args.input)
    kind = args.kind
    expected = {"packing": designs.Packing, "frame3": designs.Frame, "frame4": designs.Frame,
                "cwc": designs.ConstantWeightCode}[kind]
    if not isinstance(design, expected):
        raise ParameterError(f"construct {kind} needs a {expected.__name__} file, got {type(design).__name__}")
    if kind == "packing":
        if args.w is None or args.e is None:
            raise ParameterError("construct packing needs --w and --e")
        code = constructions.lpecc_from_packing(design, args.t, args.w, args.e, args.infinity)
    elif kind == "frame3":
        code = constructions.lpecc_from_frame3(design, args.t)
    elif kind == "frame4":
        code = constructions.lpecc_from_frame4(design, args.t)
    else:
        if args.w is None or args.e is None:
            raise ParameterError("construct cwc needs --w and --e")
        code = constructions.qary_from_cwc(design, args.t, args.w, args.e, args.mode or LPECC)
    text = dumps_canonical(code.to_dict())
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        _write(text, args.output)
        _emit(_code_summary(code, args.output), args.format,
              lambda d: "\n".join(f"{k}: {v}" for k, v in d.items()))
    return EXIT_OK


# ---------------------------------------------------------------- solve


def cmd_solve(args: argparse.Namespace) -> int:
    if args.threads < 1:
        raise ParameterError(f"--threads must be >= 1, got {args.threads}")
    res = solver.solve(args.q, args.n, args.t, args.w, args.e, args.mode, args.threads,
                       allow_zero=args.allow_zero)
    doc = res.summary()
    if args.output:
        save_code(res.code, args.output)
        doc["output"] = args.output
    else:
        doc["witness"] = res.code.to_dict()
    _emit(doc, args.format, lambda d: "\n".join(
        f"{k}: {v}" for k, v in d.items() if k != "witness"))
    return EXIT_OK


# ---------------------------------------------------------------- table


@dataclass
class Row:
    params: tuple[int, int, int, int, int]
    published: Optional[int]
    citation: str
    build: Optional[Callable[[], LpeccCode]] = None
    solve: bool = False


def _packing_ds(s: int, t: int, w: int, e: int) -> Callable[[], LpeccCode]:
    return lambda: constructions.lpecc_from_packing(designs.planar_difference_set(s)[1], t, w, e)


def _packing_affine(p: int, t: int, w: int, e: int) -> Callable[[], LpeccCode]:
    return lambda: constructions.lpecc_from_packing(designs.affine_plane(p), t, w, e)


def _frame3(g: int, m: int, t: int) -> Callable[[], LpeccCode]:
    return lambda: constructions.lpecc_from_frame3(designs.search_frame(3, g, m), t)


def _frame4(g: int, m: int, t: int) -> Callable[[], LpeccCode]:
    return lambda: constructions.lpecc_from_frame4(designs.search_frame(4, g, m), t)


TABLE_ROWS = (
    Row((2, 4, 1, 3, 1), 1, "C(n,1,3,1) = floor(n(n+1)/12), n != 6", solve=True),
    Row((2, 5, 1, 3, 1), 2, "C(n,1,3,1) = floor(n(n+1)/12), n != 6", solve=True),
    Row((2, 6, 1, 3, 1), 2, "C(6,1,3,1) = 2", solve=True),
    Row((2, 6, 2, 3, 1), 1, "C(6,2,3,1) = 1", solve=True),
    Row((2, 7, 1, 3, 1), 4, "C(n,1,3,1) = floor(n(n+1)/12), n != 6", solve=True),
    Row((2, 6, 1, 2, 1), 2, "C(n,t,w,w-1) = floor((n+1)/(w+t))", solve=True),
    Row((2, 6, 2, 3, 2), 1, "C(n,t,w,w-1) = floor((n+1)/(w+t))", solve=True),
    Row((2, 8, 1, 3, 1), 6, "C(n,t,3,1) = floor(n(n+1)/(6(t+1))), n even, n = 2 (mod 3(t+1))",
        _frame3(2, 4, 1)),
    Row((2, 14, 1, 3, 1), 17, "C(n,t,3,1) = floor(n(n+1)/(6(t+1))), n even, n = 2 (mod 3(t+1))",
        _frame3(2, 7, 1)),
    Row((2, 14, 3, 3, 1), 8, "C(n,t,3,1) = floor(n(n+1)/(6(t+1))), n even, n = 2 (mod 3(t+1))",
        _frame3(2, 7, 3)),
    Row((2, 15, 1, 4, 2), None, "C(n,t,4,2) >= 4-frame construction of type 3^(n/3)",
        _frame4(3, 5, 1)),
    Row((2, 30, 1, 5, 3), 31, "C(n,t,w,w-2) = C(n+1,2)/C(w+t,2) when an (n+1,w+t,1)-BIBD exists",
        _packing_ds(5, 1, 5, 3)),
    Row((2, 48, 1, 6, 4), 56, "C(n,t,w,w-2) = C(n+1,2)/C(w+t,2) when an (n+1,w+t,1)-BIBD exists",
        _packing_affine(7, 1, 6, 4)),
)


def _row_doc(row: Row, reproduce: bool) -> dict[str, Any]:
    q, n, t, w, e = row.params
    rep = bounds.bounds_summary(q, n, t, w, e)
    lower_entries = [x for x in rep.applicable("lower")]
    upper_entries = [x for x in rep.applicable("upper")]
    doc: dict[str, Any] = {
        "params": list(row.params),
        "published": row.published,
        "citation": row.citation,
        "lower_bound": max((x.floor_value for x in lower_entries), default=None),
        "lower_source": ",".join(x.name for x in lower_entries) or None,
        "upper_bound": min((x.floor_value for x in upper_entries), default=None),
        "upper_source": ",".join(x.name for x in upper_entries) or None,
        "construction": None,
        "exact": None,
    }
    if reproduce and row.build is not None:
        code = row.build()
        doc["construction"] = code.b
    if reproduce and row.solve:
        doc["exact"] = solver.solve(q, n, t, w, e).size
    lo = max((v for v in (doc["lower_bound"], doc["construction"]) if v is not None), default=None)
    up = doc["upper_bound"]
    if doc["exact"] is None and lo is not None and lo == up:
        doc["exact"] = lo
        doc["exact_note"] = "bounds meet"
    values = [v for v in (doc["published"], doc["exact"]) if v is not None]
    consistent = (lo is None or up is None or lo <= up) and all(
        (lo is None or v >= lo) and (up is None or v <= up) for v in values)
    if doc["published"] is not None and doc["exact"] is not None:
        doc["status"] = "match" if doc["published"] == doc["exact"] and consistent else "MISMATCH"
    else:
        doc["status"] = "consistent" if consistent else "MISMATCH"
    return doc


def cmd_table(args: argparse.Namespace) -> int:
    rows = [_row_doc(r, args.reproduce) for r in TABLE_ROWS]
    doc = {"reproduce": args.reproduce, "rows": rows}

    def text(d: dict[str, Any]) -> str:
        body = [("(" + ",".join(map(str, r["params"])) + ")", r["published"], r["construction"],
                 r["lower_bound"], r["upper_bound"], r["exact"], r["status"], r["citation"])
                for r in d["rows"]]
        return _table(("q,n,t,w,e", "published", "construction", "lower", "upper", "exact", "status",
                       "citation"), body)

    _emit(doc, args.format, text)
    return EXIT_OK if all(r["status"] != "MISMATCH" for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lpecc", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)

    p = sub.add_parser("verify", help="check properties A, B and C of a code file")
    p.add_argument("file")
    p.add_argument("--characterization", action="store_true",
                   help="also check the e = w-2 block structure")
    p.add_argument("--mode", choices=MODES, default=None, help="override the file's mode")
    fmt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="evaluate every bound at the given parameters")
    _add_params(p)
    fmt(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("design", help="generate a design and write it as JSON")
    dsub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    d = dsub.add_parser("packing", help="maximum r-(n,k,1) packing by exhaustive search")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--r", type=int, default=2)
    d = dsub.add_parser("bibd-ds", help="(s^2+s+1, s+1, 1)-BIBD from a planar difference set")
    d.add_argument("--s", type=int, required=True)
    d = dsub.add_parser("affine", help="lines of the affine plane AG(2,p), p prime")
    d.add_argument("--p", type=int, required=True)
    d = dsub.add_parser("frame", help="k-frame of type g^m by exact cover search")
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--g", type=int, required=True)
    d.add_argument("--m", type=int, required=True)
    d = dsub.add_parser("cwc", help="maximum constant-weight code by clique search")
    d.add_argument("--q", type=int, default=2)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--d", type=int, required=True)
    d.add_argument("--w", type=int, required=True)
    for d in dsub.choices.values():
        d.add_argument("-o", "--output", default=None)
        fmt(d)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("construct", help="build a code from a design file")
    csub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for kind, helptext in (("packing", "from a (w-e)-(n+1, w+t, 1) packing"),
                           ("frame3", "(n,t,3,1) code from a 3-frame of type 2^m"),
                           ("frame4", "(n,t,4,2) code from a 4-frame of type 3^m"),
                           ("cwc", "q-ary code from a constant-weight code")):
        c = csub.add_parser(kind, help=helptext)
        c.add_argument("--in", dest="input", required=True)
        c.add_argument("--t", type=int, required=True)
        if kind in ("packing", "cwc"):
            c.add_argument("--w", type=int, default=None)
            c.add_argument("--e", type=int, default=None)
        if kind == "packing":
            c.add_argument("--infinity", type=int, default=None,
                           help="point removed to make room (default: the largest)")
        if kind == "cwc":
            c.add_argument("--mode", choices=MODES, default=LPECC)
        c.add_argument("-o", "--output", default=None)
        fmt(c)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("solve", help="exact maximum code size at tiny parameters")
    _add_params(p)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--allow-zero", action="store_true",
                   help="admit the all-zero codeword as a candidate")
    p.add_argument("-o", "--output", default=None, help="write the witness code here")
    fmt(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="known values against bounds, constructions and the solver")
    p.add_argument("--reproduce", action="store_true",
                   help="run constructions and the solver instead of listing bounds only")
    fmt(p)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except LpeccError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
