"""Command-line front end.

Commands read JSON documents from a file (or ``-`` for standard input) and
write documents to standard output; diagnostics go to standard error.

Exit status: 0 success, 1 violations found, 2 unparsable input,
3 precondition violated, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Iterable, Optional, Sequence, TextIO

from .foundations import FiniteCategory, check_category
from .genmult import FiniteGenMulticat, check_gen_axioms, materialize_gen
from .opetopes import (
    enumerate_multitopes,
    enumerate_opetopes,
    lift_multitope,
    manifestation_count,
    multitope_term,
    opetope_document,
    parse_multitope,
    parse_opetope_document,
    verify_correspondence,
)
from .slice import GenSlice, SymSlice
from .symmult import FiniteSymMulticat, check_sym_axioms, materialize_sym
from .xi import PreconditionError, XiMulticat, xi_inverse

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 1, 2, 3, 4

COMMANDS = ("check", "xi", "xi-inverse", "slice", "enumerate", "manifestations", "verify")


class ParseError(ValueError):
    pass


def _dump(doc: Any) -> str:
    return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def _read(path: Optional[str]) -> Any:
    if path is None:
        raise ParseError("an input file is required")
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def document_kind(doc: Any) -> str:
    """``category``, ``symmetric`` or ``generalised``, by the keys present."""
    if not isinstance(doc, dict):
        raise ParseError("expected a JSON object")
    if "category" in doc:
        return "symmetric"
    if "morphisms" in doc:
        return "category"
    if "arrows" in doc and "objects" in doc:
        return "generalised"
    raise ParseError("not a category or multicategory document")


def _load(doc: Any, expect: Optional[str] = None):
    kind = document_kind(doc)
    if expect is not None and kind != expect:
        raise ParseError(f"expected a {expect} multicategory, got a {kind} document")
    try:
        if kind == "symmetric":
            return kind, FiniteSymMulticat.decode(doc)
        if kind == "category":
            return kind, FiniteCategory.decode(doc)
        return kind, FiniteGenMulticat.decode(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed {kind} document: {exc}") from exc


def _parse_seed(text: str, dim: int):
    try:
        term = json.loads(text)
    except json.JSONDecodeError:
        term = text
    try:
        if isinstance(term, dict):
            k, x = parse_opetope_document(term)
            if k != dim:
                raise ParseError(f"seed has dimension {k}, not {dim}")
            return x
        return lift_multitope(dim, term)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad seed: {exc}") from exc


# --------------------------------------------------------------------------
# commands


def cmd_check(args, out: TextIO) -> int:
    kind, obj = _load(_read(args.input))
    if kind == "symmetric":
        report = check_sym_axioms(obj, args.bound)
    elif kind == "category":
        report = check_category(obj, args.bound)
    else:
        report = check_gen_axioms(obj, args.bound)
    if args.format == "json":
        doc = report.encode()
        doc["kind"] = kind
        out.write(_dump(doc) + "\n")
    else:
        for v in sorted(report.violations):
            out.write(f"{v.law}\t{v.instance}\t{v.detail}\n")
        out.write(f"{kind}: {'ok' if report.ok else 'FAILED'} ({report.checked} instances, {len(report)} violations)\n")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_xi(args, out: TextIO) -> int:
    _, m = _load(_read(args.input), "generalised")
    out.write(_dump(materialize_sym(XiMulticat(m), args.bound).encode()) + "\n")
    return EXIT_OK


def cmd_xi_inverse(args, out: TextIO) -> int:
    _, q = _load(_read(args.input), "symmetric")
    out.write(_dump(xi_inverse(q, args.bound).encode()) + "\n")
    return EXIT_OK


def cmd_slice(args, out: TextIO) -> int:
    if args.bound is None:
        raise ParseError("slice needs --bound")
    kind, obj = _load(_read(args.input))
    if kind == "symmetric":
        doc = materialize_sym(SymSlice(obj), args.bound).encode()
    elif kind == "generalised":
        doc = materialize_gen(GenSlice(obj), args.bound).encode()
    else:
        raise ParseError("slice needs a multicategory")
    out.write(_dump(doc) + "\n")
    return EXIT_OK


def _stream(out: TextIO, items: Iterable[Any], fmt: str, summary: dict) -> int:
    n = 0
    for item in items:
        out.write(_dump(item) + "\n")
        n += 1
    summary["count"] = n
    if fmt == "json":
        out.write(_dump({"summary": summary}) + "\n")
    else:
        out.write("# " + " ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
    return EXIT_OK


def cmd_enumerate(args, out: TextIO) -> int:
    if args.bound is None:
        raise ParseError("enumerate needs --bound")
    k = args.dim
    if args.kind == "multitope":
        items = (multitope_term(k, x) for x in enumerate_multitopes(k, args.bound))
    else:
        items = (opetope_document(k, x) for x in enumerate_opetopes(k, args.bound))
    return _stream(out, items, args.format, {"kind": args.kind, "dim": k, "bound": args.bound})


def cmd_manifestations(args, out: TextIO) -> int:
    if args.seed is None:
        raise ParseError("manifestations needs --seed")
    x = _parse_seed(args.seed, args.dim)
    n = manifestation_count(x, args.dim)
    if args.format == "json":
        out.write(_dump({"dim": args.dim, "seed": opetope_document(args.dim, x), "count": n}) + "\n")
    else:
        out.write(f"{n}\n")
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    if args.bound is None:
        raise ParseError("verify needs --bound")
    report = verify_correspondence(args.dim, args.bound)
    if args.format == "json":
        doc = report.encode()
        doc["dim"] = args.dim
        out.write(_dump(doc) + "\n")
    else:
        for f in report.failures:
            out.write(f"failure\t{f}\n")
        out.write(
            f"dim={args.dim} bound={args.bound} classes={report.extra.get('isoClasses')} "
            f"multitopes={report.extra.get('multitopes')}: {'pass' if report.ok else 'FAIL'}\n"
        )
    return EXIT_OK if report.ok else EXIT_VIOLATION


HANDLERS = {
    "check": cmd_check,
    "xi": cmd_xi,
    "xi-inverse": cmd_xi_inverse,
    "slice": cmd_slice,
    "enumerate": cmd_enumerate,
    "manifestations": cmd_manifestations,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opetopic", description="Multicategories, slices and opetopes.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", nargs="?", help="input JSON document ('-' for standard input)")
    parser.add_argument("--dim", type=int, default=0, help="dimension for enumerate/manifestations/verify")
    parser.add_argument("--bound", type=int, default=None, help="size bound for lazily generated instances")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--seed", default=None, help="multitope term or opetope document")
    parser.add_argument("--kind", choices=("opetope", "multitope"), default="opetope")
    return parser


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    if args.dim < 0 or (args.bound is not None and args.bound < 0):
        err.write("error: --dim and --bound must be non-negative\n")
        return EXIT_PARSE
    try:
        return HANDLERS[args.command](args, out)
    except ParseError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except PreconditionError as exc:
        err.write(f"precondition violated: {exc}\n")
        out.write(_dump({"error": "precondition", "message": str(exc)}) + "\n")
        return EXIT_PRECONDITION
    except Exception as exc:  # pragma: no cover - reported, not hidden
        err.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
