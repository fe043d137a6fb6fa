"""Command line: run or validate a document, or evaluate one MathML file."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chem.molecule import parse_cml
from .errors import ExecDocError
from .forcefield import parse_forcefield
from .library import interactions, library_context
from .mathml.dictionary import scalar_from_text
from .mathml.evaluate import evaluate
from .mathml.parse import parse_mathml
from .mathml.values import ObjectRef, Scalar, Seq

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ASSERT = 2
EXIT_INTEGRITY = 3


def _parser():
    p = argparse.ArgumentParser(prog="execdoc", description="Execute computational XML documents.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="prepare, check, compute, assert and write a document")
    run.add_argument("document", type=Path)
    run.add_argument("--strict", action="store_true", help="stop with exit 3 on integrity findings")
    run.add_argument("--allow-remote", action="store_true", help="allow http(s) transclusion")
    run.add_argument("--out", type=Path, help="write the final document here")
    run.add_argument("--trace", type=Path, help="write optimizer traces here as JSON")

    val = sub.add_parser("validate", help="prepare and check a document without executing it")
    val.add_argument("document", type=Path)
    val.add_argument("--allow-remote", action="store_true")

    ev = sub.add_parser("eval", help="evaluate one MathML expression against a bindings file")
    ev.add_argument("mathml", type=Path)
    ev.add_argument("bindings", type=Path, nargs="?")
    return p


def _binding(value, base, ctx, forcefield):
    if isinstance(value, bool):
        raise ExecDocError("booleans are not accepted as bindings")
    if isinstance(value, (int, float)):
        return Scalar(value)
    if isinstance(value, list):
        return Seq(tuple(_binding(v, base, ctx, forcefield) for v in value))
    if isinstance(value, dict) and "value" in value:
        return scalar_from_text(str(value["value"]), value.get("units"), value.get("dictRef"),
                                ctx.dictionaries)
    if isinstance(value, dict) and "molecule" in value:
        m = parse_cml((base / value["molecule"]).read_bytes())
        kind = value.get("objects", "molecule")
        if kind == "molecule":
            return ObjectRef(m)
        if kind == "atoms":
            return Seq(tuple(ObjectRef(a) for a in m.atoms))
        return interactions(m, forcefield, kind)
    raise ExecDocError(f"cannot bind {value!r}")


def cmd_eval(args):
    expr = parse_mathml(args.mathml.read_bytes())
    ctx = library_context()
    bindings = {}
    if args.bindings is not None:
        spec = json.loads(args.bindings.read_text())
        base = args.bindings.parent
        ff_path = spec.pop("$forcefield", None)
        forcefield = parse_forcefield((base / ff_path).read_bytes()) if ff_path else None
        bindings = {k: _binding(v, base, ctx, forcefield) for k, v in spec.items()}
    result = evaluate(expr, ctx.bind_all(bindings))
    if isinstance(result, Scalar):
        unit = f" {result.unit}" if result.unit else ""
        print(f"{result.value!r}{unit}")
    else:
        print(result)
    return EXIT_OK


def _print_findings(findings):
    if not findings:
        print("integrity: ok")
    for f in findings:
        print(f"integrity: {f}")


def cmd_validate(args):
    from .docpipe.document import load_document
    from .docpipe.integrity import check_integrity
    from .docpipe.pipeline import prepare

    doc = prepare(load_document(args.document), allow_remote=args.allow_remote)
    findings = check_integrity(doc)
    _print_findings(findings)
    return EXIT_INTEGRITY if findings else EXIT_OK


def cmd_run(args):
    from .docpipe.asserts import run_asserts
    from .docpipe.compute import run_computations
    from .docpipe.document import load_document
    from .docpipe.integrity import check_integrity
    from .docpipe.pipeline import prepare
    from .docpipe.writers import write_outputs

    doc = load_document(args.document)
    try:
        prepare(doc, allow_remote=args.allow_remote)
        findings = check_integrity(doc)
        _print_findings(findings)
        if findings and args.strict:
            return EXIT_INTEGRITY
        run_computations(doc)
        results = run_asserts(doc)
        write_outputs(doc)
    finally:
        # a failed computation is still worth seeing in the output document
        if args.out is not None:
            args.out.parent.mkdir(parents=True, exist_ok=True)
            args.out.write_bytes(doc.to_bytes())
        if args.trace is not None:
            args.trace.write_text(json.dumps(doc.traces, indent=2, sort_keys=True) + "\n")
    for w in doc.warnings:
        print(f"warning: {w}")
    for a in results:
        print(f"assert: {a}")
    failed = sum(not a.passed for a in results)
    print(f"asserts: {len(results) - failed} passed, {failed} failed")
    if failed:
        return EXIT_ASSERT
    return EXIT_INTEGRITY if findings else EXIT_OK


def main(argv=None):
    args = _parser().parse_args(argv)
    handler = {"run": cmd_run, "validate": cmd_validate, "eval": cmd_eval}[args.command]
    try:
        return handler(args)
    except ExecDocError as exc:
        sys.stdout.flush()
        name = type(exc).__name__
        if getattr(exc, "cause", None) is not None:
            name += f" caused by {type(exc.cause).__name__}"
        print(f"error: {name}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        sys.stdout.flush()
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
