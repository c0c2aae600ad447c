"""Command line interface: ``ezasp lint|reorder|init-config|lsp``.

Exit codes: 0 clean, 1 warnings only, 2 any error diagnostic (or a
reorder refusal), 3 usage or I/O failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile

from .config import (
    AlreadyExistsError,
    Config,
    generate_default_config,
    load_config,
)
from .pipeline import analyze_file, analyze_source
from .reorder import RefusedOnSyntaxError, reorder_program
from .syntax import Diagnostic, SEVERITY_ERROR, SourcePos, SourceSpan

EXIT_CLEAN = 0
EXIT_WARNINGS = 1
EXIT_ERRORS = 2
EXIT_FAILURE = 3


def diagnostic_to_dict(diagnostic: Diagnostic) -> dict:
    return {
        "severity": diagnostic.severity,
        "code": diagnostic.code,
        "message": diagnostic.message,
        "file": diagnostic.file,
        "span": {
            "start": {"line": diagnostic.span.start.line, "column": diagnostic.span.start.column},
            "end": {"line": diagnostic.span.end.line, "column": diagnostic.span.end.column},
        },
    }


def diagnostic_from_dict(data: dict) -> Diagnostic:
    span = SourceSpan(
        SourcePos(data["span"]["start"]["line"], data["span"]["start"]["column"]),
        SourcePos(data["span"]["end"]["line"], data["span"]["end"]["column"]),
    )
    return Diagnostic(data["severity"], data["code"], span, data["message"], data["file"])


def format_text(diagnostic: Diagnostic) -> str:
    pos = diagnostic.span.start
    return (
        f"{diagnostic.file}:{pos.line + 1}:{pos.column + 1}: "
        f"{diagnostic.severity}[{diagnostic.code}] {diagnostic.message}"
    )


def lint_report(file: str, diagnostics) -> dict:
    summary: dict = {}
    for diagnostic in diagnostics:
        summary[diagnostic.code] = summary.get(diagnostic.code, 0) + 1
    return {
        "file": file,
        "diagnostics": [diagnostic_to_dict(d) for d in diagnostics],
        "summary": summary,
    }


def _config_for(path: str, config_dir: str | None) -> Config:
    if config_dir is not None:
        return load_config(config_dir)
    return load_config(os.path.dirname(os.path.abspath(path)))


def cmd_lint(files, config_dir=None, output_format="text", out=None) -> int:
    out = out if out is not None else sys.stdout
    reports = []
    worst = EXIT_CLEAN
    for path in files:
        try:
            result = analyze_file(path, _config_for(path, config_dir))
        except OSError as err:
            print(f"ezasp: cannot read {path}: {err}", file=sys.stderr)
            return EXIT_FAILURE
        reports.append((path, result.diagnostics))
        for diagnostic in result.diagnostics:
            if diagnostic.severity == SEVERITY_ERROR:
                worst = max(worst, EXIT_ERRORS)
            else:
                worst = max(worst, EXIT_WARNINGS)
    if output_format == "json":
        payload = [lint_report(path, diagnostics) for path, diagnostics in reports]
        print(json.dumps(payload, indent=2), file=out)
    else:
        for path, diagnostics in reports:
            for diagnostic in diagnostics:
                print(format_text(diagnostic), file=out)
    return worst


def cmd_reorder(path: str, write=False, config_dir=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        with open(path, encoding="utf-8") as handle:
            source = handle.read()
    except OSError as err:
        print(f"ezasp: cannot read {path}: {err}", file=sys.stderr)
        return EXIT_FAILURE
    config = _config_for(path, config_dir)
    result = analyze_source(source, path, config)
    try:
        new_source, diagnostics = reorder_program(result.program)
    except RefusedOnSyntaxError as err:
        print(f"ezasp: {err}", file=sys.stderr)
        return EXIT_ERRORS
    if config.stratification_checking:
        for diagnostic in diagnostics:
            print(format_text(diagnostic), file=sys.stderr)
    if write:
        directory = os.path.dirname(os.path.abspath(path))
        try:
            fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".ezasp-", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(new_source)
            os.replace(temp_path, path)
        except OSError as err:
            print(f"ezasp: cannot write {path}: {err}", file=sys.stderr)
            return EXIT_FAILURE
    else:
        out.write(new_source)
    return EXIT_CLEAN


def cmd_init_config(directory: str) -> int:
    try:
        path = generate_default_config(directory)
    except AlreadyExistsError as err:
        print(f"ezasp: {err}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as err:
        print(f"ezasp: cannot write configuration: {err}", file=sys.stderr)
        return EXIT_FAILURE
    print(path)
    return EXIT_CLEAN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ezasp",
        description="Static analysis and automatic reordering for ASP programs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="report diagnostics for one or more files")
    lint.add_argument("files", nargs="+", metavar="FILE")
    lint.add_argument("--config", metavar="DIR", help="directory holding ezasp.json")
    lint.add_argument("--format", choices=("text", "json"), default="text")

    reorder = sub.add_parser("reorder", help="rewrite a program into methodology order")
    reorder.add_argument("file", metavar="FILE")
    reorder.add_argument("--write", action="store_true", help="rewrite the file in place")
    reorder.add_argument("--config", metavar="DIR", help="directory holding ezasp.json")

    init = sub.add_parser("init-config", help="create a default ezasp.json")
    init.add_argument("directory", nargs="?", default=".", metavar="DIR")

    lsp = sub.add_parser("lsp", help="run the language server on stdio")
    lsp.add_argument("--debounce-ms", type=int, default=200)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="ezasp: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_FAILURE if err.code else EXIT_CLEAN
    if args.command == "lint":
        return cmd_lint(args.files, args.config, args.format)
    if args.command == "reorder":
        return cmd_reorder(args.file, args.write, args.config)
    if args.command == "init-config":
        return cmd_init_config(args.directory)
    if args.command == "lsp":
        from .lsp import LanguageServer

        server = LanguageServer(
            sys.stdin.buffer, sys.stdout.buffer, debounce_ms=args.debounce_ms
        )
        server.serve_forever()
        return EXIT_CLEAN
    return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
