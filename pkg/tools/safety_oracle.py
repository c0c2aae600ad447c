#!/usr/bin/env python3
"""Regenerate the safety corpus verdicts with the clingo grounder.

Requires the `clingo` Python module (pip install clingo).  For every case
in tests/fixtures/safety_corpus.json the program is grounded and the
unsafe variable names clingo reports are written back into the fixture.
The build environment this repository was developed in has no clingo, so
the committed verdicts were derived by hand from the grounder's
documented behavior; run this script wherever clingo is available to
re-check them:

    python tools/safety_oracle.py [--check]

--check only compares and exits non-zero on mismatch instead of writing.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

CORPUS = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "safety_corpus.json"

_UNSAFE_NOTE = re.compile(r"'(\\?[A-Za-z_][A-Za-z0-9_]*|_)' is unsafe")


def clingo_unsafe_variables(program: str) -> list:
    """Ground one program and collect the unsafe variable names clingo reports."""
    import clingo

    messages: list = []

    def on_message(code, message):
        messages.append(message)

    control = clingo.Control(logger=on_message, message_limit=1000)
    try:
        control.add("base", [], program)
        control.ground([("base", [])])
    except RuntimeError:
        pass  # grounding aborts on unsafe variables; the messages carry the names
    names = []
    for message in messages:
        if "unsafe" not in message:
            continue
        for match in _UNSAFE_NOTE.finditer(message):
            name = match.group(1)
            display = "_" if name.startswith("_") and name.strip("_").isdigit() or name == "_" else name
            if display not in names:
                names.append(display)
    return sorted(names)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check", action="store_true", help="compare only, do not rewrite")
    args = parser.parse_args()

    data = json.loads(CORPUS.read_text(encoding="utf-8"))
    mismatches = 0
    for case in data["cases"]:
        verdict = clingo_unsafe_variables(case["program"])
        recorded = sorted(case["unsafe"])
        if verdict != recorded:
            mismatches += 1
            print(f"{case['id']}: recorded {recorded} but clingo says {verdict}")
            if not args.check:
                case["unsafe"] = verdict
    if not args.check and mismatches:
        CORPUS.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        print(f"rewrote {mismatches} verdict(s)")
    elif not mismatches:
        print(f"all {len(data['cases'])} verdicts confirmed")
    return 1 if (args.check and mismatches) else 0


if __name__ == "__main__":
    sys.exit(main())
