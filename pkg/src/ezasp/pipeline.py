"""Full analysis pipeline shared by the CLI and the language server.

Runs parse, safety, ordering, and stratification over one source text,
honoring the configuration toggles, and returns the merged diagnostic
list sorted by position.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

from .config import Config, external_predicates
from .methodology import check_ordering, check_stratification
from .safety import analyze_safety, unsafe_diagnostic
from .syntax import Program, parse_program


@dataclass
class AnalysisResult:
    program: Program
    diagnostics: list  # filtered by toggles, sorted by position


def analyze_source(
    source: str,
    file: str,
    config: Config | None = None,
    external: frozenset | None = None,
) -> AnalysisResult:
    """Analyze one document.  ``external`` overrides the config-derived
    multi-file predicate set (used by callers that resolved it already)."""
    if config is None:
        config = Config()
    program = parse_program(source, file)
    diagnostics: list = []
    if config.syntax_checking:
        diagnostics.extend(program.syntax_errors)
    if config.unsafe_variable_checking:
        for construct in program.constructs:
            analyze_safety(construct)
            diagnostic = unsafe_diagnostic(construct, file)
            if diagnostic is not None:
                diagnostics.append(diagnostic)
    if config.ordering_checking:
        diagnostics.extend(check_ordering(program))
    if config.stratification_checking:
        if external is None:
            external = (
                external_predicates(config, file) if config.multi_file else frozenset()
            )
        diagnostics.extend(check_stratification(program, external))
    diagnostics.sort(key=lambda d: d.sort_key())
    return AnalysisResult(program, diagnostics)


def analyze_file(path: str, config: Config | None = None) -> AnalysisResult:
    """Analyze a file on disk, loading the directory config when none is given."""
    with open(path, encoding="utf-8") as handle:
        source = handle.read()
    if config is None:
        from .config import load_config

        config = load_config(os.path.dirname(os.path.abspath(path)))
    return analyze_source(source, path, config)
