"""Static analysis toolkit for clingo-style ASP programs.

Parses a well-defined fragment, reports syntax errors, unsafe variables,
construct-order violations, and defined-before-used problems, and can
rewrite a program into methodology-conformant order while preserving
comments.  Ships a batch CLI (``ezasp``) and a language server.
"""

from .config import (
    AlreadyExistsError,
    Config,
    ConfigMalformed,
    external_predicates,
    generate_default_config,
    load_config,
)
from .methodology import PredicateIndex, build_index, check_ordering, check_stratification
from .pipeline import AnalysisResult, analyze_file, analyze_source
from .reorder import (
    Block,
    RefusedOnSyntaxError,
    group_by_category,
    partition_blocks,
    reorder_program,
    sort_section,
)
from .safety import SafetyReport, analyze_safety, propagate_links, unsafe_diagnostic
from .syntax import (
    Category,
    Comment,
    Construct,
    Diagnostic,
    E_SYNTAX,
    E_UNDEFINED,
    E_UNSAFE,
    PredicateKey,
    Program,
    SourcePos,
    SourceSpan,
    W_CYCLE,
    W_ORDER,
    W_STRAT,
    classify,
    compute_underline_span,
    parse_program,
)

__version__ = "0.1.0"

__all__ = [
    "AlreadyExistsError",
    "AnalysisResult",
    "Block",
    "Category",
    "Comment",
    "Config",
    "ConfigMalformed",
    "Construct",
    "Diagnostic",
    "E_SYNTAX",
    "E_UNDEFINED",
    "E_UNSAFE",
    "PredicateIndex",
    "PredicateKey",
    "Program",
    "RefusedOnSyntaxError",
    "SafetyReport",
    "SourcePos",
    "SourceSpan",
    "W_CYCLE",
    "W_ORDER",
    "W_STRAT",
    "analyze_file",
    "analyze_safety",
    "analyze_source",
    "build_index",
    "check_ordering",
    "check_stratification",
    "classify",
    "compute_underline_span",
    "external_predicates",
    "generate_default_config",
    "group_by_category",
    "load_config",
    "parse_program",
    "partition_blocks",
    "propagate_links",
    "reorder_program",
    "sort_section",
    "unsafe_diagnostic",
    "__version__",
]
