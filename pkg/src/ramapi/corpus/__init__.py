"""Exact closed forms and the engine that checks them against numerics."""
from .engine import (
    ERRATUM,
    FAIL,
    PASS,
    Corpus,
    CorpusEntry,
    OracleCall,
    VerificationReport,
    format_corpus,
    load_default,
    parse_corpus,
    summarize,
    verify_all,
    verify_entry,
)
from .exact import (
    ExactExpr,
    ParseError,
    PolyRootForm,
    eval_exact,
    parse_expr,
    select_poly_root,
    to_text,
)
from .oracles import ORACLES

__all__ = [
    "Corpus",
    "CorpusEntry",
    "ERRATUM",
    "ExactExpr",
    "FAIL",
    "ORACLES",
    "OracleCall",
    "PASS",
    "ParseError",
    "PolyRootForm",
    "VerificationReport",
    "eval_exact",
    "format_corpus",
    "load_default",
    "parse_corpus",
    "parse_expr",
    "select_poly_root",
    "summarize",
    "to_text",
    "verify_all",
    "verify_entry",
]
