"""Corpus file loading and verification.

File format, one record per line group::

    # comment
    let NAME | EXPR
    ID | EXPR | ORACLE ARG... | ERRATUM NOTE

Lines that start with whitespace continue the previous line.  ``let``
bindings are visible to every later record as ``$NAME``.  The oracle field
is an oracle name followed by its arguments in the same prefix syntax.  A
non-empty fourth field marks the record as a printed variant believed to be
wrong; it is expected to fail and is then reported as
``known-erratum-confirmed``.
"""
from __future__ import annotations

import fnmatch
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ..mpcore import PrecisionContext
from .exact import (
    ExactExpr,
    Num,
    ParseError,
    PolyRootForm,
    eval_exact,
    parse_args,
    parse_expr,
    poly_value,
    references,
    select_poly_root,
    to_text,
)
from .oracles import ORACLES, run_oracle

PASS = "pass"
FAIL = "fail"
ERRATUM = "known-erratum-confirmed"


@dataclass(frozen=True)
class OracleCall:
    name: str
    args: tuple

    def text(self) -> str:
        return " ".join([self.name, *map(to_text, self.args)])


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    expr: ExactExpr
    oracle: OracleCall
    erratum: str | None = None
    line: int = 0


@dataclass
class Corpus:
    entries: dict = field(default_factory=dict)
    bindings: dict = field(default_factory=dict)

    def ids(self, pattern: str | None = None) -> list:
        ids = [i for i in self.entries if pattern is None or fnmatch.fnmatchcase(i, pattern)]
        return sorted(ids, key=natural_key)

    def __getitem__(self, entry_id: str) -> CorpusEntry:
        try:
            return self.entries[entry_id]
        except KeyError:
            raise KeyError(f"unknown corpus id {entry_id!r}") from None

    def __len__(self) -> int:
        return len(self.entries)


def natural_key(s: str):
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", s)]


def _logical_lines(text: str):
    current, start = None, 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if raw[0].isspace():
            if current is None:
                raise ParseError(f"line {lineno}: continuation without a record")
            current += " " + raw.strip()
            continue
        if current is not None:
            yield start, current
        current, start = raw.strip(), lineno
    if current is not None:
        yield start, current


def parse_corpus(text: str) -> Corpus:
    corpus = Corpus()
    for lineno, line in _logical_lines(text):
        fields = [f.strip() for f in line.split("|")]
        try:
            head = fields[0]
            if head.startswith("let "):
                name = head[4:].strip()
                if len(fields) != 2 or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                    raise ParseError("expected 'let NAME | EXPR'")
                if name in corpus.bindings:
                    raise ParseError(f"duplicate binding {name!r}")
                expr = parse_expr(fields[1])
                _check_refs(expr, corpus.bindings)
                corpus.bindings[name] = expr
                continue
            if len(fields) not in (3, 4):
                raise ParseError("expected 'ID | EXPR | ORACLE [| ERRATUM]'")
            if head in corpus.entries:
                raise ParseError(f"duplicate id {head!r}")
            expr = parse_expr(fields[1])
            _check_refs(expr, corpus.bindings)
            name, _, rest = fields[2].partition(" ")
            if name not in ORACLES:
                raise ParseError(f"unknown oracle {name!r}")
            args = tuple(parse_args(rest))
            if len(args) != ORACLES[name].arity:
                raise ParseError(f"oracle {name} takes {ORACLES[name].arity} arguments")
            for a in args:
                _check_refs(a, corpus.bindings)
            erratum = fields[3] if len(fields) == 4 and fields[3] else None
            corpus.entries[head] = CorpusEntry(head, expr, OracleCall(name, args), erratum, lineno)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return corpus


def _check_refs(expr, bindings) -> None:
    missing = references(expr) - set(bindings)
    if missing:
        raise ParseError("unbound reference(s): " + ", ".join(sorted("$" + m for m in missing)))


def format_corpus(corpus: Corpus) -> str:
    """Serialize back to the file format (bindings first, then entries)."""
    out = [f"let {k} | {to_text(v)}" for k, v in corpus.bindings.items()]
    for e in corpus.entries.values():
        parts = [e.id, to_text(e.expr), e.oracle.text()]
        if e.erratum:
            parts.append(e.erratum)
        out.append(" | ".join(parts))
    return "\n".join(out) + "\n"


@lru_cache(maxsize=1)
def load_default() -> Corpus:
    text = resources.files(__package__).joinpath("corpus.txt").read_text(encoding="utf-8")
    return parse_corpus(text)


@dataclass
class VerificationReport:
    id: str
    lhs: object
    rhs: object
    abs_residual: object
    rel_residual: object
    precision: int
    status: str
    erratum: str | None = None
    oracle: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def unexpected(self) -> bool:
        return self.status == FAIL

    def to_json(self, ctx: PrecisionContext) -> dict:
        mp = ctx.mp

        def num(x):
            if x is None:
                return None
            return mp.nstr(x, self.precision, min_fixed=-5, max_fixed=5)

        def small(x):
            return None if x is None else mp.nstr(x, 6)

        out = {
            "id": self.id,
            "status": self.status,
            "precision": self.precision,
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "abs_residual": small(self.abs_residual),
            "rel_residual": small(self.rel_residual),
            "oracle": self.oracle,
            "erratum": self.erratum,
        }
        for k, v in self.details.items():
            out[k] = v if isinstance(v, (int, str)) or v is None else small(v)
        return out


def _arg_value(a, ctx, bindings):
    if isinstance(a, Num):
        return a.value
    return eval_exact(a, ctx, bindings)


def verify_entry(entry_id: str, ctx: PrecisionContext, corpus: Corpus | None = None) -> VerificationReport:
    """Evaluate an entry's closed form and its oracle at ``ctx`` precision.

    Pass means rel_residual < 10**-(digits - 10).  Erratum records that fail
    become known-erratum-confirmed; erratum records that pass are failures,
    because the corpus then mislabels them.
    """
    corpus = corpus or load_default()
    entry = corpus[entry_id]
    mp = ctx.mp
    args = [_arg_value(a, ctx, corpus.bindings) for a in entry.oracle.args]
    rhs = run_oracle(entry.oracle.name, args, ctx)
    details: dict = {}
    error = None
    try:
        if isinstance(entry.expr, PolyRootForm):
            choice = select_poly_root(entry.expr, rhs, ctx)
            lhs = choice.value
            details = {
                "root_index": choice.index,
                "printed_index": entry.expr.index,
                "real_roots": choice.n_real,
                "poly_residual": abs(poly_value(entry.expr, rhs, ctx)),
            }
        else:
            lhs = eval_exact(entry.expr, ctx, corpus.bindings)
    except (ArithmeticError, ValueError) as exc:
        lhs, error = None, str(exc)
    if lhs is None:
        abs_res = rel_res = None
        ok = False
        details["error"] = error
    else:
        abs_res = abs(lhs - rhs)
        rel_res = abs_res / abs(rhs) if rhs != 0 else abs_res
        ok = rel_res < mp.mpf(10) ** (10 - ctx.digits)
        if isinstance(entry.expr, PolyRootForm):
            ok = ok and choice.index == entry.expr.index
    if entry.erratum:
        status = FAIL if ok else ERRATUM
    else:
        status = PASS if ok else FAIL
    return VerificationReport(
        entry.id, lhs, rhs, abs_res, rel_res, ctx.digits, status, entry.erratum, entry.oracle.text(), details
    )


def verify_all(ctx: PrecisionContext, pattern: str | None = None, corpus: Corpus | None = None) -> list:
    """Reports for every entry (or those matching a glob), sorted by id."""
    corpus = corpus or load_default()
    return [verify_entry(i, ctx, corpus) for i in corpus.ids(pattern)]


def summarize(reports: list) -> dict:
    counts = {PASS: 0, FAIL: 0, ERRATUM: 0}
    for r in reports:
        counts[r.status] += 1
    counts["total"] = len(reports)
    return counts


__all__ = [
    "Corpus",
    "CorpusEntry",
    "ERRATUM",
    "FAIL",
    "OracleCall",
    "PASS",
    "VerificationReport",
    "format_corpus",
    "load_default",
    "natural_key",
    "parse_corpus",
    "summarize",
    "verify_all",
    "verify_entry",
]
