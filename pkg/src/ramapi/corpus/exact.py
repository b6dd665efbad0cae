"""Exact nested-radical expressions in a small prefix syntax.

Grammar (whitespace separated, parentheses delimit lists)::

    expr   := INT | RAT | REF | '(' op expr+ ')' | '(' 'poly' INT INT+ ')'
    INT    := -?[0-9]+
    RAT    := -?[0-9]+/[0-9]+
    REF    := '$' name                      a ``let``-bound expression
    op     := '+' | '-' | '*' | '/' | '^' | 'sqrt' | 'cbrt'

``+`` and ``*`` take two or more operands; ``(- a)`` negates and
``(- a b c)`` means a - b - c; ``/`` is binary.  ``(^ a p/q)`` raises to a
rational power whose exponent must be a literal.  ``(sqrt a)`` and
``(cbrt a)`` are shorthand for ``(^ a 1/2)`` and ``(^ a 1/3)``.  Odd roots of
negative numbers are taken real; even roots of negative numbers are errors.

``(poly k c0 c1 ... cn)`` names the k-th real root, in ascending order, of
c0 + c1 x + ... + cn x^n.  Floating literals are rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from ..mpcore import ConvergenceError, DomainError, PrecisionContext


class ParseError(ValueError):
    """Malformed prefix expression."""


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Diff:
    terms: tuple


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Quot:
    num: object
    den: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: Fraction


@dataclass(frozen=True)
class PolyRootForm:
    """Real root of an integer polynomial, coefficients in ascending degree.

    ``index`` is the 1-based position among the real roots sorted ascending.
    """

    index: int
    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


ExactExpr = Union[Num, Ref, Sum, Neg, Diff, Prod, Quot, Pow, PolyRootForm]

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_INT = re.compile(r"-?\d+\Z")
_RAT = re.compile(r"-?\d+/\d+\Z")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _tokens(text: str) -> list:
    return _TOKEN.findall(text)


def _literal(tok: str) -> Fraction:
    if _INT.match(tok) or _RAT.match(tok):
        try:
            return Fraction(tok)
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {tok!r}") from None
    raise ParseError(f"expected an integer or rational literal, got {tok!r}")


def _parse(toks: list, pos: int):
    if pos >= len(toks):
        raise ParseError("unexpected end of expression")
    tok = toks[pos]
    if tok == ")":
        raise ParseError("unexpected ')'")
    if tok != "(":
        if tok.startswith("$"):
            if not _NAME.match(tok[1:]):
                raise ParseError(f"bad reference {tok!r}")
            return Ref(tok[1:]), pos + 1
        return Num(_literal(tok)), pos + 1
    if pos + 1 >= len(toks):
        raise ParseError("unexpected end of expression")
    op = toks[pos + 1]
    pos += 2
    if op == "poly":
        nums = []
        while pos < len(toks) and toks[pos] != ")":
            value = _literal(toks[pos])
            if value.denominator != 1:
                raise ParseError("poly takes integers only")
            nums.append(int(value))
            pos += 1
        if pos >= len(toks):
            raise ParseError("missing ')'")
        if len(nums) < 3:
            raise ParseError("poly needs a root index and at least two coefficients")
        if nums[0] < 1:
            raise ParseError("poly root index is 1-based")
        if nums[-1] == 0:
            raise ParseError("leading coefficient must be non-zero")
        return PolyRootForm(nums[0], tuple(nums[1:])), pos + 1
    args = []
    while pos < len(toks) and toks[pos] != ")":
        if op == "^" and len(args) == 1:
            args.append(_literal(toks[pos]))
            pos += 1
            continue
        node, pos = _parse(toks, pos)
        args.append(node)
    if pos >= len(toks):
        raise ParseError("missing ')'")
    pos += 1
    n = len(args)
    if op == "+":
        if n < 2:
            raise ParseError("+ needs at least two operands")
        return Sum(tuple(args)), pos
    if op == "-":
        if n == 1:
            return Neg(args[0]), pos
        if n < 1:
            raise ParseError("- needs an operand")
        return Diff(tuple(args)), pos
    if op == "*":
        if n < 2:
            raise ParseError("* needs at least two operands")
        return Prod(tuple(args)), pos
    if op == "/":
        if n != 2:
            raise ParseError("/ is binary")
        return Quot(args[0], args[1]), pos
    if op == "^":
        if n != 2:
            raise ParseError("^ takes a base and a rational exponent")
        return Pow(args[0], args[1]), pos
    if op in ("sqrt", "cbrt"):
        if n != 1:
            raise ParseError(f"{op} is unary")
        return Pow(args[0], Fraction(1, 2 if op == "sqrt" else 3)), pos
    raise ParseError(f"unknown operator {op!r}")


def parse_expr(text: str) -> ExactExpr:
    toks = _tokens(text)
    node, pos = _parse(toks, 0)
    if pos != len(toks):
        raise ParseError(f"trailing input after expression: {' '.join(toks[pos:])}")
    return node


def parse_args(text: str) -> list:
    """Parse a whitespace-separated sequence of expressions."""
    toks = _tokens(text)
    out, pos = [], 0
    while pos < len(toks):
        node, pos = _parse(toks, pos)
        out.append(node)
    return out


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def to_text(expr: ExactExpr) -> str:
    """Canonical prefix text; ``parse_expr(to_text(e)) == e``."""
    if isinstance(expr, Num):
        return _fmt_frac(expr.value)
    if isinstance(expr, Ref):
        return "$" + expr.name
    if isinstance(expr, Sum):
        return "(+ " + " ".join(map(to_text, expr.terms)) + ")"
    if isinstance(expr, Neg):
        return f"(- {to_text(expr.arg)})"
    if isinstance(expr, Diff):
        return "(- " + " ".join(map(to_text, expr.terms)) + ")"
    if isinstance(expr, Prod):
        return "(* " + " ".join(map(to_text, expr.factors)) + ")"
    if isinstance(expr, Quot):
        return f"(/ {to_text(expr.num)} {to_text(expr.den)})"
    if isinstance(expr, Pow):
        if expr.exponent == Fraction(1, 2):
            return f"(sqrt {to_text(expr.base)})"
        if expr.exponent == Fraction(1, 3):
            return f"(cbrt {to_text(expr.base)})"
        return f"(^ {to_text(expr.base)} {_fmt_frac(expr.exponent)})"
    if isinstance(expr, PolyRootForm):
        return "(poly " + " ".join(map(str, (expr.index,) + expr.coefficients)) + ")"
    raise TypeError(f"not an expression node: {expr!r}")


def references(expr: ExactExpr) -> set:
    """Names of all ``$refs`` used directly by ``expr``."""
    if isinstance(expr, Ref):
        return {expr.name}
    if isinstance(expr, (Sum, Diff)):
        kids = expr.terms
    elif isinstance(expr, Prod):
        kids = expr.factors
    elif isinstance(expr, Quot):
        kids = (expr.num, expr.den)
    elif isinstance(expr, Neg):
        kids = (expr.arg,)
    elif isinstance(expr, Pow):
        kids = (expr.base,)
    else:
        kids = ()
    out = set()
    for k in kids:
        out |= references(k)
    return out


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _real_power(base, exponent: Fraction, mp):
    p, q = exponent.numerator, exponent.denominator
    if base == 0:
        if p < 0:
            raise DomainError("zero raised to a negative power")
        return mp.zero
    if base < 0:
        if q % 2 == 0:
            raise DomainError("even root of a negative number")
        mag = mp.root(-base, q) ** p if p > 0 else 1 / mp.root(-base, q) ** (-p)
        return -mag if p % 2 else mag
    if q == 2:
        root = mp.sqrt(base)
    elif q == 1:
        root = base
    else:
        root = mp.root(base, q)
    return root**p if p >= 0 else 1 / root ** (-p)


def _poly_real_roots(coefficients, ctx: PrecisionContext) -> list:
    """Real roots, ascending, refined to ``ctx`` precision."""
    mp = ctx.mp
    coeffs = [mp.mpf(c) for c in reversed(coefficients)]
    approx = mp.polyroots(coeffs, maxsteps=400, extraprec=4 * ctx.dps)
    real = []
    for z in approx:
        if abs(mp.im(z)) <= mp.mpf(10) ** (-ctx.dps // 2) * max(1, abs(z)):
            real.append(_newton_poly(coeffs, mp.re(z), ctx))
    return sorted(real)


def _newton_poly(coeffs_desc, x, ctx: PrecisionContext):
    mp = ctx.mp
    for _ in range(200):
        p, dp = mp.polyval(coeffs_desc, x, derivative=True)
        if dp == 0:
            return x
        step = p / dp
        x -= step
        if abs(step) <= ctx.eps * abs(x):
            break
    return x


def poly_value(form: PolyRootForm, x, ctx: PrecisionContext):
    mp = ctx.mp
    return mp.polyval([mp.mpf(c) for c in reversed(form.coefficients)], x)


@dataclass(frozen=True)
class RootChoice:
    value: object
    index: int
    n_real: int


def select_poly_root(form: PolyRootForm, hint, ctx: PrecisionContext, rel_tol=1e-6) -> RootChoice:
    """The real root nearest ``hint``, refined by Newton at ``ctx`` precision.

    ``index`` is its 1-based position among the ascending real roots.
    Raises DomainError when no root lies within ``rel_tol`` (relative) of the hint.
    """
    mp = ctx.mp
    hint = mp.mpf(hint)
    roots = _poly_real_roots(form.coefficients, ctx)
    if not roots:
        raise DomainError("polynomial has no real roots")
    best = min(range(len(roots)), key=lambda i: abs(roots[i] - hint))
    root = roots[best]
    if abs(root - hint) > mp.mpf(rel_tol) * max(abs(hint), ctx.eps):
        raise DomainError(f"no real root within {rel_tol:g} (relative) of the hint")
    return RootChoice(root, best + 1, len(roots))


class _Evaluator:
    def __init__(self, env: Mapping[str, ExactExpr], ctx: PrecisionContext):
        self.env = env
        self.ctx = ctx
        self.mp = ctx.mp
        self.cache: dict = {}
        self.active: set = set()

    def __call__(self, e):
        mp = self.mp
        if isinstance(e, Num):
            return mp.mpf(e.value.numerator) / e.value.denominator
        if isinstance(e, Ref):
            if e.name in self.cache:
                return self.cache[e.name]
            if e.name not in self.env:
                raise KeyError(f"unbound reference ${e.name}")
            if e.name in self.active:
                raise ParseError(f"cyclic reference ${e.name}")
            self.active.add(e.name)
            value = self(self.env[e.name])
            self.active.discard(e.name)
            self.cache[e.name] = value
            return value
        if isinstance(e, Sum):
            return mp.fsum(self(t) for t in e.terms)
        if isinstance(e, Neg):
            return -self(e.arg)
        if isinstance(e, Diff):
            first, *rest = e.terms
            return self(first) - mp.fsum(self(t) for t in rest)
        if isinstance(e, Prod):
            out = mp.one
            for f in e.factors:
                out *= self(f)
            return out
        if isinstance(e, Quot):
            den = self(e.den)
            if den == 0:
                raise DomainError("division by zero")
            return self(e.num) / den
        if isinstance(e, Pow):
            return _real_power(self(e.base), e.exponent, mp)
        if isinstance(e, PolyRootForm):
            roots = _poly_real_roots(e.coefficients, self.ctx)
            if e.index > len(roots):
                raise DomainError(f"polynomial has only {len(roots)} real roots")
            return roots[e.index - 1]
        raise TypeError(f"not an expression node: {e!r}")


def eval_at(expr: ExactExpr, ctx: PrecisionContext, env: Mapping[str, ExactExpr] | None = None):
    """Evaluate once at ``ctx`` precision, with no certification."""
    return _Evaluator(env or {}, ctx)(expr)


def eval_exact(
    expr: ExactExpr,
    ctx: PrecisionContext,
    env: Mapping[str, ExactExpr] | None = None,
    max_doublings: int = 4,
):
    """Value of ``expr`` with relative error below ``10**-ctx.digits``.

    The expression is evaluated at the working precision and again with
    doubled guard digits; the precision keeps growing until two successive
    values agree to ``ctx.digits`` digits.  Cancellation in nested radicals
    is absorbed this way rather than by a worst-case guess.  A zero is only
    returned if it survives every doubling.
    """
    env = env or {}
    mp = ctx.mp
    extra = ctx.digits
    prev = eval_at(expr, ctx, env)
    for _ in range(max_doublings):
        finer = ctx.extended(extra)
        cur = eval_at(expr, finer, env)
        if cur != 0 and abs(cur - prev) <= mp.mpf(10) ** (-ctx.digits) * abs(cur):
            return mp.mpf(cur)
        prev, extra = cur, 2 * extra
    if prev == 0:
        return mp.zero
    raise ConvergenceError("expression value could not be certified; heavy cancellation")


__all__ = [
    "Diff",
    "ExactExpr",
    "Neg",
    "Num",
    "ParseError",
    "PolyRootForm",
    "Pow",
    "Prod",
    "Quot",
    "Ref",
    "RootChoice",
    "Sum",
    "eval_at",
    "eval_exact",
    "parse_args",
    "parse_expr",
    "poly_value",
    "references",
    "select_poly_root",
    "to_text",
]
