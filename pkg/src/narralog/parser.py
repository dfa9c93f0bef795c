"""Surface syntax for domain files and queries.

Domain files hold one statement per line, each terminated by ``.``;
``%`` starts a comment.  The statement forms are::

    fluent Protected.
    action InjectA.
    const nail.
    InjectA initiates Protected when {TypeO}.
    TurnOff terminates Running.
    InjectA happens-at 2.
    ~Picture holds-at 1.
    ~Running whenever {~Petrol}.

Negation is written ``~``; identifiers start with a letter and may
contain letters, digits and underscores.  Vocabulary declarations are
mandatory so that a typo in a fluent name is caught instead of silently
changing what a narrative entails.

Queries use the clause-style literal syntax, e.g.::

    sceptical([holds(protected,6)])
    credulous([neg(holds(running,3))])
    credulous([holds(picture,3)],X)

where a fluent name is written with its first letter lowered, the same
convention :func:`dump_translation` uses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    Action,
    CProp,
    DomainDescription,
    Fluent,
    FluentLiteral,
    HProp,
    RProp,
    TProp,
    Vocabulary,
)

SCEPTICAL = "sceptical"
CREDULOUS = "credulous"
CREDULOUS_EXPLAIN = "credulous-with-explanation"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int
    end: int

    def __post_init__(self):
        if self.end < self.start:
            raise ValueError("span end precedes start")

    def __str__(self) -> str:
        return "line %d, column %d" % (self.line, self.column)


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__("%s (%s)" % (message, span))
        self.message = message
        self.span = span


@dataclass(frozen=True)
class Query:
    """A ground conjunctive query: literal/time pairs plus a mode."""

    literals: tuple[tuple[FluentLiteral, int], ...]
    mode: str

    def __post_init__(self):
        if not self.literals:
            raise ValueError("query needs at least one literal")
        if self.mode not in (SCEPTICAL, CREDULOUS, CREDULOUS_EXPLAIN):
            raise ValueError("unknown query mode %r" % self.mode)
        for lit, time in self.literals:
            if not lit.ground:
                raise ValueError("query literal %s is not ground" % lit)
            if time < 0:
                raise ValueError("query time must be a natural number")


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<WS>\s+)
  | (?P<COMMENT>%[^\n]*)
  | (?P<HAPPENS>happens-at\b)
  | (?P<HOLDS>holds-at\b)
  | (?P<NUMBER>\d+)
  | (?P<IDENT>[A-Za-z][A-Za-z0-9_]*)
  | (?P<PUNCT>[~(){},.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(line, pos - line_start + 1, pos, pos + 1)
            raise ParseError("unexpected character %r" % text[pos], span)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("WS", "COMMENT"):
            span = SourceSpan(line, m.start() - line_start + 1, m.start(), m.end())
            tokens.append(_Token(kind, chunk, span))
        line += chunk.count("\n")
        if "\n" in chunk:
            line_start = m.start() + chunk.rindex("\n") + 1
        pos = m.end()
    end_span = SourceSpan(line, pos - line_start + 1, pos, pos)
    tokens.append(_Token("EOF", "", end_span))
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def next(self) -> _Token:
        tok = self.tokens[self.index]
        if tok.kind != "EOF":
            self.index += 1
        return tok

    def expect(self, text: str, what: str | None = None) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(
                "expected %s, found %r" % (what or repr(text), tok.text or "end of input"),
                tok.span,
            )
        return tok

    def expect_kind(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(
                "expected %s, found %r" % (what, tok.text or "end of input"), tok.span
            )
        return tok


# ---------------------------------------------------------------------------
# domain parsing

_KEYWORDS = {"fluent", "action", "const", "initiates", "terminates", "when", "whenever"}


def _parse_term(ts: _TokenStream) -> tuple[str, tuple[str, ...]]:
    name = ts.expect_kind("IDENT", "an identifier").text
    args: tuple[str, ...] = ()
    if ts.peek().text == "(":
        ts.next()
        collected = [ts.expect_kind("IDENT", "an argument").text]
        while ts.peek().text == ",":
            ts.next()
            collected.append(ts.expect_kind("IDENT", "an argument").text)
        ts.expect(")")
        args = tuple(collected)
    return name, args


def _parse_literal(ts: _TokenStream) -> FluentLiteral:
    positive = True
    if ts.peek().text == "~":
        ts.next()
        positive = False
    name, args = _parse_term(ts)
    return FluentLiteral(Fluent(name, args), positive)


def _parse_literal_set(ts: _TokenStream) -> frozenset[FluentLiteral]:
    ts.expect("{")
    literals: list[FluentLiteral] = []
    if ts.peek().text != "}":
        literals.append(_parse_literal(ts))
        while ts.peek().text == ",":
            ts.next()
            literals.append(_parse_literal(ts))
    ts.expect("}")
    return frozenset(literals)


def _parse_statement(ts: _TokenStream, acc: dict) -> None:
    tok = ts.peek()
    if tok.kind == "IDENT" and tok.text in ("fluent", "action", "const"):
        ts.next()
        name = ts.expect_kind("IDENT", "a declared name").text
        ts.expect(".")
        acc[tok.text].append(name)
        return

    negated = tok.text == "~"
    if negated:
        ts.next()
    name, args = _parse_term(ts)
    follow = ts.next()

    if follow.kind == "HOLDS":
        time = int(ts.expect_kind("NUMBER", "a time point").text)
        ts.expect(".")
        acc["tprops"].append(TProp(FluentLiteral(Fluent(name, args), not negated), time))
        return
    if follow.text == "whenever":
        conds = _parse_literal_set(ts)
        ts.expect(".")
        head = FluentLiteral(Fluent(name, args), not negated)
        acc["rprops"].append(RProp(head, conds))
        return
    if negated:
        raise ParseError(
            "negation is only allowed before holds-at and whenever statements",
            follow.span,
        )
    if follow.kind == "HAPPENS":
        time = int(ts.expect_kind("NUMBER", "a time point").text)
        ts.expect(".")
        acc["hprops"].append(HProp(Action(name, args), time))
        return
    if follow.text in ("initiates", "terminates"):
        fname, fargs = _parse_term(ts)
        conds: frozenset[FluentLiteral] = frozenset()
        if ts.peek().text == "when":
            ts.next()
            conds = _parse_literal_set(ts)
        ts.expect(".")
        effect = FluentLiteral(Fluent(fname, fargs), follow.text == "initiates")
        acc["cprops"].append(CProp(Action(name, args), effect, conds))
        return
    raise ParseError(
        "expected initiates, terminates, happens-at, holds-at or whenever, "
        "found %r" % (follow.text or "end of input"),
        follow.span,
    )


def parse_domain(text: str) -> DomainDescription:
    """Parse a domain file.  Raises :class:`ParseError` with the span of the
    first offending token.  Unknown symbols are *not* a parse error; they
    surface later through ``validate_domain``."""
    ts = _TokenStream(_tokenize(text))
    acc: dict = {
        "fluent": [],
        "action": [],
        "const": [],
        "cprops": [],
        "hprops": [],
        "tprops": [],
        "rprops": [],
    }
    while ts.peek().kind != "EOF":
        _parse_statement(ts, acc)
    vocab = Vocabulary(
        tuple(dict.fromkeys(acc["fluent"])),
        tuple(dict.fromkeys(acc["action"])),
        tuple(dict.fromkeys(acc["const"])),
    )
    return DomainDescription(
        vocab,
        tuple(acc["cprops"]),
        tuple(acc["hprops"]),
        tuple(acc["tprops"]),
        tuple(acc["rprops"]),
    )


# ---------------------------------------------------------------------------
# printing

def _term_str(name: str, args: tuple[str, ...]) -> str:
    return "%s(%s)" % (name, ",".join(args)) if args else name


def _literal_str(lit: FluentLiteral) -> str:
    body = _term_str(lit.fluent.name, lit.fluent.args)
    return body if lit.positive else "~" + body


def _literal_set_str(lits: frozenset[FluentLiteral]) -> str:
    return "{%s}" % ", ".join(_literal_str(l) for l in sorted(lits))


def print_domain(d: DomainDescription) -> str:
    """Canonical text: declarations first, then action laws, occurrences,
    observations and constraints, each in input order.  Round-trips through
    :func:`parse_domain`."""
    lines = []
    for name in d.vocabulary.fluents:
        lines.append("fluent %s." % name)
    for name in d.vocabulary.actions:
        lines.append("action %s." % name)
    for name in d.vocabulary.constants:
        lines.append("const %s." % name)
    for cp in d.cprops:
        verb = "initiates" if cp.initiates else "terminates"
        stmt = "%s %s %s" % (
            _term_str(cp.action.name, cp.action.args),
            verb,
            _term_str(cp.effect.fluent.name, cp.effect.fluent.args),
        )
        if cp.conditions:
            stmt += " when " + _literal_set_str(cp.conditions)
        lines.append(stmt + ".")
    for hp in d.hprops:
        lines.append(
            "%s happens-at %d." % (_term_str(hp.action.name, hp.action.args), hp.time)
        )
    for tp in d.tprops:
        lines.append("%s holds-at %d." % (_literal_str(tp.literal), tp.time))
    for rp in d.rprops:
        lines.append(
            "%s whenever %s." % (_literal_str(rp.head), _literal_set_str(rp.conditions))
        )
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# clause-style dump

def clause_name(name: str) -> str:
    """Identifiers are written with the first letter lowered in clause form."""
    return name[0].lower() + name[1:] if name else name


def clause_term(name: str, args: tuple[str, ...]) -> str:
    base = clause_name(name)
    return "%s(%s)" % (base, ",".join(args)) if args else base


def _clause_literal(lit: FluentLiteral, time: str) -> str:
    atom = "holds(%s,%s)" % (clause_term(lit.fluent.name, lit.fluent.args), time)
    return atom if lit.positive else "neg(%s)" % atom


def dump_translation(d: DomainDescription) -> str:
    """Write the domain as logic-program clauses.

    Action laws become ``initiation``/``termination`` clauses over a time
    variable ``T`` with a trailing ``true`` conjunct, constraints become
    ``ram`` clauses (no trailing ``true``), observations become ``tprop``
    facts and occurrences ``happens`` facts.  The output is stable: the
    same domain always dumps byte-identically.
    """
    if not d.ground:
        raise ValueError("only ground domains can be dumped in clause form")
    out = []
    for cp in d.cprops:
        head = "%s(%s,T)" % (
            "initiation" if cp.initiates else "termination",
            clause_term(cp.effect.fluent.name, cp.effect.fluent.args),
        )
        body = ["happens(%s,T)" % clause_term(cp.action.name, cp.action.args)]
        body.extend(_clause_literal(l, "T") for l in sorted(cp.conditions))
        body.append("true")
        out.append("%s:-\n  %s." % (head, ", ".join(body)))
    for rp in d.rprops:
        head = "ram(%s)" % _clause_literal(rp.head, "T")
        body = ", ".join(_clause_literal(l, "T") for l in sorted(rp.conditions))
        out.append("%s:-\n  %s." % (head, body))
    for tp in d.tprops:
        out.append("tprop(%s)." % _clause_literal(tp.literal, str(tp.time)))
    for hp in d.hprops:
        out.append(
            "happens(%s,%d)." % (clause_term(hp.action.name, hp.action.args), hp.time)
        )
    return "\n".join(out) + ("\n" if out else "")


# ---------------------------------------------------------------------------
# query parsing

def _parse_query_literal(ts: _TokenStream) -> tuple[FluentLiteral, int]:
    tok = ts.next()
    positive = True
    if tok.text == "neg":
        ts.expect("(")
        inner = ts.next()
        if inner.text != "holds":
            raise ParseError("expected holds inside neg(...)", inner.span)
        positive = False
    elif tok.text != "holds":
        raise ParseError(
            "expected holds(...) or neg(holds(...)), found %r" % tok.text, tok.span
        )
    ts.expect("(")
    name, args = _parse_term(ts)
    ts.expect(",")
    time_tok = ts.expect_kind("NUMBER", "a ground time point")
    ts.expect(")")
    if not positive:
        ts.expect(")")
    fluent = Fluent(name, args)
    if not fluent.ground:
        raise ParseError("query literal must be ground", time_tok.span)
    return FluentLiteral(fluent, positive), int(time_tok.text)


def parse_query(text: str) -> Query:
    """Parse ``sceptical([...])``, ``credulous([...])`` or
    ``credulous([...],X)`` query strings."""
    ts = _TokenStream(_tokenize(text))
    head = ts.next()
    if head.text not in ("sceptical", "credulous"):
        raise ParseError(
            "expected sceptical(...) or credulous(...), found %r"
            % (head.text or "end of input"),
            head.span,
        )
    ts.expect("(")
    open_list = ts.next()
    if open_list.text != "{" and open_list.text != "[":
        raise ParseError("expected a literal list", open_list.span)
    if open_list.text == "{":
        raise ParseError("expected a literal list delimited by [ ]", open_list.span)
    literals = [_parse_query_literal(ts)]
    while ts.peek().text == ",":
        ts.next()
        literals.append(_parse_query_literal(ts))
    close = ts.next()
    if close.text != "]":
        raise ParseError("expected ] to close the literal list", close.span)
    mode = SCEPTICAL if head.text == "sceptical" else CREDULOUS
    if ts.peek().text == ",":
        if head.text != "credulous":
            raise ParseError("only credulous queries take an answer variable", ts.peek().span)
        ts.next()
        var = ts.expect_kind("IDENT", "an answer variable")
        if not var.text[0].isupper():
            raise ParseError("answer variable must start with an upper-case letter", var.span)
        mode = CREDULOUS_EXPLAIN
    ts.expect(")")
    trailing = ts.peek()
    if trailing.kind != "EOF" and trailing.text != ".":
        raise ParseError("unexpected trailing input", trailing.span)
    return Query(tuple(literals), mode)


class UnknownSymbolError(Exception):
    pass


def resolve_query(q: Query, d: DomainDescription) -> Query:
    """Map the lowered clause-style fluent names in a parsed query back onto
    the domain's declared fluents."""
    by_clause_name: dict[str, str] = {}
    for name in d.vocabulary.fluents:
        low = clause_name(name)
        if low in by_clause_name and by_clause_name[low] != name:
            raise UnknownSymbolError(
                "fluent name %r is ambiguous in clause form" % low
            )
        by_clause_name[low] = name
    resolved = []
    for lit, time in q.literals:
        name = lit.fluent.name
        if name in d.vocabulary.fluents:
            target = name
        elif name in by_clause_name:
            target = by_clause_name[name]
        else:
            raise UnknownSymbolError("unknown fluent %r in query" % name)
        resolved.append(
            (FluentLiteral(Fluent(target, lit.fluent.args), lit.positive), time)
        )
    return Query(tuple(resolved), q.mode)
