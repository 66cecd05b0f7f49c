"""Parser for the SPARQL subset: PREFIX / SELECT / WHERE / FILTER / LIMIT.

Graph patterns are '.'-separated with ';' predicate lists; one comparison
per FILTER. Keywords outside the subset (OPTIONAL, UNION, ORDER BY, ...)
raise an unsupported-feature error naming the keyword.
"""

import re
from collections.abc import Mapping

from ..errors import ParseError, UnknownPrefixError, UnsupportedFeatureError
from ..rdf.ntriples import _unescape
from ..rdf.terms import (
    IRI,
    LITERAL,
    Term,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
)
from ..rdf.vocab import RDF_TYPE
from .plan import COMPARATORS, Comparison, QueryPlan, TriplePattern, Variable

_UNSUPPORTED_KEYWORDS = {
    "OPTIONAL",
    "UNION",
    "ORDER",
    "GROUP",
    "HAVING",
    "DISTINCT",
    "REDUCED",
    "OFFSET",
    "BIND",
    "VALUES",
    "MINUS",
    "SERVICE",
    "GRAPH",
    "ASK",
    "CONSTRUCT",
    "DESCRIBE",
    "EXISTS",
}

_TOKEN = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>\#[^\n]*)
    | (?P<iriref><[^<>\s"{}|^`\\]*>)
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<carets>\^\^)
    | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<comparator><=|>=|!=|<|>|=)
    | (?P<decimal>[+-]?\d*\.\d+)
    | (?P<integer>[+-]?\d+)
    | (?P<pname>(?:[A-Za-z][A-Za-z0-9_-]*)?:(?:[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)?)
    | (?P<word>[A-Za-z][A-Za-z0-9_]*)
    | (?P<punct>[{}().;,])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "value", "line")

    def __init__(self, kind, value, line):
        self.kind = kind
        self.value = value
        self.line = line


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unreadable query text at {text[pos:pos + 20]!r}", line=line)
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            line += value.count("\n")
        elif kind != "comment":
            tokens.append(_Token(kind, value, line))
        pos = m.end()
    tokens.append(_Token("eof", "", line))
    return tokens


class _QueryParser:
    def __init__(self, text: str, base_prefixes: Mapping[str, str] | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes: dict[str, str] = dict(base_prefixes or {})

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: _Token) -> ParseError:
        return ParseError(message, line=tok.line)

    def keyword(self, tok: _Token) -> str | None:
        if tok.kind == "word":
            word = tok.value.upper()
            if word in _UNSUPPORTED_KEYWORDS:
                raise UnsupportedFeatureError(
                    "ORDER BY" if word == "ORDER" else word, line=tok.line
                )
            return word
        return None

    def expect_word(self, expected: str):
        tok = self.next()
        if self.keyword(tok) != expected:
            raise self.error(f"expected {expected}, got {tok.value!r}", tok)

    def expect_punct(self, char: str):
        tok = self.next()
        if not (tok.kind == "punct" and tok.value == char):
            raise self.error(f"expected {char!r}, got {tok.value!r}", tok)

    def expand(self, pname: str, line: int) -> str:
        prefix, _, local = pname.partition(":")
        if prefix not in self.prefixes:
            raise UnknownPrefixError(prefix, line=line)
        return self.prefixes[prefix] + local

    def parse(self) -> QueryPlan:
        while True:
            tok = self.peek()
            if tok.kind == "word" and tok.value.upper() == "PREFIX":
                self.next()
                name = self.next()
                if name.kind != "pname" or not name.value.endswith(":"):
                    raise self.error("expected prefix name after PREFIX", name)
                ns = self.next()
                if ns.kind != "iriref":
                    raise self.error("expected namespace IRI", ns)
                self.prefixes[name.value[:-1]] = ns.value[1:-1]
                continue
            break

        self.expect_word("SELECT")
        select_vars: list[Variable] = []
        while self.peek().kind == "var":
            select_vars.append(Variable(self.next().value[1:]))
        if not select_vars:
            tok = self.peek()
            self.keyword(tok)  # surfaces things like DISTINCT by name
            raise self.error("SELECT needs at least one variable", tok)

        self.expect_word("WHERE")
        self.expect_punct("{")
        patterns: list[TriplePattern] = []
        filters: list[Comparison] = []
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.value == "}":
                self.next()
                break
            if tok.kind == "eof":
                raise self.error("unterminated WHERE block", tok)
            if tok.kind == "word" and tok.value.upper() == "FILTER":
                self.next()
                filters.append(self.filter_clause())
            else:
                patterns.extend(self.pattern_block())
            # '.' separators are optional before '}'
            if self.peek().kind == "punct" and self.peek().value == ".":
                self.next()

        limit = None
        tok = self.peek()
        if tok.kind == "word":
            if tok.value.upper() == "LIMIT":
                self.next()
                num = self.next()
                if num.kind != "integer" or int(num.value) < 0:
                    raise self.error("LIMIT needs a non-negative integer", num)
                limit = int(num.value)
            else:
                self.keyword(tok)
                raise self.error(f"unexpected trailing {tok.value!r}", tok)
        tok = self.peek()
        if tok.kind != "eof":
            self.keyword(tok)
            raise self.error(f"unexpected trailing {tok.value!r}", tok)

        plan = QueryPlan(self.prefixes, select_vars, patterns, filters, limit)
        bound = plan.pattern_variables()
        for v in select_vars:
            if v not in bound:
                raise ParseError(f"select variable ?{v.name} occurs in no pattern")
        for f in filters:
            for v in f.variables():
                if v not in bound:
                    raise ParseError(f"filter variable ?{v.name} occurs in no pattern")
        return plan

    def pattern_block(self) -> list[TriplePattern]:
        """One subject with a ';'-separated predicate-object list."""
        subject = self.term(position="subject")
        out = []
        while True:
            predicate = self.term(position="predicate")
            obj = self.term(position="object")
            out.append(TriplePattern(subject, predicate, obj))
            tok = self.peek()
            if tok.kind == "punct" and tok.value == ";":
                self.next()
                # tolerate dangling ';' before '.' or '}'
                nxt = self.peek()
                if nxt.kind == "punct" and nxt.value in ".}":
                    break
                continue
            if tok.kind == "punct" and tok.value == ",":
                raise UnsupportedFeatureError("object list (',')", line=tok.line)
            break
        return out

    def term(self, position: str):
        tok = self.next()
        if tok.kind == "var":
            return Variable(tok.value[1:])
        if tok.kind == "word" and tok.value == "a" and position == "predicate":
            return RDF_TYPE
        if tok.kind == "iriref":
            return Term(IRI, tok.value[1:-1])
        if tok.kind == "pname":
            return Term(IRI, self.expand(tok.value, tok.line))
        if position == "object":
            if tok.kind == "string":
                lex = _unescape(tok.value[1:-1], tok.line)
                if self.peek().kind == "carets":
                    self.next()
                    dt = self.next()
                    if dt.kind == "iriref":
                        return Term(LITERAL, lex, dt.value[1:-1])
                    if dt.kind == "pname":
                        return Term(LITERAL, lex, self.expand(dt.value, dt.line))
                    raise self.error("expected datatype IRI after '^^'", dt)
                return Term(LITERAL, lex, XSD_STRING)
            if tok.kind == "integer":
                return Term(LITERAL, tok.value, XSD_INTEGER)
            if tok.kind == "decimal":
                return Term(LITERAL, tok.value, XSD_DECIMAL)
        self.keyword(tok)
        raise self.error(f"expected {position} term, got {tok.value!r}", tok)

    def filter_clause(self) -> Comparison:
        self.expect_punct("(")
        left = self.next()
        if left.kind != "var":
            raise self.error("FILTER comparison must start with a variable", left)
        op_tok = self.next()
        if op_tok.kind != "comparator" or op_tok.value not in COMPARATORS:
            raise self.error(f"unknown comparator {op_tok.value!r}", op_tok)
        operand_tok = self.peek()
        if operand_tok.kind == "var":
            self.next()
            operand = Variable(operand_tok.value[1:])
        else:
            operand = self.term(position="object")
        self.expect_punct(")")
        return Comparison(Variable(left.value[1:]), op_tok.value, operand)


def parse_query(text: str, base_prefixes: Mapping[str, str] | None = None) -> QueryPlan:
    return _QueryParser(text, base_prefixes).parse()
