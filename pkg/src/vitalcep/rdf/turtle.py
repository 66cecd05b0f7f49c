"""Turtle-subset parsing and serialization.

The subset covers what the converter emits plus the knowledge-base files:
``@prefix`` declarations, prefixed names, the ``a`` keyword, ``;`` predicate
lists, ``,`` object lists, and plain/typed/numeric literals. Anything beyond
that (collections, blank-node property lists, multiline strings, @base) is
rejected with the construct named.
"""

import re
from collections.abc import Iterable, Mapping

from ..errors import ParseError, UnknownPrefixError, UnsupportedFeatureError
from .terms import (
    BLANK,
    IRI,
    LITERAL,
    Term,
    Triple,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
)
from .ntriples import _apply_aliases, _unescape
from .store import TripleStore
from .vocab import RDF_TYPE, STANDARD_PREFIXES

_UNSUPPORTED = {
    "[": "blank-node property list",
    "]": "blank-node property list",
    "(": "collection",
    ")": "collection",
    "{": "graph block",
    "}": "graph block",
}

_TOKEN = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>\#[^\n]*)
    | (?P<longstring>\"\"\")
    | (?P<prefixkw>@prefix\b)
    | (?P<basekw>@base\b)
    | (?P<iriref><[^<>\s"{}|^`\\]*>)
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<carets>\^\^)
    | (?P<double>[+-]?(?:\d+\.\d*|\.?\d+)[eE][+-]?\d+)
    | (?P<decimal>[+-]?\d*\.\d+)
    | (?P<integer>[+-]?\d+)
    | (?P<blank>_:[A-Za-z0-9](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)
    | (?P<pname>(?:[A-Za-z][A-Za-z0-9_-]*)?:(?:[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)?)
    | (?P<langtag>@[A-Za-z][A-Za-z0-9-]*)
    | (?P<a>\ba\b)
    | (?P<punct>[.;,])
    | (?P<other>\S)
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "value", "line")

    def __init__(self, kind: str, value: str, line: int):
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
            raise ParseError(f"unreadable input at {text[pos:pos + 20]!r}", line=line)
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            line += value.count("\n")
        elif kind == "comment":
            pass
        elif kind == "longstring":
            raise UnsupportedFeatureError("multiline string literal", line=line)
        elif kind == "basekw":
            raise UnsupportedFeatureError("@base declaration", line=line)
        elif kind == "langtag":
            raise UnsupportedFeatureError("language-tagged literal", line=line)
        elif kind == "other":
            construct = _UNSUPPORTED.get(value)
            if construct:
                raise UnsupportedFeatureError(construct, line=line)
            raise ParseError(f"unexpected character {value!r}", line=line)
        else:
            tokens.append(_Token(kind, value, line))
        pos = m.end()
    tokens.append(_Token("eof", "", line))
    return tokens


class _TurtleParser:
    def __init__(self, text: str, aliases: Mapping[str, str] | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.aliases = aliases
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self._blank_seq = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, got {tok.value!r}", line=tok.line)
        return tok

    def parse(self) -> list[Triple]:
        while self.peek().kind != "eof":
            if self.peek().kind == "prefixkw":
                self.prefix_decl()
            else:
                self.statement()
        return self.triples

    def prefix_decl(self):
        self.next()
        name_tok = self.expect("pname", "prefix name")
        if not name_tok.value.endswith(":") or name_tok.value.count(":") != 1:
            raise ParseError(f"malformed prefix name {name_tok.value!r}", line=name_tok.line)
        iri_tok = self.expect("iriref", "namespace IRI")
        tok = self.next()
        if not (tok.kind == "punct" and tok.value == "."):
            raise ParseError("@prefix declaration not terminated by '.'", line=tok.line)
        self.prefixes[name_tok.value[:-1]] = iri_tok.value[1:-1]

    def statement(self):
        subject = self.node(subject_position=True)
        while True:
            predicate = self.verb()
            while True:
                obj = self.node(subject_position=False)
                self.triples.append(Triple(subject, predicate, obj))
                tok = self.next()
                if tok.kind == "punct" and tok.value == ",":
                    continue
                break
            if tok.kind == "punct" and tok.value == ";":
                # tolerate a dangling ';' before '.'
                if self.peek().kind == "punct" and self.peek().value == ".":
                    tok = self.next()
                    break
                continue
            break
        if not (tok.kind == "punct" and tok.value == "."):
            raise ParseError(f"expected '.', got {tok.value!r}", line=tok.line)

    def verb(self) -> Term:
        tok = self.peek()
        if tok.kind == "a":
            self.next()
            return RDF_TYPE
        term = self.node(subject_position=True)
        if term.kind != IRI:
            raise ParseError(f"predicate must be an IRI, got {term.n3()}", line=tok.line)
        return term

    def expand(self, pname: str, line: int) -> str:
        prefix, _, local = pname.partition(":")
        if prefix not in self.prefixes:
            raise UnknownPrefixError(prefix, line=line)
        return self.prefixes[prefix] + local

    def node(self, subject_position: bool) -> Term:
        tok = self.next()
        if tok.kind == "iriref":
            return Term(IRI, _apply_aliases(tok.value[1:-1], self.aliases))
        if tok.kind == "blank":
            return Term(BLANK, tok.value[2:])
        if tok.kind == "pname":
            return Term(IRI, _apply_aliases(self.expand(tok.value, tok.line), self.aliases))
        if subject_position:
            raise ParseError(f"expected IRI or blank node, got {tok.value!r}", line=tok.line)
        if tok.kind == "string":
            lex = _unescape(tok.value[1:-1], tok.line)
            if self.peek().kind == "carets":
                self.next()
                dt_tok = self.next()
                if dt_tok.kind == "iriref":
                    dt = dt_tok.value[1:-1]
                elif dt_tok.kind == "pname":
                    dt = self.expand(dt_tok.value, dt_tok.line)
                else:
                    raise ParseError("expected datatype IRI after '^^'", line=dt_tok.line)
                return Term(LITERAL, lex, _apply_aliases(dt, self.aliases))
            return Term(LITERAL, lex, XSD_STRING)
        if tok.kind == "integer":
            return Term(LITERAL, tok.value, XSD_INTEGER)
        if tok.kind == "decimal":
            return Term(LITERAL, tok.value, XSD_DECIMAL)
        if tok.kind == "double":
            return Term(LITERAL, tok.value, XSD_DOUBLE)
        raise ParseError(f"expected RDF term, got {tok.value!r}", line=tok.line)


def parse_turtle(text: str, aliases: Mapping[str, str] | None = None) -> list[Triple]:
    """Parse a Turtle-subset document into triples with absolute IRIs."""
    parser = _TurtleParser(text, aliases)
    triples = parser.parse()
    # blank-node labels are local; validate well-formedness happened in Term
    return triples


def _pname_or_iriref(term: Term, prefixes: Mapping[str, str]) -> str:
    if term.kind == BLANK:
        return f"_:{term.value}"
    for name, ns in prefixes.items():
        if term.value.startswith(ns):
            local = term.value[len(ns):]
            if local and re.fullmatch(r"[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?", local):
                return f"{name}:{local}"
    return f"<{term.value}>"


def _object_text(term: Term, prefixes: Mapping[str, str]) -> str:
    if term.kind != LITERAL:
        return _pname_or_iriref(term, prefixes)
    if term.datatype == XSD_INTEGER and re.fullmatch(r"[+-]?\d+", term.value):
        return term.value
    if term.datatype == XSD_DECIMAL and re.fullmatch(r"[+-]?\d*\.\d+", term.value):
        return term.value
    if term.datatype == XSD_STRING:
        return term.n3()
    dt = _pname_or_iriref(Term(IRI, term.datatype), prefixes)
    lex = term.n3().rsplit("^^", 1)[0]
    return f"{lex}^^{dt}"


def serialize_turtle(
    store: TripleStore | Iterable[Triple],
    prefixes: Mapping[str, str] | None = None,
) -> str:
    """Turtle serialization grouped by subject with ';' predicate lists.

    Always emits the prefix header (an empty store yields the header alone)
    so output is self-describing and stable.
    """
    if prefixes is None:
        prefixes = STANDARD_PREFIXES
    out = [f"@prefix {name}: <{ns}> ." for name, ns in sorted(prefixes.items())]

    by_subject: dict[Term, dict[Term, list[Term]]] = {}
    for t in store:
        by_subject.setdefault(t.s, {}).setdefault(t.p, []).append(t.o)

    for subject in sorted(by_subject, key=lambda s: s.n3()):
        out.append("")
        preds = by_subject[subject]
        # rdf:type leads, abbreviated to 'a'
        ordered = sorted(preds, key=lambda p: (p != RDF_TYPE, p.n3()))
        lines = []
        for pred in ordered:
            verb = "a" if pred == RDF_TYPE else _pname_or_iriref(pred, prefixes)
            objects = ", ".join(
                _object_text(o, prefixes) for o in sorted(preds[pred], key=lambda o: o.n3())
            )
            lines.append(f"    {verb} {objects}")
        body = " ;\n".join(lines)
        out.append(f"{_pname_or_iriref(subject, prefixes)}\n{body} .")
    return "\n".join(out) + "\n"
