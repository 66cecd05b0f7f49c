"""Line-oriented N-Triples parsing and serialization.

Covers the statement forms the pipeline emits: IRIs, blank nodes, plain and
typed literals with the standard string escapes. Language-tagged literals
are outside the subset and rejected by name.
"""

import re
from collections.abc import Iterable, Mapping

from ..errors import ParseError, UnsupportedFeatureError
from .terms import BLANK, IRI, LITERAL, Term, Triple, XSD_STRING
from .store import TripleStore

_IRIREF = re.compile(r"<([^<>\s\"{}|^`\\]+)>")
_BLANK = re.compile(r"_:([A-Za-z0-9][A-Za-z0-9_.-]*)")
_STRING = re.compile(r'"((?:[^"\\\n]|\\.)*)"')

_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f"}


def _unescape(lex: str, line_no: int) -> str:
    out = []
    i = 0
    while i < len(lex):
        c = lex[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= len(lex):
            raise ParseError("dangling escape in literal", line=line_no, text=lex)
        esc = lex[i + 1]
        if esc in _UNESCAPES:
            out.append(_UNESCAPES[esc])
            i += 2
        elif esc == "u" or esc == "U":
            width = 4 if esc == "u" else 8
            hexdigits = lex[i + 2 : i + 2 + width]
            if len(hexdigits) != width:
                raise ParseError("truncated \\%s escape" % esc, line=line_no, text=lex)
            try:
                out.append(chr(int(hexdigits, 16)))
            except ValueError:
                raise ParseError(
                    f"invalid \\{esc} escape: {hexdigits!r}", line=line_no, text=lex
                ) from None
            i += 2 + width
        else:
            raise ParseError(f"unknown escape \\{esc}", line=line_no, text=lex)
    return "".join(out)


def _apply_aliases(value: str, aliases: Mapping[str, str] | None) -> str:
    if aliases:
        for old, new in aliases.items():
            if value.startswith(old):
                return new + value[len(old) :]
    return value


class _LineScanner:
    def __init__(self, line: str, line_no: int):
        self.line = line
        self.pos = 0
        self.line_no = line_no

    def skip_ws(self):
        while self.pos < len(self.line) and self.line[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.line)

    def error(self, message: str) -> ParseError:
        return ParseError(message, line=self.line_no, text=self.line.strip())

    def term(self, aliases: Mapping[str, str] | None) -> Term:
        self.skip_ws()
        if self.pos >= len(self.line):
            raise self.error("unexpected end of statement")
        c = self.line[self.pos]
        if c == "<":
            m = _IRIREF.match(self.line, self.pos)
            if not m:
                raise self.error("malformed IRI reference")
            self.pos = m.end()
            return Term(IRI, _apply_aliases(m.group(1), aliases))
        if c == "_":
            m = _BLANK.match(self.line, self.pos)
            if not m:
                raise self.error("malformed blank node label")
            self.pos = m.end()
            return Term(BLANK, m.group(1))
        if c == '"':
            m = _STRING.match(self.line, self.pos)
            if not m:
                raise self.error("unterminated literal")
            self.pos = m.end()
            lex = _unescape(m.group(1), self.line_no)
            if self.line.startswith("^^", self.pos):
                self.pos += 2
                dt = _IRIREF.match(self.line, self.pos)
                if not dt:
                    raise self.error("malformed datatype IRI")
                self.pos = dt.end()
                return Term(LITERAL, lex, _apply_aliases(dt.group(1), aliases))
            if self.pos < len(self.line) and self.line[self.pos] == "@":
                raise UnsupportedFeatureError("language-tagged literal", line=self.line_no)
            return Term(LITERAL, lex, XSD_STRING)
        raise self.error(f"unexpected character {c!r}")

    def dot(self):
        self.skip_ws()
        if self.pos >= len(self.line) or self.line[self.pos] != ".":
            raise self.error("statement not terminated by '.'")
        self.pos += 1
        self.skip_ws()
        if self.pos < len(self.line) and self.line[self.pos] != "#":
            raise self.error("trailing content after '.'")


def parse_ntriples(
    text: str | Iterable[str], aliases: Mapping[str, str] | None = None
) -> list[Triple]:
    """Parse an N-Triples document into triples, in input order.

    ``aliases`` optionally rewrites IRI namespace prefixes on input (used to
    fold the legacy capitalized sensor namespace onto the canonical one).
    """
    # split on '\n' only: other line-separator code points are legal inside
    # literal lexical forms and must not end a statement
    lines = text.split("\n") if isinstance(text, str) else text
    triples = []
    for line_no, raw in enumerate(lines, start=1):
        raw = raw.removesuffix("\r")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        scanner = _LineScanner(raw, line_no)
        s = scanner.term(aliases)
        p = scanner.term(aliases)
        o = scanner.term(aliases)
        scanner.dot()
        try:
            triples.append(Triple(s, p, o))
        except ValueError as exc:
            raise ParseError(str(exc), line=line_no, text=line) from None
    return triples


def serialize_ntriples(store: TripleStore | Iterable[Triple]) -> str:
    """One statement per line, sorted for stable output."""
    lines = sorted(t.n3() for t in store)
    return "\n".join(lines) + ("\n" if lines else "")
