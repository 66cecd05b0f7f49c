"""RDF terms and triples.

Terms are immutable and hashable so they can key store indexes and query
bindings directly. Literal equality is lexical: "85" and "085" are distinct
terms even when both are integer-typed.
"""

from dataclasses import dataclass, field

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"

NUMERIC_DATATYPES = frozenset({XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE})

IRI = "iri"
LITERAL = "literal"
BLANK = "blank"

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


@dataclass(frozen=True, slots=True)
class Term:
    """One RDF term: an IRI, a typed literal, or a blank node.

    ``value`` holds the IRI string, the literal lexical form, or the blank
    node label depending on ``kind``. ``datatype`` is set for literals only
    and defaults to xsd:string.
    """

    kind: str
    value: str
    datatype: str | None = field(default=None, compare=True)

    def __post_init__(self):
        if self.kind == IRI:
            if not self.value or any(c.isspace() for c in self.value):
                raise ValueError(f"invalid IRI: {self.value!r}")
            if self.datatype is not None:
                raise ValueError("IRIs carry no datatype")
        elif self.kind == LITERAL:
            if self.datatype is None:
                object.__setattr__(self, "datatype", XSD_STRING)
            if self.datatype == XSD_INTEGER:
                try:
                    int(self.value)
                except ValueError:
                    raise ValueError(
                        f"integer literal with non-integer lexical form: {self.value!r}"
                    ) from None
        elif self.kind == BLANK:
            if not self.value or any(c.isspace() for c in self.value):
                raise ValueError(f"invalid blank node label: {self.value!r}")
            if self.datatype is not None:
                raise ValueError("blank nodes carry no datatype")
        else:
            raise ValueError(f"unknown term kind: {self.kind!r}")

    @property
    def is_iri(self) -> bool:
        return self.kind == IRI

    @property
    def is_literal(self) -> bool:
        return self.kind == LITERAL

    @property
    def is_blank(self) -> bool:
        return self.kind == BLANK

    def numeric(self) -> float | None:
        """Numeric value of a numeric-typed literal, else None."""
        if self.kind != LITERAL or self.datatype not in NUMERIC_DATATYPES:
            return None
        try:
            return float(self.value)
        except ValueError:
            return None

    def n3(self) -> str:
        """N-Triples serialization of this term."""
        if self.kind == IRI:
            return f"<{self.value}>"
        if self.kind == BLANK:
            return f"_:{self.value}"
        lex = "".join(_ESCAPES.get(c, c) for c in self.value)
        if self.datatype == XSD_STRING:
            return f'"{lex}"'
        return f'"{lex}"^^<{self.datatype}>'

    def __repr__(self):
        return f"Term({self.n3()})"


def iri(value: str) -> Term:
    return Term(IRI, value)


def literal(value: str, datatype: str | None = None) -> Term:
    return Term(LITERAL, value, datatype)


def integer(value: int) -> Term:
    return Term(LITERAL, str(int(value)), XSD_INTEGER)


def blank(label: str) -> Term:
    return Term(BLANK, label)


@dataclass(frozen=True, slots=True)
class Triple:
    """A (subject, predicate, object) statement."""

    s: Term
    p: Term
    o: Term

    def __post_init__(self):
        if self.s.kind not in (IRI, BLANK):
            raise ValueError(f"triple subject must be an IRI or blank node: {self.s!r}")
        if self.p.kind != IRI:
            raise ValueError(f"triple predicate must be an IRI: {self.p!r}")

    def n3(self) -> str:
        return f"{self.s.n3()} {self.p.n3()} {self.o.n3()} ."

    def __repr__(self):
        return f"Triple({self.s.n3()} {self.p.n3()} {self.o.n3()})"
