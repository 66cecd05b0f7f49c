"""RDF data model, N-Triples/Turtle IO, and the chunk-partitionable store."""

from .ntriples import parse_ntriples, serialize_ntriples
from .store import ChunkedStore, TripleStore, merge, partition, stable_hash
from .terms import Term, Triple, blank, integer, iri, literal
from .turtle import parse_turtle, serialize_turtle

__all__ = [
    "ChunkedStore",
    "Term",
    "Triple",
    "TripleStore",
    "blank",
    "integer",
    "iri",
    "literal",
    "merge",
    "parse_ntriples",
    "parse_turtle",
    "partition",
    "serialize_ntriples",
    "serialize_turtle",
    "stable_hash",
]
