"""Indexed in-memory triple store and subject-hash chunk partitioning.

Stores deduplicate on insert (RDF graph set semantics) and keep three
indexes, by subject, predicate, and object. Iteration order is insertion
order, which keeps downstream pipelines deterministic. Stores are meant to
be loaded once and then read concurrently; there is no locking.
"""

import hashlib
from collections.abc import Iterable, Iterator

from .terms import Term, Triple


def stable_hash(text: str) -> int:
    """Process-independent hash (str.__hash__ is randomized per run)."""
    return int.from_bytes(hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "big")


class TripleStore:
    def __init__(self, triples: Iterable[Triple] = (), chunk_id: int | None = None):
        self.chunk_id = chunk_id
        self._triples: dict[Triple, None] = {}
        self._by_s: dict[Term, list[Triple]] = {}
        self._by_p: dict[Term, list[Triple]] = {}
        self._by_o: dict[Term, list[Triple]] = {}
        self.add_all(triples)

    def insert(self, triple: Triple) -> bool:
        """Add a triple; returns False (no-op) when already present."""
        if triple in self._triples:
            return False
        self._triples[triple] = None
        self._by_s.setdefault(triple.s, []).append(triple)
        self._by_p.setdefault(triple.p, []).append(triple)
        self._by_o.setdefault(triple.o, []).append(triple)
        return True

    def add_all(self, triples: Iterable[Triple]) -> int:
        return sum(self.insert(t) for t in triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def triples(self) -> list[Triple]:
        return list(self._triples)

    def subjects(self) -> list[Term]:
        return list(self._by_s)

    def predicates(self) -> list[Term]:
        return list(self._by_p)

    def match(
        self,
        s: Term | None = None,
        p: Term | None = None,
        o: Term | None = None,
    ) -> list[Triple]:
        """Triples agreeing with every concrete position (None = wildcard).

        Scans the shortest index list among the bound positions, so a miss
        on any position costs nothing.
        """
        candidates = None
        for term, index in ((s, self._by_s), (p, self._by_p), (o, self._by_o)):
            if term is None:
                continue
            bucket = index.get(term)
            if bucket is None:
                return []
            if candidates is None or len(bucket) < len(candidates):
                candidates = bucket
        if candidates is None:
            return self.triples()
        return [
            t
            for t in candidates
            if (s is None or t.s == s) and (p is None or t.p == p) and (o is None or t.o == o)
        ]


class ChunkedStore:
    """Subject-hash partition of a store into k disjoint chunks.

    All triples sharing a subject land in the same chunk, so subject-grouped
    map work never crosses chunks.
    """

    partition_strategy = "subject-hash"

    def __init__(self, chunks: list[TripleStore]):
        self.chunks = chunks

    @property
    def k(self) -> int:
        return len(self.chunks)

    def __len__(self) -> int:
        return sum(len(c) for c in self.chunks)

    def select(self, indices: Iterable[int]) -> "ChunkedStore":
        """Sub-view over a subset of chunks (e.g. benchmark combos)."""
        return ChunkedStore([self.chunks[i] for i in indices])


def partition(store: TripleStore, k: int) -> ChunkedStore:
    if k < 1:
        raise ValueError(f"chunk count must be >= 1, got {k}")
    chunks = [TripleStore(chunk_id=i) for i in range(k)]
    for triple in store:
        chunks[stable_hash(triple.s.n3()) % k].insert(triple)
    return ChunkedStore(chunks)


def merge(chunks: Iterable[TripleStore]) -> TripleStore:
    merged = TripleStore()
    for chunk in chunks:
        merged.add_all(chunk)
    return merged
