"""Query algebra: parsed plans, star groups, bindings, and result sets."""

from dataclasses import dataclass, field

from ..rdf.terms import Term

COMPARATORS = ("<=", ">=", "!=", "<", ">", "=")


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __repr__(self):
        return f"?{self.name}"


PatternTerm = Variable | Term


@dataclass(frozen=True, slots=True)
class TriplePattern:
    s: PatternTerm
    p: PatternTerm
    o: PatternTerm

    def variables(self) -> set[Variable]:
        return {x for x in (self.s, self.p, self.o) if isinstance(x, Variable)}


@dataclass(frozen=True, slots=True)
class Comparison:
    var: Variable
    op: str  # one of COMPARATORS
    operand: PatternTerm

    def variables(self) -> set[Variable]:
        out = {self.var}
        if isinstance(self.operand, Variable):
            out.add(self.operand)
        return out


@dataclass
class QueryPlan:
    prefixes: dict[str, str]
    select_vars: list[Variable]
    patterns: list[TriplePattern]
    filters: list[Comparison]
    limit: int | None = None

    def pattern_variables(self) -> set[Variable]:
        out: set[Variable] = set()
        for p in self.patterns:
            out |= p.variables()
        return out


@dataclass
class StarGroup:
    """Patterns sharing one subject position (variable or concrete term)."""

    root: PatternTerm
    patterns: list[TriplePattern]

    def variables(self) -> set[Variable]:
        out: set[Variable] = set()
        for p in self.patterns:
            out |= p.variables()
        return out

    def concrete_predicates(self) -> list[Term]:
        seen: dict[Term, None] = {}
        for p in self.patterns:
            if isinstance(p.p, Term):
                seen.setdefault(p.p)
        return list(seen)

    def has_variable_predicate(self) -> bool:
        return any(isinstance(p.p, Variable) for p in self.patterns)


@dataclass(frozen=True)
class JoinStep:
    star_index: int
    shared_vars: tuple[Variable, ...]  # empty = cartesian product


Binding = dict[Variable, Term]


@dataclass
class ResultSet:
    """Projected solutions in canonical (lexicographic) order."""

    variables: list[str]
    rows: list[tuple[Term, ...]] = field(default_factory=list)

    def serialized_rows(self) -> list[tuple[str, ...]]:
        return [tuple(t.n3() for t in row) for row in self.rows]

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, ResultSet):
            return NotImplemented
        return self.variables == other.variables and self.rows == other.rows


def canonical_sort(rows: list[tuple[Term, ...]]) -> list[tuple[Term, ...]]:
    return sorted(rows, key=lambda row: tuple(t.n3() for t in row))
