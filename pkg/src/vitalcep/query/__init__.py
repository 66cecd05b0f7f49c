"""SPARQL-subset parsing and parallel star-decomposed execution."""

from .bench import BenchReport, BenchRow, bench, parse_combo_spec
from .executor import (
    decompose_stars,
    evaluate_filter,
    execute,
    execute_reference,
    group_by_key,
    map_phase,
    max_parallelism,
    reduce_phase,
)
from .parser import parse_query
from .plan import (
    Comparison,
    JoinStep,
    QueryPlan,
    ResultSet,
    StarGroup,
    TriplePattern,
    Variable,
)

__all__ = [
    "BenchReport",
    "BenchRow",
    "Comparison",
    "JoinStep",
    "QueryPlan",
    "ResultSet",
    "StarGroup",
    "TriplePattern",
    "Variable",
    "bench",
    "decompose_stars",
    "evaluate_filter",
    "execute",
    "execute_reference",
    "group_by_key",
    "map_phase",
    "max_parallelism",
    "parse_combo_spec",
    "parse_query",
    "reduce_phase",
]
