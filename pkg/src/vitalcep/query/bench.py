"""Query timing over chunk combinations, reported as a flat CSV table."""

import io
import statistics
import time
from collections.abc import Sequence
from dataclasses import dataclass

from ..rdf.store import ChunkedStore
from .executor import execute
from .plan import QueryPlan


@dataclass(frozen=True)
class BenchRow:
    query: str
    combo: str
    median_seconds: float
    rows: int


@dataclass
class BenchReport:
    rows: list[BenchRow]

    CSV_HEADER = "query,combo,median_seconds,rows"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(self.CSV_HEADER + "\n")
        for r in self.rows:
            out.write(f"{r.query},{r.combo},{r.median_seconds:.6f},{r.rows}\n")
        return out.getvalue()


def parse_combo_spec(spec: str, k: int) -> list[tuple[str, tuple[int, ...]]]:
    """Parse "1;2;3" or "1+2;2+3" into named 0-based chunk index tuples."""
    combos = []
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        indices = []
        for num in part.split("+"):
            i = int(num.strip())
            if not 1 <= i <= k:
                raise ValueError(f"chunk {i} out of range 1..{k}")
            indices.append(i - 1)
        combos.append((part, tuple(indices)))
    return combos


def bench(
    chunked: ChunkedStore,
    queries: Sequence[tuple[str, QueryPlan]],
    combos: Sequence[tuple[str, tuple[int, ...]]],
    repeats: int = 3,
    parallelism: int = 1,
) -> BenchReport:
    """Median wall time and result cardinality per (query, combo) cell."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rows = []
    for name, plan in queries:
        for combo_name, indices in combos:
            subset = chunked.select(indices)
            timings = []
            cardinality = 0
            for _ in range(repeats):
                start = time.perf_counter()
                result = execute(subset, plan, parallelism=parallelism)
                timings.append(time.perf_counter() - start)
                cardinality = len(result)
            rows.append(BenchRow(name, combo_name, statistics.median(timings), cardinality))
    return BenchReport(rows)
