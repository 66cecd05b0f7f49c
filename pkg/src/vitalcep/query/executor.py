"""Star-decomposed map/group/reduce query execution over chunked stores.

Each star (patterns sharing a subject) becomes one map/group/reduce round:
mappers emit (subject, predicate-object) pairs per chunk, the grouped pairs
are reduced to bindings per subject, and star results are hash-joined on
their shared variables. A naive nested-loop reference executor provides the
equivalence oracle; both sort results canonically so comparisons are exact.
"""

import os
from concurrent.futures import ThreadPoolExecutor

from ..rdf.store import ChunkedStore, TripleStore, merge
from ..rdf.terms import Term
from .plan import (
    Binding,
    Comparison,
    JoinStep,
    QueryPlan,
    ResultSet,
    StarGroup,
    TriplePattern,
    Variable,
    canonical_sort,
)


def decompose_stars(plan: QueryPlan) -> tuple[list[StarGroup], list[JoinStep]]:
    """Group patterns by subject position and schedule the star joins.

    The schedule starts at star 0 and repeatedly picks the first star that
    shares a variable with everything joined so far; a star sharing nothing
    becomes a cartesian step (empty shared_vars).
    """
    stars: list[StarGroup] = []
    index: dict[object, int] = {}
    for pattern in plan.patterns:
        key = pattern.s
        if key not in index:
            index[key] = len(stars)
            stars.append(StarGroup(pattern.s, []))
        stars[index[key]].patterns.append(pattern)

    if not stars:
        return [], []
    schedule = [JoinStep(0, ())]
    joined_vars = stars[0].variables()
    remaining = list(range(1, len(stars)))
    while remaining:
        chosen = None
        for i in remaining:
            shared = tuple(
                sorted(stars[i].variables() & joined_vars, key=lambda v: v.name)
            )
            if shared:
                chosen = (i, shared)
                break
        if chosen is None:
            chosen = (remaining[0], ())
        i, shared = chosen
        schedule.append(JoinStep(i, shared))
        joined_vars |= stars[i].variables()
        remaining.remove(i)
    return stars, schedule


def map_phase(chunk: TripleStore, star: StarGroup) -> list[tuple[Term, tuple[Term, Term]]]:
    """Emit (subject, (predicate, object)) for the star's predicates."""
    emissions: list[tuple[Term, tuple[Term, Term]]] = []
    if star.has_variable_predicate():
        for t in chunk:
            emissions.append((t.s, (t.p, t.o)))
        return emissions
    for predicate in star.concrete_predicates():
        for t in chunk.match(p=predicate):
            emissions.append((t.s, (t.p, t.o)))
    return emissions


def group_by_key(
    emissions: list[tuple[Term, tuple[Term, Term]]]
) -> dict[Term, list[tuple[Term, Term]]]:
    grouped: dict[Term, list[tuple[Term, Term]]] = {}
    for key, value in emissions:
        grouped.setdefault(key, []).append(value)
    return grouped


def _match_pair(
    pattern: TriplePattern, pair: tuple[Term, Term], binding: Binding
) -> Binding | None:
    predicate, obj = pair
    extended = binding
    for position, value in ((pattern.p, predicate), (pattern.o, obj)):
        if isinstance(position, Variable):
            bound = extended.get(position)
            if bound is None:
                if extended is binding:
                    extended = dict(binding)
                extended[position] = value
            elif bound != value:
                return None
        elif position != value:
            return None
    return dict(extended) if extended is binding else extended


def reduce_phase(
    grouped: dict[Term, list[tuple[Term, Term]]],
    star: StarGroup,
    filters: list[Comparison] = (),
) -> list[Binding]:
    """Bindings for every subject whose pairs satisfy the whole star.

    Multi-valued predicates produce one binding per combination. Filters
    are applied to each candidate binding once its variables are bound.
    """
    results: list[Binding] = []
    for subject, pairs in grouped.items():
        if isinstance(star.root, Variable):
            seed: Binding = {star.root: subject}
        elif star.root == subject:
            seed = {}
        else:
            continue
        candidates = [seed]
        for pattern in star.patterns:
            extended: list[Binding] = []
            for binding in candidates:
                for pair in pairs:
                    b2 = _match_pair(pattern, pair, binding)
                    if b2 is not None:
                        extended.append(b2)
            candidates = extended
            if not candidates:
                break
        for binding in candidates:
            if all(evaluate_filter(f, binding) for f in filters):
                results.append(binding)
    return results


def _numeric(term: Term) -> float | None:
    return term.numeric() if isinstance(term, Term) else None


def evaluate_filter(comparison: Comparison, binding: Binding) -> bool:
    """SPARQL-style filter: evaluation errors make the binding fail."""
    left = binding.get(comparison.var)
    if left is None:
        return False
    right = comparison.operand
    if isinstance(right, Variable):
        right = binding.get(right)
        if right is None:
            return False
    ln, rn = _numeric(left), _numeric(right)
    op = comparison.op
    if ln is not None and rn is not None:
        if op == "<":
            return ln < rn
        if op == "<=":
            return ln <= rn
        if op == ">":
            return ln > rn
        if op == ">=":
            return ln >= rn
        if op == "=":
            return ln == rn
        return ln != rn
    # non-numeric ordering comparisons fail the binding (error-as-false)
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    return False


def _split_filters(
    plan: QueryPlan, stars: list[StarGroup]
) -> tuple[list[list[Comparison]], list[Comparison]]:
    """Push filters into every star that binds all their variables."""
    per_star: list[list[Comparison]] = [[] for _ in stars]
    residual: list[Comparison] = []
    for f in plan.filters:
        needed = f.variables()
        homes = [i for i, star in enumerate(stars) if needed <= star.variables()]
        if homes:
            for i in homes:
                per_star[i].append(f)
        else:
            residual.append(f)
    return per_star, residual


def _hash_join(
    left: list[Binding], right: list[Binding], shared: tuple[Variable, ...]
) -> list[Binding]:
    if not shared:
        return [{**a, **b} for a in left for b in right]
    table: dict[tuple[Term, ...], list[Binding]] = {}
    for b in left:
        key = tuple(_join_key(b, v) for v in shared)
        table.setdefault(key, []).append(b)
    out: list[Binding] = []
    for b in right:
        key = tuple(_join_key(b, v) for v in shared)
        for match in table.get(key, ()):
            out.append({**match, **b})
    return out


def _join_key(binding: Binding, var: Variable) -> Term:
    try:
        return binding[var]
    except KeyError:
        raise RuntimeError(
            f"internal invariant violation: join variable ?{var.name} unbound"
        ) from None


def _project(
    bindings: list[Binding], select_vars: list[Variable]
) -> list[tuple[Term, ...]]:
    return [tuple(b[v] for v in select_vars) for b in bindings]


def _finalize(
    bindings: list[Binding], plan: QueryPlan, residual: list[Comparison]
) -> ResultSet:
    kept = [b for b in bindings if all(evaluate_filter(f, b) for f in residual)]
    rows = canonical_sort(_project(kept, plan.select_vars))
    if plan.limit is not None:
        rows = rows[: plan.limit]
    return ResultSet([v.name for v in plan.select_vars], rows)


def execute(chunked: ChunkedStore, plan: QueryPlan, parallelism: int = 1) -> ResultSet:
    """Run the plan over the chunks; identical output for any worker count."""
    stars, schedule = decompose_stars(plan)
    if not stars:
        return ResultSet([v.name for v in plan.select_vars], [])
    per_star_filters, residual = _split_filters(plan, stars)

    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    tasks = [(si, ci) for si in range(len(stars)) for ci in range(len(chunked.chunks))]
    emissions: dict[tuple[int, int], list] = {}
    if parallelism == 1 or len(tasks) <= 1:
        for si, ci in tasks:
            emissions[(si, ci)] = map_phase(chunked.chunks[ci], stars[si])
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            futures = {
                (si, ci): pool.submit(map_phase, chunked.chunks[ci], stars[si])
                for si, ci in tasks
            }
            for key, future in futures.items():
                emissions[key] = future.result()

    star_bindings: list[list[Binding]] = []
    for si, star in enumerate(stars):
        merged: list = []
        for ci in range(len(chunked.chunks)):
            merged.extend(emissions[(si, ci)])
        grouped = group_by_key(merged)
        star_bindings.append(reduce_phase(grouped, star, per_star_filters[si]))

    result = star_bindings[schedule[0].star_index]
    for step in schedule[1:]:
        result = _hash_join(result, star_bindings[step.star_index], step.shared_vars)
    return _finalize(result, plan, residual)


def execute_reference(store: TripleStore, plan: QueryPlan) -> ResultSet:
    """Nested-loop pattern join over an unpartitioned store (oracle)."""
    bindings: list[Binding] = [{}]
    for pattern in plan.patterns:
        extended: list[Binding] = []
        for binding in bindings:
            s = binding.get(pattern.s) if isinstance(pattern.s, Variable) else pattern.s
            p = binding.get(pattern.p) if isinstance(pattern.p, Variable) else pattern.p
            o = binding.get(pattern.o) if isinstance(pattern.o, Variable) else pattern.o
            for triple in store.match(s, p, o):
                b2 = dict(binding)
                ok = True
                for position, value in (
                    (pattern.s, triple.s),
                    (pattern.p, triple.p),
                    (pattern.o, triple.o),
                ):
                    if isinstance(position, Variable):
                        bound = b2.get(position)
                        if bound is None:
                            b2[position] = value
                        elif bound != value:
                            ok = False
                            break
                if ok:
                    extended.append(b2)
        bindings = extended
        if not bindings:
            break
    return _finalize(bindings, plan, plan.filters)


def max_parallelism() -> int:
    return os.cpu_count() or 1


def execute_merged(chunked: ChunkedStore, plan: QueryPlan) -> ResultSet:
    """Reference execution over the union of the given chunks."""
    return execute_reference(merge(chunked.chunks), plan)
