"""Ontology schema summarization and richness metrics.

Counts are derived purely from triples: class declarations, rdfs:subClassOf
axioms, owl property declarations, and rdf:type assertions on individuals.
Metric formulas follow the usual schema-richness definitions (data
properties per class, subclass axioms per class, non-inheritance relations
over all relations, and so on) so results are reproducible offline.
"""

from dataclasses import dataclass, field

from ..errors import VitalcepError
from ..rdf import TripleStore
from ..rdf.terms import Term
from ..rdf.vocab import (
    OWL_CLASS,
    OWL_DATATYPE_PROPERTY,
    OWL_OBJECT_PROPERTY,
    RDF_TYPE,
    RDFS_CLASS,
    RDFS_SUBCLASSOF,
)


class CycleError(VitalcepError):
    """The subclass graph contains a cycle."""


class UndefinedMetricsError(VitalcepError):
    """Metrics are undefined (no classes)."""


_META = {OWL_CLASS, RDFS_CLASS, OWL_OBJECT_PROPERTY, OWL_DATATYPE_PROPERTY}


@dataclass
class OntologySummary:
    class_count: int = 0
    data_property_count: int = 0
    object_property_count: int = 0
    individual_count: int = 0
    subclass_axiom_count: int = 0
    classes_with_instances: int = 0
    axiom_count: int = 0
    leaf_class_count: int = 0
    level_breadths: tuple[int, ...] = ()
    root_to_leaf_paths: int = 0


@dataclass
class SchemaMetrics:
    attribute_richness: float
    inheritance_richness: float
    relationship_richness: float
    class_richness: float
    average_population: float
    axiom_class_ratio: float
    class_relation_ratio: float
    absolute_leaf_cardinality: int
    average_breadth: float
    total_paths: int
    # metric names that were defaulted to 0 because their denominator was 0
    degenerate: tuple[str, ...] = field(default=())

    def as_rows(self) -> list[tuple[str, str]]:
        def fmt(x: float) -> str:
            return f"{x:.6f}".rstrip("0").rstrip(".") if x != int(x) else str(int(x))

        return [
            ("attribute_richness", fmt(self.attribute_richness)),
            ("inheritance_richness", fmt(self.inheritance_richness)),
            ("relationship_richness", fmt(self.relationship_richness)),
            ("class_richness", fmt(self.class_richness)),
            ("average_population", fmt(self.average_population)),
            ("axiom_class_ratio", fmt(self.axiom_class_ratio)),
            ("class_relation_ratio", fmt(self.class_relation_ratio)),
            ("absolute_leaf_cardinality", str(self.absolute_leaf_cardinality)),
            ("average_breadth", fmt(self.average_breadth)),
            ("total_paths", str(self.total_paths)),
        ]


def _collect_classes(store: TripleStore) -> set[Term]:
    classes: set[Term] = set()
    for cls in (OWL_CLASS, RDFS_CLASS):
        classes.update(t.s for t in store.match(p=RDF_TYPE, o=cls))
    for t in store.match(p=RDFS_SUBCLASSOF):
        classes.add(t.s)
        classes.add(t.o)
    for t in store.match(p=RDF_TYPE):
        if t.o not in _META and t.o.is_iri:
            classes.add(t.o)
    return classes


def summarize_ontology(store: TripleStore) -> OntologySummary:
    """Count classes, properties, individuals, and hierarchy shape.

    Raises CycleError when the subclass graph is not a DAG, naming one
    class on the cycle.
    """
    classes = _collect_classes(store)
    data_props = {t.s for t in store.match(p=RDF_TYPE, o=OWL_DATATYPE_PROPERTY)}
    object_props = {t.s for t in store.match(p=RDF_TYPE, o=OWL_OBJECT_PROPERTY)}

    subclass_edges: set[tuple[Term, Term]] = set()
    for t in store.match(p=RDFS_SUBCLASSOF):
        subclass_edges.add((t.s, t.o))

    individuals: set[Term] = set()
    instantiated: set[Term] = set()
    for t in store.match(p=RDF_TYPE):
        if t.o in classes and t.s not in classes and t.s not in data_props | object_props:
            individuals.add(t.s)
            instantiated.add(t.o)

    parents: dict[Term, list[Term]] = {c: [] for c in classes}
    children: dict[Term, list[Term]] = {c: [] for c in classes}
    for child, parent in sorted(subclass_edges, key=lambda e: (e[0].n3(), e[1].n3())):
        parents[child].append(parent)
        children[parent].append(child)

    # Kahn's algorithm, child -> parent direction; leftovers are on a cycle.
    indegree = {c: len(parents[c]) for c in classes}
    queue = sorted((c for c in classes if indegree[c] == 0), key=lambda c: c.n3())
    order: list[Term] = []
    while queue:
        node = queue.pop(0)
        order.append(node)
        for child in children[node]:
            indegree[child] -= 1
            if indegree[child] == 0:
                queue.append(child)
        queue.sort(key=lambda c: c.n3())
    if len(order) < len(classes):
        stuck = sorted((c for c in classes if indegree[c] > 0), key=lambda c: c.n3())
        raise CycleError(f"subclass cycle involving {stuck[0].n3()}")

    # depth = longest parent chain; roots sit at level 0
    depth: dict[Term, int] = {}
    for node in order:
        depth[node] = max((depth[p] + 1 for p in parents[node]), default=0)
    breadths: list[int] = []
    if classes:
        max_depth = max(depth.values())
        breadths = [0] * (max_depth + 1)
        for node in classes:
            breadths[depth[node]] += 1

    # paths(c) = number of distinct parent chains from any root down to c
    paths: dict[Term, int] = {}
    for node in order:
        paths[node] = sum(paths[p] for p in parents[node]) if parents[node] else 1
    leaves = [c for c in classes if not children[c]]

    return OntologySummary(
        class_count=len(classes),
        data_property_count=len(data_props),
        object_property_count=len(object_props),
        individual_count=len(individuals),
        subclass_axiom_count=len(subclass_edges),
        classes_with_instances=len(instantiated),
        axiom_count=len(store),
        leaf_class_count=len(leaves),
        level_breadths=tuple(breadths),
        root_to_leaf_paths=sum(paths[c] for c in leaves),
    )


def compute_metrics(summary: OntologySummary) -> SchemaMetrics:
    """Schema richness ratios from a summary's counts."""
    c = summary.class_count
    if c == 0:
        raise UndefinedMetricsError("metrics undefined for an ontology with no classes")
    if summary.classes_with_instances > c or summary.leaf_class_count > c:
        raise ValueError("inconsistent summary: per-class counts exceed the class count")
    if summary.subclass_axiom_count > c * (c - 1):
        raise ValueError("inconsistent summary: more subclass axioms than class pairs")
    h = summary.subclass_axiom_count
    op = summary.object_property_count
    degenerate = []
    if h + op == 0:
        relationship = 0.0
        class_relation = 0.0
        degenerate += ["relationship_richness", "class_relation_ratio"]
    else:
        relationship = op / (h + op)
        class_relation = c / (h + op)
    if summary.level_breadths:
        average_breadth = sum(summary.level_breadths) / len(summary.level_breadths)
    else:
        average_breadth = 0.0
        degenerate.append("average_breadth")
    return SchemaMetrics(
        attribute_richness=summary.data_property_count / c,
        inheritance_richness=h / c,
        relationship_richness=relationship,
        class_richness=summary.classes_with_instances / c,
        average_population=summary.individual_count / c,
        axiom_class_ratio=summary.axiom_count / c,
        class_relation_ratio=class_relation,
        absolute_leaf_cardinality=summary.leaf_class_count,
        average_breadth=average_breadth,
        total_paths=summary.root_to_leaf_paths,
        degenerate=tuple(degenerate),
    )
