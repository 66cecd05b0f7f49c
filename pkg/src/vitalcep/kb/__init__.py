"""Bundled knowledge base, synthetic generator, and ontology metrics."""

from .generator import generate_kb
from .ontology import (
    CycleError,
    OntologySummary,
    SchemaMetrics,
    UndefinedMetricsError,
    compute_metrics,
    summarize_ontology,
)
from .queries import (
    DISEASE_DRUG_QUERY,
    HYPOXEMIA_QUERY,
    PATIENT_SIDE_EFFECT_QUERY,
    load_benchmark_queries,
)
from .sample import (
    KBEntry,
    SAMPLE_ENTRIES,
    build_sample_store,
    hypoxemia_ground_truth,
    hypoxemia_row,
    load_sample_kb,
)
from .schema import build_schema_store, load_schema_ontology

__all__ = [
    "CycleError",
    "DISEASE_DRUG_QUERY",
    "HYPOXEMIA_QUERY",
    "KBEntry",
    "OntologySummary",
    "PATIENT_SIDE_EFFECT_QUERY",
    "SAMPLE_ENTRIES",
    "SchemaMetrics",
    "UndefinedMetricsError",
    "build_sample_store",
    "build_schema_store",
    "compute_metrics",
    "generate_kb",
    "hypoxemia_ground_truth",
    "hypoxemia_row",
    "load_benchmark_queries",
    "load_sample_kb",
    "load_schema_ontology",
    "summarize_ontology",
]
