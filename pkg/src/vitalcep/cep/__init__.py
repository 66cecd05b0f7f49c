"""Complex event processing: rule DSL, engine, windows, cohort study."""

from .cohort import (
    CohortReport,
    DEFAULT_SEED,
    PatientOutcome,
    PatientStream,
    build_cohort,
    classify_cohort,
    cohort_csv,
    risk_distribution_csv,
)
from .engine import (
    CepEngine,
    DerivedEvent,
    DuplicateRuleError,
    OrderingError,
    VitalEvent,
    emit_rdf,
    read_events,
    write_derived,
)
from .latency import (
    DEFAULT_LOAD_TIERS,
    LatencyReport,
    LatencyRow,
    measure_deployment_latency,
)
from .rules import (
    DEFAULT_RULE_TEXTS,
    RULE_HEART_RATE_HIGH,
    RULE_HEART_RATE_LOW,
    RULE_HEART_RATE_MODERATE,
    Rule,
    WindowSpec,
    parse_rule,
    parse_rule_file,
)
from .windows import (
    WindowRow,
    compute_windows,
    correlate_within_window,
    window_stats,
    windows_csv,
)

__all__ = [
    "CepEngine",
    "CohortReport",
    "DEFAULT_LOAD_TIERS",
    "DEFAULT_RULE_TEXTS",
    "DEFAULT_SEED",
    "DerivedEvent",
    "DuplicateRuleError",
    "LatencyReport",
    "LatencyRow",
    "OrderingError",
    "PatientOutcome",
    "PatientStream",
    "RULE_HEART_RATE_HIGH",
    "RULE_HEART_RATE_LOW",
    "RULE_HEART_RATE_MODERATE",
    "Rule",
    "VitalEvent",
    "WindowRow",
    "WindowSpec",
    "build_cohort",
    "classify_cohort",
    "cohort_csv",
    "compute_windows",
    "correlate_within_window",
    "emit_rdf",
    "measure_deployment_latency",
    "parse_rule",
    "parse_rule_file",
    "read_events",
    "risk_distribution_csv",
    "window_stats",
    "windows_csv",
    "write_derived",
]
