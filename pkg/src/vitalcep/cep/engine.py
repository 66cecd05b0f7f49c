"""Windowed rule evaluation over vital-sign event streams.

One engine serializes deployment and ingestion on a single lock, so a rule
set never changes mid-event: every event is evaluated against the rule set
as of its processing start. All matching rules fire independently; nothing
suppresses an overlapping rule.
"""

import json
import threading
import time
from dataclasses import dataclass, replace

from ..errors import VitalcepError
from ..rdf import Triple, integer, iri, literal
from ..rdf.vocab import DETECTED_EVENT, HAS_LABEL, HAS_TIMESTAMP, PPG, RDF_TYPE, TRIGGERED_BY
from ..thresholds import (
    ClinicalRange,
    DEFAULT_RANGES,
    InsufficientHistoryError,
    RiskLevel,
    SampleHistory,
    ThresholdModel,
    classify,
)
from .rules import RANGE_KEYS, Rule


class OrderingError(VitalcepError):
    """Event timestamp went backwards within a patient stream."""


class DuplicateRuleError(VitalcepError):
    """A rule id was deployed twice."""


@dataclass(frozen=True)
class VitalEvent:
    ts: int  # milliseconds
    patient_id: str
    hr: float | None = None
    pulse: float | None = None
    resp: float | None = None
    spo2: float | None = None
    extras: tuple[tuple[str, float], ...] = ()

    def value(self, parameter: str) -> float | None:
        if parameter in ("hr", "pulse", "resp", "spo2"):
            return getattr(self, parameter)
        if parameter == "ts":
            return float(self.ts)
        for key, value in self.extras:
            if key == parameter:
                return value
        return None

    def parameters(self) -> list[tuple[str, float]]:
        out = [
            (p, v)
            for p in ("hr", "pulse", "resp", "spo2")
            if (v := getattr(self, p)) is not None
        ]
        out.extend(self.extras)
        return out


@dataclass(frozen=True)
class DerivedEvent:
    ts: int
    patient_id: str
    label: str
    rule_id: str
    parameter: str
    value: float
    threshold: float
    selected: tuple[tuple[str, object], ...] = ()


class CepEngine:
    def __init__(self, ranges: dict[str, ClinicalRange] | None = None, audit: bool = False):
        self.ranges = DEFAULT_RANGES if ranges is None else ranges
        self._lock = threading.Lock()
        self._rules: dict[str, Rule] = {}
        self._last_ts: dict[str, int] = {}
        self._histories: dict[tuple[str, str], SampleHistory] = {}
        self._history_seq: dict[tuple[str, str], int] = {}
        self.events_processed = 0
        self.derived_count = 0
        self._timeline: list[tuple[int, float, int]] = []  # (ts, proc_seconds, derived)
        self._audit: list[tuple[int, tuple[str, ...]]] | None = [] if audit else None

    # -- deployment ----------------------------------------------------------

    def deploy(self, rule: Rule, rule_id: str | None = None) -> tuple[str, float]:
        """Register a rule; returns (rule id, deployment latency seconds).

        The latency includes waiting for in-flight event evaluation, which
        is what grows under load.
        """
        start = time.perf_counter()
        with self._lock:
            rid = rule_id or rule.rule_id or f"R{len(self._rules) + 1}"
            if rid in self._rules:
                raise DuplicateRuleError(f"rule id {rid!r} already deployed")
            self._rules[rid] = replace(rule, rule_id=rid)
        return rid, time.perf_counter() - start

    def rule_ids(self) -> list[str]:
        with self._lock:
            return list(self._rules)

    # -- ingestion -----------------------------------------------------------

    def ingest(self, event: VitalEvent, stream: str | None = None) -> list[DerivedEvent]:
        """Evaluate every deployed rule against the event; all matches fire.

        Rules are routed by stream name only when ``stream`` is given;
        un-routed ingestion evaluates the full rule set.
        """
        start = time.perf_counter()
        with self._lock:
            last = self._last_ts.get(event.patient_id)
            if last is not None and event.ts < last:
                raise OrderingError(
                    f"event at {event.ts} ms precedes {last} ms for patient "
                    f"{event.patient_id}"
                )
            self._last_ts[event.patient_id] = event.ts
            if self._audit is not None:
                self._audit.append((event.ts, tuple(self._rules)))

            derived: list[DerivedEvent] = []
            for rid, rule in self._rules.items():
                if stream is not None and rule.stream != stream:
                    continue
                value = event.value(rule.parameter)
                if value is None:
                    continue
                threshold = self._threshold_for(rule, event, value)
                if threshold is None:
                    continue
                if self._compare(value, rule.comparator, threshold):
                    derived.append(
                        DerivedEvent(
                            ts=event.ts,
                            patient_id=event.patient_id,
                            label=rule.label,
                            rule_id=rid,
                            parameter=rule.parameter,
                            value=value,
                            threshold=threshold,
                            selected=tuple(
                                (f, self._selected_value(event, f)) for f in rule.select_fields
                            ),
                        )
                    )
            self._update_model_histories(event, stream)
            self.events_processed += 1
            self.derived_count += len(derived)
            self._timeline.append((event.ts, time.perf_counter() - start, len(derived)))
            return derived

    def _threshold_for(self, rule: Rule, event: VitalEvent, value: float) -> float | None:
        if not isinstance(rule.threshold, ThresholdModel):
            return float(rule.threshold)
        history = self._histories.get((rule.rule_id, event.patient_id))
        if history is None or len(history) < max(rule.threshold.min_samples, 1):
            return None  # not enough context yet; adaptive rules stay quiet
        try:
            return rule.threshold.threshold(history)
        except (InsufficientHistoryError, VitalcepError):
            return None

    def _update_model_histories(self, event: VitalEvent, stream: str | None):
        for rid, rule in self._rules.items():
            if not isinstance(rule.threshold, ThresholdModel):
                continue
            if stream is not None and rule.stream != stream:
                continue
            value = event.value(rule.parameter)
            if value is None:
                continue
            key = (rid, event.patient_id)
            history = self._histories.get(key)
            if history is None:
                history = self._histories[key] = SampleHistory()
            seq = self._history_seq.get(key, 0)
            history.append(seq, value)  # sequence ticks: ts may repeat
            self._history_seq[key] = seq + 1

    @staticmethod
    def _selected_value(event: VitalEvent, fieldname: str):
        if fieldname == "patient_id":
            return event.patient_id
        if fieldname == "ts":
            return event.ts
        return event.value(fieldname)

    @staticmethod
    def _compare(value: float, op: str, threshold: float) -> bool:
        if op == "<":
            return value < threshold
        if op == ">":
            return value > threshold
        if op == "<=":
            return value <= threshold
        return value >= threshold

    # -- severity and reporting ----------------------------------------------

    def firing_severity(self, event: DerivedEvent) -> RiskLevel:
        """Risk band of the value that triggered the firing."""
        range_key = RANGE_KEYS.get(event.parameter)
        if range_key is None or range_key not in self.ranges:
            return RiskLevel.LOW
        return classify(range_key, event.value, self.ranges)

    @property
    def timeline(self) -> list[tuple[int, float, int]]:
        return list(self._timeline)

    @property
    def audit_log(self) -> list[tuple[int, tuple[str, ...]]]:
        return list(self._audit or ())


def emit_rdf(derived: list[DerivedEvent], namespace: str = PPG) -> list[Triple]:
    """Four triples per derived event: type, label, timestamp, rule."""
    triples = []
    for e in derived:
        subject = iri(f"{namespace}Event_{e.patient_id}_{e.ts}_{e.rule_id}")
        triples.extend(
            [
                Triple(subject, RDF_TYPE, DETECTED_EVENT),
                Triple(subject, HAS_LABEL, literal(e.label)),
                Triple(subject, HAS_TIMESTAMP, integer(e.ts)),
                Triple(subject, TRIGGERED_BY, literal(e.rule_id)),
            ]
        )
    return triples


# -- newline-delimited event IO ------------------------------------------------


def read_events(text: str) -> list[VitalEvent]:
    """Parse newline-delimited JSON events (ts, patient, vitals...)."""
    events = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise VitalcepError(f"line {line_no}: bad event record: {exc}") from None
        known = {"ts", "patient", "hr", "pulse", "resp", "spo2"}
        extras = tuple(
            (k, float(v)) for k, v in sorted(record.items()) if k not in known
        )
        events.append(
            VitalEvent(
                ts=int(record["ts"]),
                patient_id=str(record["patient"]),
                hr=record.get("hr"),
                pulse=record.get("pulse"),
                resp=record.get("resp"),
                spo2=record.get("spo2"),
                extras=extras,
            )
        )
    return events


def write_derived(events: list[DerivedEvent]) -> str:
    lines = []
    for e in events:
        record = {
            "ts": e.ts,
            "patient": e.patient_id,
            "label": e.label,
            "rule": e.rule_id,
            "parameter": e.parameter,
            "value": e.value,
            "threshold": e.threshold,
        }
        record.update({f"select_{k}": v for k, v in e.selected})
        lines.append(json.dumps(record, sort_keys=True))
    return "\n".join(lines) + ("\n" if lines else "")
