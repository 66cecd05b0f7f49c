"""Cohort-level risk classification and the synthetic study generator.

A patient is marked diseased when any rule firing lands in the moderate or
high clinical band of its triggering value; disease-free when every reading
of every ranged parameter classifies low; undetected otherwise (abnormal
readings outside every deployed rule's criteria). Accuracy scores detected
and disease-free calls against supplied ground-truth labels; undetected
patients never score.
"""

import random
from dataclasses import dataclass, field

from ..errors import VitalcepError
from ..thresholds import ClinicalRange, RiskLevel, classify
from .engine import CepEngine, VitalEvent
from .rules import DEFAULT_RULE_TEXTS, RANGE_KEYS, Rule, parse_rule

TRUTH_DISEASED = "diseased"
TRUTH_FREE = "free"

OUTCOME_DISEASED = "diseased"
OUTCOME_FREE = "disease-free"
OUTCOME_UNDETECTED = "undetected"

DEFAULT_SEED = 1729


@dataclass
class PatientStream:
    patient_id: str
    events: list[VitalEvent]
    truth: str  # TRUTH_DISEASED | TRUTH_FREE


@dataclass
class PatientOutcome:
    patient_id: str
    outcome: str
    labels: tuple[str, ...] = ()
    risk: RiskLevel = RiskLevel.LOW


@dataclass
class CohortReport:
    outcomes: list[PatientOutcome]
    diseased_count: int
    free_count: int
    undetected_count: int
    accuracy: float
    # label -> {risk level name -> patient count}; the risk-distribution view
    risk_distribution: dict[str, dict[str, int]] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.outcomes)


def classify_cohort(
    patients: list[PatientStream],
    rules: list[Rule] | None = None,
    ranges: dict[str, ClinicalRange] | None = None,
) -> CohortReport:
    if not patients:
        raise VitalcepError("empty cohort")
    if rules is None:
        rules = [parse_rule(text) for text in DEFAULT_RULE_TEXTS]

    engine = CepEngine(ranges=ranges)
    for i, rule in enumerate(rules, start=1):
        engine.deploy(rule, rule.rule_id or f"R{i}")

    outcomes = []
    correct = 0
    distribution: dict[str, dict[str, int]] = {}
    for patient in patients:
        if not patient.events:
            raise VitalcepError(f"patient {patient.patient_id} has no events")
        qualifying: dict[str, RiskLevel] = {}
        for event in patient.events:
            for derived in engine.ingest(event):
                severity = engine.firing_severity(derived)
                if severity >= RiskLevel.MODERATE:
                    current = qualifying.get(derived.label, RiskLevel.LOW)
                    qualifying[derived.label] = max(current, severity)

        if qualifying:
            risk = max(qualifying.values())
            outcome = PatientOutcome(
                patient.patient_id,
                OUTCOME_DISEASED,
                labels=tuple(sorted(qualifying)),
                risk=risk,
            )
            for label, severity in qualifying.items():
                bucket = distribution.setdefault(label, {"moderate": 0, "high": 0})
                bucket[str(severity)] += 1
            if patient.truth == TRUTH_DISEASED:
                correct += 1
        elif _all_readings_low(patient, engine.ranges):
            outcome = PatientOutcome(patient.patient_id, OUTCOME_FREE)
            if patient.truth == TRUTH_FREE:
                correct += 1
        else:
            outcome = PatientOutcome(patient.patient_id, OUTCOME_UNDETECTED)
        outcomes.append(outcome)

    return CohortReport(
        outcomes=outcomes,
        diseased_count=sum(1 for o in outcomes if o.outcome == OUTCOME_DISEASED),
        free_count=sum(1 for o in outcomes if o.outcome == OUTCOME_FREE),
        undetected_count=sum(1 for o in outcomes if o.outcome == OUTCOME_UNDETECTED),
        accuracy=correct / len(patients),
        risk_distribution=distribution,
    )


def _all_readings_low(patient: PatientStream, ranges: dict[str, ClinicalRange]) -> bool:
    for event in patient.events:
        for parameter, value in event.parameters():
            range_key = RANGE_KEYS.get(parameter)
            if range_key is None or range_key not in ranges:
                continue
            if classify(range_key, value, ranges) != RiskLevel.LOW:
                return False
    return True


def build_cohort(
    diseased: int = 60,
    free: int = 9,
    borderline: int = 12,
    seed: int = DEFAULT_SEED,
    events_per_patient: int = 10,
) -> list[PatientStream]:
    """Synthetic cohort with known composition under the default rules.

    Diseased patients carry at least one tachycardic reading; borderline
    patients stay rule-quiet but drift into the moderate SpO2 or respiration
    band (ground-truth diseased, expected undetected); the rest are normal
    everywhere.
    """
    rng = random.Random(seed)
    patients = []
    counter = 0

    def normal_event(ts: int, pid: str) -> VitalEvent:
        hr = rng.randint(62, 98)
        return VitalEvent(
            ts=ts,
            patient_id=pid,
            hr=hr,
            pulse=hr + rng.randint(-2, 2),
            resp=rng.randint(12, 20),
            spo2=rng.randint(95, 100),
        )

    def build(kind: str) -> PatientStream:
        nonlocal counter
        counter += 1
        pid = f"P{counter:03d}"
        events = [normal_event(t * 1000, pid) for t in range(events_per_patient)]
        if kind == "diseased":
            hot = rng.randrange(events_per_patient)
            hr = rng.choice([rng.randint(105, 120), rng.randint(125, 180)])
            events[hot] = VitalEvent(
                ts=hot * 1000,
                patient_id=pid,
                hr=hr,
                pulse=min(hr + rng.randint(-2, 2), 250),
                resp=rng.randint(12, 20),
                spo2=rng.randint(95, 100),
            )
            truth = TRUTH_DISEASED
        elif kind == "borderline":
            off = rng.randrange(events_per_patient)
            base = events[off]
            if rng.random() < 0.5:
                events[off] = VitalEvent(
                    ts=base.ts,
                    patient_id=pid,
                    hr=base.hr,
                    pulse=base.pulse,
                    resp=base.resp,
                    spo2=rng.randint(90, 94),
                )
            else:
                events[off] = VitalEvent(
                    ts=base.ts,
                    patient_id=pid,
                    hr=base.hr,
                    pulse=base.pulse,
                    resp=rng.randint(21, 24),
                    spo2=base.spo2,
                )
            truth = TRUTH_DISEASED
        else:
            truth = TRUTH_FREE
        return PatientStream(pid, events, truth)

    for _ in range(diseased):
        patients.append(build("diseased"))
    for _ in range(free):
        patients.append(build("free"))
    for _ in range(borderline):
        patients.append(build("borderline"))
    return patients


def cohort_csv(report: CohortReport) -> str:
    out = ["patient,outcome,risk,labels"]
    for o in report.outcomes:
        out.append(f"{o.patient_id},{o.outcome},{o.risk},{'|'.join(o.labels)}")
    return "\n".join(out) + "\n"


def risk_distribution_csv(report: CohortReport) -> str:
    out = ["label,moderate,high"]
    for label in sorted(report.risk_distribution):
        bucket = report.risk_distribution[label]
        out.append(f"{label},{bucket['moderate']},{bucket['high']}")
    return "\n".join(out) + "\n"
