"""Sensor CSV parsing, cleanup, and conversion to RDF.

A recording is one row per second with columns Time, HR, PULSE, RESP, SpO2.
Cleanup fills gaps and knocks implausible values back into range; conversion
emits six triples per row (type, time, and the four vitals) with integer
literals, matching the converter contract the rest of the pipeline assumes.
"""

import csv as _csv
import io
from dataclasses import dataclass, field, replace
from decimal import Decimal, ROUND_HALF_UP

from .errors import ParseError, SchemaError, VitalcepError
from .rdf import Triple, integer, iri, literal
from .rdf.terms import XSD_DECIMAL
from .rdf.vocab import (
    HAS_HR,
    HAS_PULSE,
    HAS_RESP,
    HAS_SPO2,
    HAS_TIME,
    PPG,
    PPG_DATA,
    RDF_TYPE,
)

PARAMETERS = ("hr", "pulse", "resp", "spo2")

# Physiological plausibility intervals; values outside are treated as
# sensor artifacts and re-imputed.
DEFAULT_BOUNDS = {
    "hr": (20.0, 250.0),
    "pulse": (20.0, 250.0),
    "resp": (4.0, 60.0),
    "spo2": (50.0, 100.0),
}

_COLUMNS = {"time": "time", "hr": "hr", "pulse": "pulse", "resp": "resp", "spo2": "spo2"}


class UnrecoverableColumnError(VitalcepError):
    """A parameter had no usable value anywhere in the recording."""


@dataclass
class PPGRecord:
    """One per-second sample; None marks a missing cell before cleanup."""

    time: int
    hr: float | None
    pulse: float | None
    resp: float | None
    spo2: float | None

    def get(self, parameter: str) -> float | None:
        return getattr(self, parameter)


@dataclass
class PreprocessConfig:
    imputation: str = "linear-interpolation"  # or "forward-fill"
    outlier_bounds: dict[str, tuple[float, float]] = field(
        default_factory=lambda: dict(DEFAULT_BOUNDS)
    )
    normalize_export: bool = False

    def __post_init__(self):
        if self.imputation not in ("linear-interpolation", "forward-fill"):
            raise ValueError(f"unknown imputation method: {self.imputation!r}")
        for name, (lo, hi) in self.outlier_bounds.items():
            if not lo < hi:
                raise ValueError(f"empty bounds for {name}: [{lo}, {hi}]")


def parse_csv(text: str) -> list[PPGRecord]:
    """Parse a recording; cells may be empty (missing) but never junk."""
    reader = _csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty input: missing header row") from None
    positions: dict[str, int] = {}
    for idx, name in enumerate(header):
        key = name.strip().lower()
        if key in _COLUMNS:
            positions[_COLUMNS[key]] = idx
    for required in ("time", *PARAMETERS):
        if required not in positions:
            raise SchemaError(f"missing required column: {required.upper()}")

    records = []
    for row_no, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue

        def cell(col: str) -> float | None:
            idx = positions[col]
            raw = row[idx].strip() if idx < len(row) else ""
            if not raw:
                return None
            try:
                return float(raw)
            except ValueError:
                raise ParseError(
                    f"non-numeric value {raw!r} in column {col.upper()}", line=row_no
                ) from None

        t = cell("time")
        if t is None:
            raise ParseError("missing Time value", line=row_no)
        records.append(
            PPGRecord(int(t), cell("hr"), cell("pulse"), cell("resp"), cell("spo2"))
        )
    return records


def _interpolate(times: list[int], values: list[float | None]) -> list[float]:
    present = [i for i, v in enumerate(values) if v is not None]
    filled: list[float] = []
    for i in range(len(values)):
        if values[i] is not None:
            filled.append(values[i])
            continue
        before = max((j for j in present if j < i), default=None)
        after = min((j for j in present if j > i), default=None)
        if before is None:
            filled.append(values[after])
        elif after is None:
            filled.append(values[before])
        else:
            t0, t1 = times[before], times[after]
            v0, v1 = values[before], values[after]
            filled.append(v0 + (v1 - v0) * (times[i] - t0) / (t1 - t0))
    return filled


def _forward_fill(values: list[float | None]) -> list[float]:
    first = next(v for v in values if v is not None)
    filled = []
    last = first
    for v in values:
        if v is not None:
            last = v
        filled.append(last)
    return filled


def preprocess(
    records: list[PPGRecord], config: PreprocessConfig | None = None
) -> list[PPGRecord]:
    """Fill missing cells and re-impute out-of-bounds values.

    Interior gaps are linearly interpolated over the time axis; leading and
    trailing gaps take the nearest present value. Idempotent: clean input
    comes back unchanged.
    """
    if config is None:
        config = PreprocessConfig()
    if not records:
        return []
    times = [r.time for r in records]
    if times[0] < 0:
        raise ValueError(f"negative timestamp: {times[0]}")
    for a, b in zip(times, times[1:]):
        if b <= a:
            raise ValueError(f"timestamps not strictly increasing: {a} then {b}")

    columns: dict[str, list[float]] = {}
    for param in PARAMETERS:
        lo, hi = config.outlier_bounds[param]
        masked = [
            v if (v := r.get(param)) is not None and lo <= v <= hi else None for r in records
        ]
        if all(v is None for v in masked):
            raise UnrecoverableColumnError(
                f"parameter {param.upper()} has no usable value in the recording"
            )
        if config.imputation == "forward-fill":
            columns[param] = _forward_fill(masked)
        else:
            columns[param] = _interpolate(times, masked)

    out = []
    for i, r in enumerate(records):
        out.append(
            replace(
                r,
                hr=columns["hr"][i],
                pulse=columns["pulse"][i],
                resp=columns["resp"][i],
                spo2=columns["spo2"][i],
            )
        )
    return out


def apply_export_options(
    records: list[PPGRecord], config: PreprocessConfig
) -> tuple[list[PPGRecord], bool]:
    """Export-side transform: (records, integer_literals flag).

    Normalization never feeds back into rule evaluation; it only changes
    what gets serialized, and normalized values are kept as decimals.
    """
    if config.normalize_export:
        return normalize(records), False
    return records, True


def normalize(records: list[PPGRecord]) -> list[PPGRecord]:
    """Min-max scale each parameter to [0, 1]; export helper only."""
    out = [replace(r) for r in records]
    for param in PARAMETERS:
        values = [r.get(param) for r in records]
        if any(v is None for v in values):
            raise ValueError("normalize requires preprocessed records")
        lo, hi = min(values), max(values)
        span = hi - lo
        for r, v in zip(out, values):
            setattr(r, param, 0.0 if span == 0 else (v - lo) / span)
    return out


def _round_half_up(value: float) -> int:
    return int(Decimal(repr(value)).quantize(Decimal("1"), rounding=ROUND_HALF_UP))


def convert(
    records: list[PPGRecord],
    patient_id: str,
    namespace: str = PPG,
    integer_literals: bool = True,
) -> list[Triple]:
    """Emit exactly six triples per record.

    Subjects embed the patient id so multi-patient stores cannot collide;
    values are rounded half-up to xsd:integer unless ``integer_literals``
    is disabled.
    """
    triples = []
    for r in records:
        for param in PARAMETERS:
            if r.get(param) is None:
                raise ValueError(f"record at time {r.time} still has missing {param.upper()}")
        subject = iri(f"{namespace}Time_{patient_id}_{r.time}")

        def value_term(v: float):
            if integer_literals:
                return integer(_round_half_up(v))
            # plain notation: xsd:decimal admits no exponent
            return literal(format(Decimal(repr(float(v))), "f"), XSD_DECIMAL)

        triples.extend(
            [
                Triple(subject, RDF_TYPE, PPG_DATA),
                Triple(subject, HAS_TIME, integer(r.time)),
                Triple(subject, HAS_HR, value_term(r.hr)),
                Triple(subject, HAS_PULSE, value_term(r.pulse)),
                Triple(subject, HAS_RESP, value_term(r.resp)),
                Triple(subject, HAS_SPO2, value_term(r.spo2)),
            ]
        )
    return triples
