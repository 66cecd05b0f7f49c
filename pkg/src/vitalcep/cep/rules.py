"""Rule DSL for stream filtering and derived-event emission.

Grammar (one rule per statement, terminated by ';'):

    from <Stream> [ <param> <op> <threshold> ]
        select <field>, <field>, ...
        insert into (<Label>) [window(<kind> <length>[ <slide>])];

Thresholds are a bare number (``100``), a unit-annotated number
(``100 BPM`` - the unit is validated then ignored), a named threshold
(``heartRate_threshold (100 BPM)``), or an adaptive model reference
(``ewma(n=5)``). Comparators are <, >, <=, >=.
"""

import re
from dataclasses import dataclass, field

from ..errors import ParseError
from ..thresholds import ThresholdModel, parse_model_config

COMPARATORS = ("<=", ">=", "<", ">")

# rule-text spellings -> canonical event fields
PARAMETER_ALIASES = {
    "heartrate": "hr",
    "heart_rate": "hr",
    "hr": "hr",
    "pulse": "pulse",
    "pulserate": "pulse",
    "pr": "pulse",
    "resp": "resp",
    "resprate": "resp",
    "respirationrate": "resp",
    "rr": "resp",
    "spo2": "spo2",
    "oxygensaturation": "spo2",
    "pwv": "pwv",
    "prv": "prv",
    "sbp": "sbp",
    "dbp": "dbp",
    "hrv": "hrv",
    "pi": "pi",
    "patientid": "patient_id",
    "patient_id": "patient_id",
    "ts": "ts",
    "timestamp": "ts",
}

# canonical event field -> clinical range table key
RANGE_KEYS = {
    "hr": "HR",
    "pulse": "HR",  # pulse rate shares the heart-rate bands
    "resp": "RR",
    "spo2": "SpO2",
    "pwv": "PWV",
    "prv": "PRV",
    "sbp": "SBP",
    "dbp": "DBP",
    "hrv": "HRV",
    "pi": "PI",
}

_MODEL_NAMES = ("constant", "step", "sma", "wma", "ewma", "avg_confidence")


@dataclass(frozen=True)
class WindowSpec:
    kind: str  # "tumbling" | "sliding"
    length_ms: int
    slide_ms: int | None = None

    def __post_init__(self):
        if self.kind not in ("tumbling", "sliding"):
            raise ValueError(f"unknown window kind: {self.kind!r}")
        if self.length_ms <= 0:
            raise ValueError("window length must be positive")
        if self.kind == "sliding":
            if self.slide_ms is None or not 0 < self.slide_ms <= self.length_ms:
                raise ValueError("slide must satisfy 0 < slide <= length")
        elif self.slide_ms is not None:
            raise ValueError("tumbling windows take no slide")

    @property
    def step_ms(self) -> int:
        return self.length_ms if self.kind == "tumbling" else self.slide_ms


@dataclass
class Rule:
    stream: str
    parameter: str  # canonical event field
    comparator: str
    threshold: float | ThresholdModel
    select_fields: tuple[str, ...]  # canonical event fields
    label: str
    window: WindowSpec | None = None
    threshold_name: str | None = None
    raw_parameter: str = ""
    rule_id: str | None = None
    raw_select: tuple[str, ...] = field(default=(), repr=False)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def error(self, message: str) -> ParseError:
        return ParseError(f"{message} at position {self.pos}", text=self.text.strip())

    def match(self, pattern: str, what: str) -> str:
        self.skip_ws()
        m = re.compile(pattern).match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def try_match(self, pattern: str) -> str | None:
        self.skip_ws()
        m = re.compile(pattern).match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def keyword(self, word: str):
        got = self.try_match(r"[A-Za-z_]+")
        if got is None or got.lower() != word:
            raise self.error(f"expected keyword {word!r}" + (f", got {got!r}" if got else ""))


def _canonical_field(name: str, scanner: _Scanner) -> str:
    canonical = PARAMETER_ALIASES.get(name.lower())
    if canonical is None:
        raise scanner.error(f"unknown event field {name!r}")
    return canonical


def _duration_ms(token: str, scanner: _Scanner) -> int:
    m = re.fullmatch(r"(\d+)(ms|s|m)?", token)
    if not m:
        raise scanner.error(f"bad duration {token!r}")
    value = int(m.group(1))
    unit = m.group(2) or "ms"
    return value * {"ms": 1, "s": 1000, "m": 60_000}[unit]


def _parse_threshold(scanner: _Scanner) -> tuple[float | ThresholdModel, str | None]:
    number = scanner.try_match(r"[+-]?\d+(\.\d+)?")
    if number is not None:
        scanner.try_match(r"[A-Za-z%][A-Za-z%/]*")  # optional unit, validated by shape
        return float(number), None
    name = scanner.try_match(r"[A-Za-z_][A-Za-z0-9_]*")
    if name is None:
        raise scanner.error("expected threshold value")
    scanner.match(r"\(", "'(' after named threshold")
    if name.lower() in _MODEL_NAMES:
        body = scanner.match(r"[^)]*", "model arguments")
        config = f"model={name.lower()} " + " ".join(
            part.strip() for part in body.split(",") if part.strip()
        )
        try:
            model = parse_model_config(config.strip())
        except ValueError as exc:
            raise scanner.error(str(exc)) from None
        scanner.match(r"\)", "')'")
        return model, name
    inner = scanner.match(r"[+-]?\d+(\.\d+)?", "number inside named threshold")
    scanner.try_match(r"[A-Za-z%][A-Za-z%/]*")
    scanner.match(r"\)", "')'")
    return float(inner), name


def parse_rule(text: str) -> Rule:
    scanner = _Scanner(text)
    scanner.keyword("from")
    stream = scanner.match(r"[A-Za-z_][A-Za-z0-9_]*", "stream name")

    scanner.match(r"\[", "'['")
    raw_param = scanner.match(r"[A-Za-z_][A-Za-z0-9_]*", "parameter name")
    op = scanner.try_match(r"<=|>=|<|>")
    if op is None:
        bad = scanner.try_match(r"\S+")
        raise scanner.error(f"unknown comparator {bad!r}")
    parameter = _canonical_field(raw_param, scanner)
    threshold, threshold_name = _parse_threshold(scanner)
    scanner.match(r"\]", "']'")

    scanner.keyword("select")
    raw_fields: list[str] = []
    while True:
        name = scanner.match(r"[A-Za-z_][A-Za-z0-9_]*", "select field")
        if name.lower() == "insert":
            # a trailing comma before 'insert into' is tolerated
            break
        raw_fields.append(name)
        if scanner.try_match(r",") is None:
            scanner.keyword("insert")
            break
    if not raw_fields:
        raise scanner.error("select needs at least one field")
    fields = tuple(_canonical_field(f, scanner) for f in raw_fields)

    scanner.keyword("into")
    scanner.match(r"\(", "'('")
    label = scanner.match(r"[^()]*", "label").strip()
    if not label:
        raise scanner.error("empty label")
    scanner.match(r"\)", "')'")

    window = None
    if scanner.try_match(r"window\b") is not None:
        scanner.match(r"\(", "'(' after window")
        kind = scanner.match(r"[A-Za-z]+", "window kind").lower()
        length = _duration_ms(scanner.match(r"\d+(?:ms|s|m)?", "window length"), scanner)
        slide_tok = scanner.try_match(r"\d+(?:ms|s|m)?")
        slide = _duration_ms(slide_tok, scanner) if slide_tok else None
        scanner.match(r"\)", "')'")
        try:
            window = WindowSpec(kind, length, slide)
        except ValueError as exc:
            raise scanner.error(str(exc)) from None

    scanner.match(r";", "terminating ';'")
    scanner.skip_ws()
    if scanner.pos != len(scanner.text):
        raise scanner.error("trailing content after ';'")

    return Rule(
        stream=stream,
        parameter=parameter,
        comparator=op,
        threshold=threshold,
        select_fields=fields,
        label=label,
        window=window,
        threshold_name=threshold_name,
        raw_parameter=raw_param,
        raw_select=tuple(raw_fields),
    )


def parse_rule_file(text: str) -> list[Rule]:
    """One rule per ';'-terminated statement; blank and '#' lines skipped."""
    rules = []
    buffer: list[str] = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        buffer.append(raw)
        if stripped.endswith(";"):
            rules.append(parse_rule(" ".join(buffer)))
            buffer = []
    if buffer:
        raise ParseError("rule not terminated by ';'", text=" ".join(buffer).strip())
    return rules


RULE_HEART_RATE_LOW = (
    "from Heart_Rate [heartRate < heartRate_threshold (100 BPM)] "
    "select heartRate, patientId, insert into (Less chances of Tachycardia);"
)
RULE_HEART_RATE_MODERATE = (
    "from Heart_Rate [heartRate > heartRate_threshold (100 BPM)] "
    "select heartRate, patientId, insert into (Moderate chances of Tachycardia);"
)
RULE_HEART_RATE_HIGH = (
    "from Heart_Rate [heartRate > heartRate_threshold (120 BPM)] "
    "select heartRate, patientId, insert into (Tachycardia);"
)
DEFAULT_RULE_TEXTS = (
    RULE_HEART_RATE_LOW,
    RULE_HEART_RATE_MODERATE,
    RULE_HEART_RATE_HIGH,
)
