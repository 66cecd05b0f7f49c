"""Adaptive threshold models and clinical-range risk classification.

Six threshold computations (constant, step function, average-plus-confidence,
and the three moving averages) plus a per-parameter classifier over the
standard vital-sign bands. All computations are pure; the streaming EWMA
accumulator is the only stateful piece.
"""

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import VitalcepError


class InsufficientHistoryError(VitalcepError):
    """Fewer samples available than the window requires."""


class DomainError(VitalcepError):
    """Input outside the function's defined domain."""


class SampleHistory:
    """Ordered (tick, value) samples, newest last; ticks strictly increase."""

    def __init__(self, samples: Sequence[tuple[int, float]] = ()):
        self._ticks: list[int] = []
        self._values: list[float] = []
        for t, v in samples:
            self.append(t, v)

    def append(self, tick: int, value: float):
        if self._ticks and tick <= self._ticks[-1]:
            raise ValueError(f"tick {tick} not after {self._ticks[-1]}")
        self._ticks.append(tick)
        self._values.append(float(value))

    def __len__(self) -> int:
        return len(self._values)

    @property
    def values(self) -> list[float]:
        return list(self._values)

    def last(self, p: int) -> list[float]:
        if p > len(self._values):
            raise InsufficientHistoryError(f"need {p} samples, have {len(self._values)}")
        return self._values[-p:]


def _window(history, p: int) -> list[float]:
    values = history.values if isinstance(history, SampleHistory) else [float(v) for v in history]
    if p < 1:
        raise ValueError(f"window length must be >= 1, got {p}")
    if len(values) < p:
        raise InsufficientHistoryError(f"need {p} samples, have {len(values)}")
    return values[-p:]


def sma(history, p: int) -> float:
    """Arithmetic mean of the p most recent values."""
    window = _window(history, p)
    return sum(window) / p


def wma(history, p: int, weighting: str = "printed") -> float:
    """Linearly weighted mean of the last p values, newest weighted most.

    The "printed" weighting gives the newest sample weight p-1 down to
    weight 0 for the oldest, which is why p must be at least 2. The
    "shifted" variant uses weights p..1 instead (oldest still counts).
    """
    if p < 2 and weighting == "printed":
        raise ValueError("wma needs p >= 2 (weights would sum to zero)")
    window = _window(history, p)
    newest_first = window[::-1]
    if weighting == "printed":
        weights = [p - i for i in range(1, p + 1)]
    elif weighting == "shifted":
        weights = [p - i + 1 for i in range(1, p + 1)]
    else:
        raise ValueError(f"unknown weighting: {weighting!r}")
    total = sum(weights)
    return sum(w * v for w, v in zip(weights, newest_first)) / total


def ewma_step(previous: float, current: float, alpha: float) -> float:
    """One exponential smoothing step; alpha = 1 passes the input through."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    return alpha * current + (1 - alpha) * previous


def alpha_from_n(n: int) -> float:
    """Smoothing factor for an n-observation span: 2 / (n + 1)."""
    if n < 1:
        raise ValueError(f"observation count must be >= 1, got {n}")
    return 2 / (n + 1)


def ewma(history, alpha: float, initial: float | None = None) -> float:
    """EWMA over the whole history; starts at the first value by default."""
    values = history.values if isinstance(history, SampleHistory) else [float(v) for v in history]
    if not values:
        raise InsufficientHistoryError("ewma needs at least one sample")
    acc = values[0] if initial is None else float(initial)
    start = 1 if initial is None else 0
    for v in values[start:]:
        acc = ewma_step(acc, v, alpha)
    return acc


def step_model(boundaries: Sequence[float], values: Sequence[float], x: float) -> float:
    """Piecewise-constant lookup, right-continuous at interior boundaries.

    Subinterval k is [boundaries[k], boundaries[k+1]); the last one is
    closed at the top so the full domain [a0, an] is covered.
    """
    if len(boundaries) < 2 or len(values) != len(boundaries) - 1:
        raise ValueError("need n+1 strictly increasing boundaries for n values")
    for a, b in zip(boundaries, boundaries[1:]):
        if not a < b:
            raise ValueError(f"boundaries not strictly increasing: {a} then {b}")
    if not boundaries[0] <= x <= boundaries[-1]:
        raise DomainError(f"{x} outside step domain [{boundaries[0]}, {boundaries[-1]}]")
    for k in range(len(values) - 1, -1, -1):
        if x >= boundaries[k]:
            return values[k]
    raise AssertionError("unreachable")


def avg_confidence(history, p: int, z: float) -> float:
    """Recent mean raised by z standard errors (sample std, n-1)."""
    if p < 2:
        raise ValueError("avg_confidence needs p >= 2 for a standard deviation")
    window = _window(history, p)
    mean = sum(window) / p
    variance = sum((v - mean) ** 2 for v in window) / (p - 1)
    return mean + z * math.sqrt(variance) / math.sqrt(p)


# --- threshold model objects -------------------------------------------------


class ThresholdModel:
    """Common protocol: a threshold derived from a sample history."""

    #: samples required before the model yields a value
    min_samples: int = 1

    def threshold(self, history) -> float:
        raise NotImplementedError


@dataclass
class ConstantModel(ThresholdModel):
    c: float
    min_samples = 0

    def threshold(self, history) -> float:
        return self.c


@dataclass
class StepModel(ThresholdModel):
    boundaries: tuple[float, ...]
    values: tuple[float, ...]

    def threshold(self, history) -> float:
        newest = _window(history, 1)[-1]
        return step_model(self.boundaries, self.values, newest)


@dataclass
class SmaModel(ThresholdModel):
    p: int

    def __post_init__(self):
        self.min_samples = self.p

    def threshold(self, history) -> float:
        return sma(history, self.p)


@dataclass
class WmaModel(ThresholdModel):
    p: int
    weighting: str = "printed"

    def __post_init__(self):
        self.min_samples = self.p

    def threshold(self, history) -> float:
        return wma(history, self.p, self.weighting)


@dataclass
class AvgConfidenceModel(ThresholdModel):
    p: int
    z: float

    def __post_init__(self):
        self.min_samples = self.p

    def threshold(self, history) -> float:
        return avg_confidence(history, self.p, self.z)


@dataclass
class EwmaModel(ThresholdModel):
    alpha: float
    initial: float | None = None  # None = first observation

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")

    def threshold(self, history) -> float:
        return ewma(history, self.alpha, self.initial)


class EwmaAccumulator:
    """Incremental EWMA for stream use; single owner per stream."""

    def __init__(self, alpha: float, initial: float | None = None):
        if not 0 < alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {alpha}")
        self.alpha = alpha
        self.value = initial

    def update(self, sample: float) -> float:
        if self.value is None:
            self.value = float(sample)
        else:
            self.value = ewma_step(self.value, sample, self.alpha)
        return self.value


_MODEL_KEYS = {
    "constant": {"c"},
    "step": {"boundaries", "values"},
    "avg_confidence": {"p", "z"},
    "sma": {"p"},
    "wma": {"p", "weighting"},
    "ewma": {"n", "alpha", "initial"},
}


def parse_model_config(text: str) -> ThresholdModel:
    """Build a model from `model=<name> key=value ...` configuration text."""
    fields = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {token!r}")
        fields[key] = value
    name = fields.pop("model", None)
    if name is None:
        raise ValueError("missing model=<name>")
    if name not in _MODEL_KEYS:
        raise ValueError(f"unknown threshold model: {name!r}")
    unknown = set(fields) - _MODEL_KEYS[name]
    if unknown:
        raise ValueError(f"unknown {name} parameter(s): {', '.join(sorted(unknown))}")

    if name == "constant":
        return ConstantModel(float(fields["c"]))
    if name == "step":
        bounds = tuple(float(x) for x in fields["boundaries"].split(","))
        values = tuple(float(x) for x in fields["values"].split(","))
        return StepModel(bounds, values)
    if name == "avg_confidence":
        return AvgConfidenceModel(int(fields["p"]), float(fields["z"]))
    if name == "sma":
        return SmaModel(int(fields["p"]))
    if name == "wma":
        return WmaModel(int(fields["p"]), fields.get("weighting", "printed"))
    alpha = float(fields["alpha"]) if "alpha" in fields else alpha_from_n(int(fields["n"]))
    initial = fields.get("initial", "first")
    return EwmaModel(alpha, None if initial == "first" else float(initial))


# --- clinical ranges ---------------------------------------------------------


class RiskLevel(enum.IntEnum):
    LOW = 0
    MODERATE = 1
    HIGH = 2

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class Interval:
    lo: float | None  # None = unbounded
    hi: float | None
    lo_closed: bool = True
    hi_closed: bool = True

    def __contains__(self, x: float) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True


@dataclass(frozen=True)
class ClinicalRange:
    """Normal/moderate/high bands for one parameter.

    Band edges follow the reference table literally; where adjacent bands
    share an edge the less severe band keeps it (a reading of exactly 100
    BPM is still normal). Values on the non-risk side of normal (e.g. a low
    heart rate) classify as low: only one risk direction is tracked.
    """

    parameter: str
    normal: Interval
    moderate: Interval
    high: Interval

    def classify(self, value: float) -> RiskLevel:
        if value in self.normal:
            return RiskLevel.LOW
        if value in self.moderate:
            return RiskLevel.MODERATE
        if value in self.high:
            return RiskLevel.HIGH
        return RiskLevel.LOW


def _upward(name: str, n_lo: float, n_hi: float, m_hi: float) -> ClinicalRange:
    # risk grows with the value; shared edges stay with the milder band
    return ClinicalRange(
        name,
        normal=Interval(n_lo, n_hi),
        moderate=Interval(n_hi, m_hi, lo_closed=False),
        high=Interval(m_hi, None, lo_closed=False),
    )


DEFAULT_RANGES: dict[str, ClinicalRange] = {
    "HR": _upward("HR", 60, 100, 120),
    "RR": _upward("RR", 12, 20, 24),
    "PWV": _upward("PWV", 5, 9, 12),
    "SBP": _upward("SBP", 90, 120, 140),
    "DBP": _upward("DBP", 60, 80, 90),
    "SpO2": ClinicalRange(
        "SpO2",
        normal=Interval(95, 100),
        moderate=Interval(90, 95, hi_closed=False),
        high=Interval(None, 90, hi_closed=False),
    ),
    "PRV": ClinicalRange(
        "PRV",
        normal=Interval(50, None, lo_closed=False),
        moderate=Interval(30, 50),
        high=Interval(None, 30, hi_closed=False),
    ),
    "HRV": ClinicalRange(
        "HRV",
        normal=Interval(50, None, lo_closed=False),
        moderate=Interval(30, 50),
        high=Interval(None, 30, hi_closed=False),
    ),
    "PI": ClinicalRange(
        "PI",
        normal=Interval(2, None, lo_closed=False),
        moderate=Interval(0.5, 2),
        high=Interval(None, 0.5, hi_closed=False),
    ),
}


def classify(
    parameter: str, value: float, ranges: dict[str, ClinicalRange] | None = None
) -> RiskLevel:
    """Risk level of one reading against its parameter's bands."""
    table = DEFAULT_RANGES if ranges is None else ranges
    try:
        band = table[parameter]
    except KeyError:
        raise VitalcepError(f"no clinical range for parameter {parameter!r}") from None
    return band.classify(value)
