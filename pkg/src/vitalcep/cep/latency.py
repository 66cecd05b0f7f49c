"""Rule deployment latency measurement under synthetic event load.

For each load tier a fresh engine is fed random vitals events at the target
rate by a background thread while rules deploy one at a time; the measured
deployment wall time includes lock contention with in-flight evaluation.
Absolute numbers are hardware-bound; the report records them as measured.
"""

import random
import threading
import time
from collections.abc import Sequence
from dataclasses import dataclass

from .engine import CepEngine, VitalEvent
from .rules import Rule, parse_rule

DEFAULT_LOAD_TIERS = (0, 8_000, 16_000, 32_000, 48_000)


@dataclass(frozen=True)
class LatencyRow:
    rule: str
    load_eps: int
    deploy_seconds: float


@dataclass
class LatencyReport:
    rows: list[LatencyRow]

    CSV_HEADER = "rule,load_eps,deploy_seconds"

    def to_csv(self) -> str:
        out = [self.CSV_HEADER]
        for r in self.rows:
            out.append(f"{r.rule},{r.load_eps},{r.deploy_seconds:.6f}")
        return "\n".join(out) + "\n"


class _LoadFeeder(threading.Thread):
    """Best-effort constant-rate event source for one engine."""

    def __init__(self, engine: CepEngine, events_per_second: int, seed: int):
        super().__init__(daemon=True)
        self.engine = engine
        self.eps = events_per_second
        self.rng = random.Random(seed)
        self.stop_flag = threading.Event()
        self.sent = 0

    def run(self):
        start = time.perf_counter()
        ts = 0
        while not self.stop_flag.is_set():
            target = int((time.perf_counter() - start) * self.eps)
            if self.sent >= target:
                time.sleep(0.0005)
                continue
            self.engine.ingest(
                VitalEvent(
                    ts=ts,
                    patient_id=f"L{self.rng.randrange(64)}",
                    hr=self.rng.randint(55, 150),
                    spo2=self.rng.randint(85, 100),
                )
            )
            ts += 1
            self.sent += 1

    def stop(self):
        self.stop_flag.set()
        self.join(timeout=5)


def measure_deployment_latency(
    rules: Sequence[str | Rule],
    loads: tuple[int, ...] = DEFAULT_LOAD_TIERS,
    settle_seconds: float = 0.05,
    seed: int = 0,
) -> LatencyReport:
    """Deploy every rule at every load tier and record the elapsed time."""
    parsed = [parse_rule(r) if isinstance(r, str) else r for r in rules]
    rows = []
    for load in loads:
        engine = CepEngine()
        feeder = _LoadFeeder(engine, load, seed) if load > 0 else None
        if feeder:
            feeder.start()
            time.sleep(settle_seconds)
        try:
            for i, rule in enumerate(parsed, start=1):
                rid, latency = engine.deploy(rule, f"R{i}")
                rows.append(LatencyRow(rid, load, latency))
                if feeder:
                    time.sleep(settle_seconds)
        finally:
            if feeder:
                feeder.stop()
    return LatencyReport(rows)
