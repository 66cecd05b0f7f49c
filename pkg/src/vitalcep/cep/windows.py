"""Tumbling and sliding window statistics over processed event timelines.

Windows are anchored at the first event's timestamp and the timeline is
extended to the next slide boundary past the last event, so a 20-second
stream yields two 10 s tumbling windows, or three full 10 s windows sliding
by 5 s. Tumbling windows partition the events; sliding windows overlap.
"""

import math
from dataclasses import dataclass

from .rules import WindowSpec


@dataclass(frozen=True)
class WindowRow:
    start_ms: int
    end_ms: int
    event_count: int
    elapsed_seconds: float
    derived_count: int


def compute_windows(
    timeline: list[tuple[int, float, int]], spec: WindowSpec
) -> list[WindowRow]:
    """Aggregate (ts, processing seconds, derived count) records per window."""
    if not timeline:
        return []
    ordered = sorted(timeline, key=lambda r: r[0])
    anchor = ordered[0][0]
    last = ordered[-1][0]
    step = spec.step_ms
    horizon = anchor + math.ceil((last + 1 - anchor) / step) * step

    rows = []
    start = anchor
    while start + spec.length_ms <= horizon:
        end = start + spec.length_ms
        events = [r for r in ordered if start <= r[0] < end]
        rows.append(
            WindowRow(
                start_ms=start,
                end_ms=end,
                event_count=len(events),
                elapsed_seconds=sum(r[1] for r in events),
                derived_count=sum(r[2] for r in events),
            )
        )
        start += step
    return rows


def window_stats(engine, spec: WindowSpec) -> list[WindowRow]:
    """Per-window report over everything the engine has processed."""
    return compute_windows(engine.timeline, spec)


def windows_csv(rows: list[WindowRow]) -> str:
    out = ["start_ms,end_ms,events,elapsed_seconds,derived_events"]
    for r in rows:
        out.append(
            f"{r.start_ms},{r.end_ms},{r.event_count},{r.elapsed_seconds:.6f},{r.derived_count}"
        )
    return "\n".join(out) + "\n"


def correlate_within_window(
    left, right, window_ms: int, same_patient: bool = True
) -> list[tuple]:
    """Windowed AND over two derived-event streams.

    Pairs every left event with every right event no more than ``window_ms``
    apart (and for the same patient unless disabled). This is the generic
    combinator for correlation patterns like rising-rate plus abnormal-wave;
    no specific clinical pairing is built in.
    """
    if window_ms <= 0:
        raise ValueError("window must be positive")
    by_ts = sorted(right, key=lambda e: e.ts)
    out = []
    for a in sorted(left, key=lambda e: e.ts):
        for b in by_ts:
            if b.ts < a.ts - window_ms:
                continue
            if b.ts > a.ts + window_ms:
                break
            if same_patient and a.patient_id != b.patient_id:
                continue
            out.append((a, b))
    return out
